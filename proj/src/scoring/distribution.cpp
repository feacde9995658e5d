#include "owal/scoring/distribution.hpp"

#include <cmath>
#include <stdexcept>

#include "owal/error.hpp"

namespace owal::scoring {

LabelDistribution label_distribution(const FrameRecord& frame, const ClassCatalog& catalog) {
  LabelDistribution dist;
  dist.class_ids = catalog.effective_known_ids();
  dist.components.assign(dist.class_ids.size() + 1, 0.0);
  dist.n_boxes = frame.boxes.size();

  if (frame.boxes.empty()) {
    dist.components.back() = 1.0;
    return dist;
  }

  for (const PredictedBox& box : frame.boxes) {
    const int idx = catalog.effective_index(box.label);
    if (idx < 0) {
      throw DataError("frame " + frame.frame_id + ": box label " +
                      std::to_string(box.label) + " is not an effective known class");
    }
    dist.components[static_cast<std::size_t>(idx)] += box.confidence;
    dist.components.back() += 1.0 - box.confidence;
  }
  const double n = static_cast<double>(dist.n_boxes);
  for (double& c : dist.components) c /= n;
  return dist;
}

std::map<std::string, double> relationship_diagnostics(const LabelDistribution& dist,
                                                       const FrameRecord& frame) {
  if (frame.boxes.empty()) {
    throw std::invalid_argument("relationship diagnostics require a non-empty frame");
  }

  std::map<std::string, double> out;
  out["n_boxes"] = static_cast<double>(frame.boxes.size());

  std::map<int, int> counts;
  std::map<int, double> conf_sums;
  for (const PredictedBox& box : frame.boxes) {
    counts[box.label] += 1;
    conf_sums[box.label] += box.confidence;
  }
  for (const auto& [label, n] : counts) {
    out["count_" + std::to_string(label)] = static_cast<double>(n);
    out["mean_confidence_" + std::to_string(label)] = conf_sums[label] / n;
  }

  if (dist.class_ids.size() == 2) {
    const int a = dist.class_ids[0];
    const int b = dist.class_ids[1];
    if (counts.count(a) > 0 && counts.count(b) > 0) {
      const double pa = conf_sums[a] / counts[a];
      const double pb = conf_sums[b] / counts[b];
      if (pa + pb > 0.0) {
        out["harmonic_mean"] = 2.0 * pa * pb / (pa + pb);
      }
    }
  }

  bool uniform = true;
  for (double c : dist.components) {
    if (std::abs(c - dist.components.front()) > 1e-6) {
      uniform = false;
      break;
    }
  }
  out["max_entropy"] = uniform ? 1.0 : 0.0;
  return out;
}

}  // namespace owal::scoring
