#include "owal/sim/detector.hpp"

#include <algorithm>
#include <cmath>

#include "owal/rng.hpp"

namespace owal::sim {

namespace {

constexpr double kMinSize = 0.05;

double clamp_heading(double heading) {
  while (heading < -M_PI) heading += 2.0 * M_PI;
  while (heading >= M_PI) heading -= 2.0 * M_PI;
  return heading;
}

// One-hot blended toward uniform by the residual (1 - confidence), then
// rescaled so the peak entry equals the stored confidence exactly.
std::vector<double> make_scores(int label, double confidence, const std::vector<int>& class_ids) {
  const double c = static_cast<double>(class_ids.size());
  std::vector<double> scores(class_ids.size(), (1.0 - confidence) / c);
  for (std::size_t i = 0; i < class_ids.size(); ++i) {
    if (class_ids[i] == label) scores[i] += confidence;
  }
  const double peak = confidence + (1.0 - confidence) / c;
  if (peak > 0.0) {
    const double scale = confidence / peak;
    for (double& s : scores) s *= scale;
  }
  return scores;
}

PredictedBox jittered_box(const GroundTruthBox& gt, int label, double confidence,
                          double noise_scale, const std::vector<int>& class_ids, Rng& rng) {
  PredictedBox box;
  box.label = label;
  box.confidence = confidence;
  for (std::size_t d = 0; d < 3; ++d) {
    box.center[d] = gt.center[d] + rng.normal(0.0, noise_scale);
    box.size[d] = std::max(kMinSize, gt.size[d] + rng.normal(0.0, noise_scale));
  }
  box.heading = clamp_heading(gt.heading);
  box.scores = make_scores(label, confidence, class_ids);
  return box;
}

}  // namespace

FrameRecord predict(const DetectorSurrogate& detector, const std::string& frame_id,
                    const std::vector<GroundTruthBox>& truth,
                    const std::vector<double>* embedding, const ClassCatalog& catalog,
                    std::uint64_t stream_seed, int round) {
  Rng rng(mix(mix(stream_seed, hash_str("predict")), hash_str(frame_id),
              static_cast<std::uint64_t>(round)));

  FrameRecord record;
  record.frame_id = frame_id;
  if (embedding != nullptr) record.embedding = *embedding;

  const std::vector<int> class_ids = catalog.effective_known_ids();
  std::vector<int> trained_ids;
  for (int id : class_ids) {
    if (detector.trained(id)) trained_ids.push_back(id);
  }
  if (trained_ids.empty()) return record;  // nothing to label predictions with

  const double c_eff = static_cast<double>(class_ids.size());

  for (const GroundTruthBox& gt : truth) {
    const double kappa = detector.competence(gt.label);
    if (kappa > 0.0) {
      if (rng.uniform() >= 0.5 + 0.5 * kappa) continue;  // missed detection
      int label = gt.label;
      if (rng.uniform() >= std::max(kappa, 1.0 / c_eff)) {
        label = trained_ids[rng.uniform_index(trained_ids.size())];
      }
      const double confidence =
          std::clamp(rng.normal(0.2 + 0.7 * kappa, detector.confidence_noise), 0.01, 0.99);
      record.boxes.push_back(jittered_box(gt, label, confidence,
                                          detector.localization_noise * (1.0 - kappa),
                                          class_ids, rng));
    } else if (rng.uniform() < detector.spurious_rate) {
      // Untrained-class object: one spurious low-confidence box.
      const int label = trained_ids[rng.uniform_index(trained_ids.size())];
      const double confidence = std::clamp(rng.beta_int(2, 5) * 0.5, 0.01, 0.99);
      record.boxes.push_back(
          jittered_box(gt, label, confidence, detector.localization_noise, class_ids, rng));
    }
  }

  const int n_fp = rng.poisson(detector.false_positive_rate);
  for (int i = 0; i < n_fp; ++i) {
    PredictedBox box;
    box.label = trained_ids[rng.uniform_index(trained_ids.size())];
    box.confidence = std::clamp(rng.beta_int(2, 8), 0.01, 0.99);
    for (std::size_t d = 0; d < 3; ++d) {
      box.center[d] =
          rng.uniform(detector.false_positive_range[d][0], detector.false_positive_range[d][1]);
      box.size[d] = 0.5 + 4.0 * rng.uniform();
    }
    box.heading = rng.uniform(-M_PI, M_PI);
    box.scores = make_scores(box.label, box.confidence, class_ids);
    record.boxes.push_back(box);
  }
  return record;
}

DetectorSurrogate retrain(const DetectorSurrogate& detector,
                          const std::map<int, long>& newly_labeled_counts) {
  DetectorSurrogate updated = detector;
  for (const auto& [class_id, count] : newly_labeled_counts) {
    updated.labeled_boxes[class_id] += count;
  }
  return updated;
}

std::map<int, long> count_boxes_per_class(
    const std::map<std::string, std::vector<GroundTruthBox>>& truth,
    const std::vector<std::string>& frame_ids) {
  std::map<int, long> counts;
  for (const std::string& id : frame_ids) {
    for (const GroundTruthBox& box : truth.at(id)) {
      ++counts[box.label];
    }
  }
  return counts;
}

}  // namespace owal::sim
