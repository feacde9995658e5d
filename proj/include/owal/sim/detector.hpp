#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "owal/core/catalog.hpp"
#include "owal/core/frame.hpp"

namespace owal::sim {

// Stand-in for a retrainable 3D detector. Per-class competence saturates with
// the number of annotated boxes: kappa_c = n_c / (n_c + half_saturation),
// zero for classes never annotated. Retraining is a competence update, not
// epoch-based optimization.
struct DetectorSurrogate {
  std::map<int, long> labeled_boxes;   // n_c per class id
  double half_saturation = 25.0;
  double confidence_noise = 0.02;      // sigma of the raw confidence draw
  double localization_noise = 0.5;     // center/size jitter scale, shrinks with competence
  double spurious_rate = 0.45;         // chance an untrained-class object fires a spurious box
  double false_positive_rate = 0.01;   // Poisson mean of pure false positives per frame
  int embedding_dim = 0;               // dimension of frame embeddings it passes through
  std::array<std::array<double, 2>, 3> false_positive_range{
      {{-40.0, 40.0}, {-40.0, 40.0}, {-1.0, 1.0}}};

  double competence(int class_id) const {
    const auto it = labeled_boxes.find(class_id);
    if (it == labeled_boxes.end() || it->second <= 0) return 0.0;
    const double n = static_cast<double>(it->second);
    return n / (n + half_saturation);
  }

  bool trained(int class_id) const { return competence(class_id) > 0.0; }
};

// Simulated detector output for one frame. Every draw comes from a stream
// keyed by (stream_seed, frame_id, round), so predictions for one frame do
// not depend on the order frames are processed in, and policy choice cannot
// perturb the randomness of unrelated frames.
//
// Trained-class objects are detected with probability 0.5 + 0.5 kappa, keep
// their true label with probability max(kappa, 1/C_eff), and carry Gaussian
// geometry jitter scaled by (1 - kappa). Untrained-class objects fire, with
// probability spurious_rate, one low-confidence box labeled as a random
// trained class. Poisson(false_positive_rate) pure false positives are added
// on top. Score vectors are one-hot blends toward uniform, rescaled so their
// peak equals the stored confidence.
FrameRecord predict(const DetectorSurrogate& detector, const std::string& frame_id,
                    const std::vector<GroundTruthBox>& truth,
                    const std::vector<double>* embedding, const ClassCatalog& catalog,
                    std::uint64_t stream_seed, int round);

// n_c accumulation from newly annotated boxes; newly discovered classes enter
// with their counts and become trained.
DetectorSurrogate retrain(const DetectorSurrogate& detector,
                          const std::map<int, long>& newly_labeled_counts);

// Per-class box counts of the given frames' ground truth.
std::map<int, long> count_boxes_per_class(
    const std::map<std::string, std::vector<GroundTruthBox>>& truth,
    const std::vector<std::string>& frame_ids);

}  // namespace owal::sim
