#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "owal/core/catalog.hpp"

namespace owal {

// One detection. Geometry is a 7-DOF box: center (m), size (m, all > 0),
// heading in [-pi, pi). scores, when present, is laid out in the order of
// ClassCatalog::effective_known_ids() and its maximum entry must equal
// confidence within 1e-6.
struct PredictedBox {
  int label = 0;
  double confidence = 0.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::array<double, 3> size{1.0, 1.0, 1.0};
  double heading = 0.0;
  std::optional<std::vector<double>> scores;
};

struct GroundTruthBox {
  int label = 0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::array<double, 3> size{1.0, 1.0, 1.0};
  double heading = 0.0;
};

// One point-cloud frame's detector output. The embedding is a frame-level
// feature used by coreset-style policies; all frames of a pool that carry
// embeddings must share the same dimension.
struct FrameRecord {
  std::string frame_id;
  std::vector<PredictedBox> boxes;
  std::optional<std::vector<double>> embedding;
};

// Structural checks shared by the dump parser, the simulator, and tests.
// Throw DataError with a message naming the offending field/frame.
void validate_box(const PredictedBox& box, const ClassCatalog& catalog,
                  const std::string& frame_id);
void validate_truth_box(const GroundTruthBox& box, const ClassCatalog& catalog,
                        const std::string& frame_id);
void validate_record(const FrameRecord& record, const ClassCatalog& catalog);

}  // namespace owal
