#include "owal/core/frame.hpp"

#include <cmath>
#include <string>

#include "owal/error.hpp"

namespace owal {

namespace {

void check_geometry(const std::array<double, 3>& size, double heading,
                    const std::string& frame_id) {
  for (double s : size) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw DataError("frame " + frame_id + ": box size components must be > 0");
    }
  }
  if (!std::isfinite(heading) || heading < -M_PI || heading >= M_PI) {
    throw DataError("frame " + frame_id + ": heading out of range [-pi, pi)");
  }
}

}  // namespace

void validate_box(const PredictedBox& box, const ClassCatalog& catalog,
                  const std::string& frame_id) {
  if (!catalog.is_effective_known(box.label)) {
    throw DataError("frame " + frame_id + ": box label " + std::to_string(box.label) +
                    " is not an effective known class");
  }
  if (!std::isfinite(box.confidence) || box.confidence < 0.0 || box.confidence > 1.0) {
    throw DataError("frame " + frame_id + ": confidence must be finite in [0, 1]");
  }
  check_geometry(box.size, box.heading, frame_id);
  if (box.scores) {
    if (box.scores->size() != catalog.effective_known_count()) {
      throw DataError("frame " + frame_id + ": scores length " +
                      std::to_string(box.scores->size()) + " != effective known count " +
                      std::to_string(catalog.effective_known_count()));
    }
    double max_entry = 0.0;
    for (double s : *box.scores) {
      if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
        throw DataError("frame " + frame_id + ": score entries must be finite in [0, 1]");
      }
      max_entry = std::max(max_entry, s);
    }
    if (std::abs(max_entry - box.confidence) > 1e-6) {
      throw DataError("frame " + frame_id +
                      ": confidence does not match maximum score entry");
    }
  }
}

void validate_truth_box(const GroundTruthBox& box, const ClassCatalog& catalog,
                        const std::string& frame_id) {
  if (!catalog.is_listed(box.label)) {
    throw DataError("frame " + frame_id + ": ground-truth label " +
                    std::to_string(box.label) + " is not a listed class");
  }
  check_geometry(box.size, box.heading, frame_id);
}

void validate_record(const FrameRecord& record, const ClassCatalog& catalog) {
  if (record.frame_id.empty()) {
    throw DataError("frame record with empty frame_id");
  }
  for (const PredictedBox& box : record.boxes) {
    validate_box(box, catalog, record.frame_id);
  }
  if (record.embedding) {
    for (double v : *record.embedding) {
      if (!std::isfinite(v)) {
        throw DataError("frame " + record.frame_id + ": embedding entries must be finite");
      }
    }
  }
}

}  // namespace owal
