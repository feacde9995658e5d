#pragma once

#include <map>
#include <string>
#include <vector>

#include "owal/core/catalog.hpp"
#include "owal/core/frame.hpp"

namespace owal::metrics {

// One detection of a single class, ready for ranked matching.
struct Detection {
  std::string frame_id;
  int box_index = 0;  // position within its frame, for deterministic ordering
  double confidence = 0.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::array<double, 3> size{1.0, 1.0, 1.0};
};

// Axis-aligned bird's-eye-view IoU on (center x, center y, length, width).
double bev_iou(const std::array<double, 3>& center_a, const std::array<double, 3>& size_a,
               const std::array<double, 3>& center_b, const std::array<double, 3>& size_b);

// Average precision at 40 interpolated recall positions. Detections are
// ranked by descending confidence (ties by frame_id, then box index) and
// greedily matched to the highest-IoU unmatched ground-truth box of the same
// frame with IoU >= tau. AP is the mean over recall thresholds t in
// {1/40, ..., 40/40} of the maximum precision attained at recall >= t.
double average_precision(std::vector<Detection> detections,
                         const std::map<std::string, std::vector<GroundTruthBox>>& truth,
                         double tau);

// 2 / (1/map_unk + 1/map_k); 0 when either input is 0.
double harmonic_map(double map_unk, double map_k);

struct MetricReport {
  int round = 0;
  std::map<int, double> per_class_ap;   // classes with ground truth only
  std::vector<int> absent_classes;      // zero-GT classes, excluded from means
  double map_unk = 0.0;
  double map_k = 0.0;
  double map_h = 0.0;
  long cumulative_known_boxes = 0;
  long cumulative_unknown_boxes = 0;

  long cumulative_boxes() const { return cumulative_known_boxes + cumulative_unknown_boxes; }
};

struct EvalOptions {
  double default_iou = 0.5;
  std::map<int, double> per_class_iou;  // overrides default per class id
};

// Per-class AP over every class listed in the catalog, with the unknown /
// known means split by the catalog's *original* class sets. Classes with no
// ground truth in `truth` are recorded as absent and excluded from the means.
MetricReport evaluate(const std::vector<FrameRecord>& predictions,
                      const std::map<std::string, std::vector<GroundTruthBox>>& truth,
                      const ClassCatalog& catalog, const EvalOptions& options);

struct CostCurveRow {
  int round = 0;
  long cumulative_known_boxes = 0;
  long cumulative_unknown_boxes = 0;
  long cumulative_boxes = 0;
  double map_unk = 0.0;
  double map_k = 0.0;
  double map_h = 0.0;
};

std::vector<CostCurveRow> cost_curve(const std::vector<MetricReport>& reports);

// Piecewise-linear interpolation of map_h (or map_unk / map_k via selector)
// at a given cumulative box cost; clamps outside the curve's cost range.
enum class CurveMetric { kMapUnk, kMapK, kMapH };
double interpolate_at_cost(const std::vector<CostCurveRow>& curve, double cost,
                           CurveMetric metric);

}  // namespace owal::metrics
