#include "owal/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace owal::metrics {

double bev_iou(const std::array<double, 3>& center_a, const std::array<double, 3>& size_a,
               const std::array<double, 3>& center_b, const std::array<double, 3>& size_b) {
  const double ax0 = center_a[0] - size_a[0] / 2.0, ax1 = center_a[0] + size_a[0] / 2.0;
  const double ay0 = center_a[1] - size_a[1] / 2.0, ay1 = center_a[1] + size_a[1] / 2.0;
  const double bx0 = center_b[0] - size_b[0] / 2.0, bx1 = center_b[0] + size_b[0] / 2.0;
  const double by0 = center_b[1] - size_b[1] / 2.0, by1 = center_b[1] + size_b[1] / 2.0;

  const double ix = std::max(0.0, std::min(ax1, bx1) - std::max(ax0, bx0));
  const double iy = std::max(0.0, std::min(ay1, by1) - std::max(ay0, by0));
  const double intersection = ix * iy;
  const double area_a = size_a[0] * size_a[1];
  const double area_b = size_b[0] * size_b[1];
  const double uni = area_a + area_b - intersection;
  return uni > 0.0 ? intersection / uni : 0.0;
}

double average_precision(std::vector<Detection> detections,
                         const std::map<std::string, std::vector<GroundTruthBox>>& truth,
                         double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw std::invalid_argument("iou threshold must lie in (0, 1)");
  }
  long total_gt = 0;
  for (const auto& [id, boxes] : truth) total_gt += static_cast<long>(boxes.size());
  if (total_gt == 0) return 0.0;

  std::sort(detections.begin(), detections.end(), [](const Detection& a, const Detection& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.frame_id != b.frame_id) return a.frame_id < b.frame_id;
    return a.box_index < b.box_index;
  });

  std::map<std::string, std::vector<bool>> matched;
  for (const auto& [id, boxes] : truth) matched[id].assign(boxes.size(), false);

  // Prefix precision/recall after each ranked detection.
  std::vector<double> precision;
  std::vector<double> recall;
  precision.reserve(detections.size());
  recall.reserve(detections.size());
  long tp = 0;
  long fp = 0;
  for (const Detection& det : detections) {
    bool is_tp = false;
    const auto it = truth.find(det.frame_id);
    if (it != truth.end()) {
      std::vector<bool>& used = matched[det.frame_id];
      double best_iou = 0.0;
      std::size_t best = it->second.size();
      for (std::size_t g = 0; g < it->second.size(); ++g) {
        if (used[g]) continue;
        const double iou = bev_iou(det.center, det.size, it->second[g].center, it->second[g].size);
        if (iou > best_iou) {
          best_iou = iou;
          best = g;
        }
      }
      if (best != it->second.size() && best_iou >= tau) {
        used[best] = true;
        is_tp = true;
      }
    }
    is_tp ? ++tp : ++fp;
    precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(total_gt));
  }

  // Interpolated precision: max precision among prefixes reaching the recall
  // threshold, computed with a backward running maximum.
  std::vector<double> interp(precision.size());
  double running = 0.0;
  for (std::size_t i = precision.size(); i-- > 0;) {
    running = std::max(running, precision[i]);
    interp[i] = running;
  }

  double ap = 0.0;
  std::size_t cursor = 0;
  for (int t = 1; t <= 40; ++t) {
    const double threshold = static_cast<double>(t) / 40.0;
    while (cursor < recall.size() && recall[cursor] < threshold - 1e-12) ++cursor;
    if (cursor < recall.size()) ap += interp[cursor];
  }
  return ap / 40.0;
}

double harmonic_map(double map_unk, double map_k) {
  if (map_unk <= 0.0 || map_k <= 0.0) return 0.0;
  return 2.0 / (1.0 / map_unk + 1.0 / map_k);
}

MetricReport evaluate(const std::vector<FrameRecord>& predictions,
                      const std::map<std::string, std::vector<GroundTruthBox>>& truth,
                      const ClassCatalog& catalog, const EvalOptions& options) {
  MetricReport report;

  std::vector<int> all_classes = catalog.known_ids();
  all_classes.insert(all_classes.end(), catalog.unknown_ids().begin(),
                     catalog.unknown_ids().end());

  for (int cls : all_classes) {
    std::map<std::string, std::vector<GroundTruthBox>> class_truth;
    long gt_count = 0;
    for (const auto& [frame_id, boxes] : truth) {
      std::vector<GroundTruthBox> filtered;
      for (const GroundTruthBox& box : boxes) {
        if (box.label == cls) filtered.push_back(box);
      }
      gt_count += static_cast<long>(filtered.size());
      if (!filtered.empty()) class_truth[frame_id] = std::move(filtered);
    }
    if (gt_count == 0) {
      report.absent_classes.push_back(cls);
      continue;
    }

    std::vector<Detection> detections;
    for (const FrameRecord& frame : predictions) {
      for (std::size_t i = 0; i < frame.boxes.size(); ++i) {
        const PredictedBox& box = frame.boxes[i];
        if (box.label != cls) continue;
        detections.push_back({frame.frame_id, static_cast<int>(i), box.confidence, box.center,
                              box.size});
      }
    }
    const auto it = options.per_class_iou.find(cls);
    const double tau = it == options.per_class_iou.end() ? options.default_iou : it->second;
    report.per_class_ap[cls] = average_precision(std::move(detections), class_truth, tau);
  }

  const auto mean_over = [&report](const std::vector<int>& ids) {
    double sum = 0.0;
    int count = 0;
    for (int cls : ids) {
      const auto it = report.per_class_ap.find(cls);
      if (it == report.per_class_ap.end()) continue;
      sum += it->second;
      ++count;
    }
    return count > 0 ? sum / count : 0.0;
  };
  report.map_k = mean_over(catalog.known_ids());
  report.map_unk = mean_over(catalog.unknown_ids());
  report.map_h = harmonic_map(report.map_unk, report.map_k);
  return report;
}

std::vector<CostCurveRow> cost_curve(const std::vector<MetricReport>& reports) {
  std::vector<CostCurveRow> rows;
  rows.reserve(reports.size());
  for (const MetricReport& r : reports) {
    rows.push_back({r.round, r.cumulative_known_boxes, r.cumulative_unknown_boxes,
                    r.cumulative_boxes(), r.map_unk, r.map_k, r.map_h});
  }
  return rows;
}

double interpolate_at_cost(const std::vector<CostCurveRow>& curve, double cost,
                           CurveMetric metric) {
  if (curve.empty()) {
    throw std::invalid_argument("cannot interpolate an empty cost curve");
  }
  const auto value = [metric](const CostCurveRow& row) {
    switch (metric) {
      case CurveMetric::kMapUnk: return row.map_unk;
      case CurveMetric::kMapK: return row.map_k;
      case CurveMetric::kMapH: return row.map_h;
    }
    return 0.0;
  };
  if (cost <= static_cast<double>(curve.front().cumulative_boxes)) return value(curve.front());
  if (cost >= static_cast<double>(curve.back().cumulative_boxes)) return value(curve.back());
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double lo = static_cast<double>(curve[i - 1].cumulative_boxes);
    const double hi = static_cast<double>(curve[i].cumulative_boxes);
    if (cost <= hi) {
      if (hi == lo) return value(curve[i]);
      const double t = (cost - lo) / (hi - lo);
      return value(curve[i - 1]) + t * (value(curve[i]) - value(curve[i - 1]));
    }
  }
  return value(curve.back());
}

}  // namespace owal::metrics
