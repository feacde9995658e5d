#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "owal/metrics/metrics.hpp"
#include "owal/rng.hpp"

using namespace owal;
using namespace owal::metrics;

namespace {

GroundTruthBox gt_at(double x, double y, int label = 1) {
  GroundTruthBox box;
  box.label = label;
  box.center = {x, y, 0.0};
  box.size = {2.0, 2.0, 1.5};
  return box;
}

Detection det_at(const std::string& frame, int index, double conf, double x, double y) {
  return {frame, index, conf, {x, y, 0.0}, {2.0, 2.0, 1.5}};
}

}  // namespace

TEST_CASE("bev iou basics") {
  const std::array<double, 3> c{0, 0, 0};
  const std::array<double, 3> unit{1, 1, 1};
  CHECK(bev_iou(c, unit, c, unit) == doctest::Approx(1.0));
  CHECK(bev_iou(c, unit, {5, 5, 0}, unit) == doctest::Approx(0.0));
  // Unit squares overlapping half: intersection 0.5, union 1.5.
  CHECK(bev_iou(c, unit, {0.5, 0.0, 0.0}, unit) == doctest::Approx(1.0 / 3));
}

TEST_CASE("bev iou agrees with a grid-sampled area oracle") {
  Rng rng(500);
  for (int trial = 0; trial < 25; ++trial) {
    const std::array<double, 3> ca{rng.uniform(-2, 2), rng.uniform(-2, 2), 0};
    const std::array<double, 3> cb{rng.uniform(-2, 2), rng.uniform(-2, 2), 0};
    const std::array<double, 3> sa{rng.uniform(0.5, 3), rng.uniform(0.5, 3), 1};
    const std::array<double, 3> sb{rng.uniform(0.5, 3), rng.uniform(0.5, 3), 1};
    const double exact = bev_iou(ca, sa, cb, sb);
    const double sampled = oracle::monte_carlo_bev_iou(ca, sa, cb, sb);
    CHECK(exact == doctest::Approx(sampled).epsilon(0.03));
    CHECK(exact == doctest::Approx(bev_iou(cb, sb, ca, sa)));
    CHECK(exact >= 0.0);
    CHECK(exact <= 1.0);
  }
}

TEST_CASE("average precision on reference instances") {
  std::map<std::string, std::vector<GroundTruthBox>> truth;
  truth["f"] = {gt_at(0, 0)};

  // Perfect single detection.
  CHECK(average_precision({det_at("f", 0, 0.9, 0, 0)}, truth, 0.5) == doctest::Approx(1.0));

  // A false positive ranked above the true positive caps precision at 0.5.
  CHECK(average_precision({det_at("f", 0, 0.9, 30, 30), det_at("f", 1, 0.8, 0, 0)}, truth, 0.5) ==
        doctest::Approx(0.5));

  // No ground truth at all.
  CHECK(average_precision({det_at("f", 0, 0.9, 0, 0)}, {}, 0.5) == 0.0);
  CHECK_THROWS_AS(average_precision({}, truth, 0.0), std::invalid_argument);
}

TEST_CASE("average precision equals brute-force integration on random tiny instances") {
  Rng rng(900);
  for (int trial = 0; trial < 300; ++trial) {
    std::map<std::string, std::vector<GroundTruthBox>> truth;
    const int frames = 1 + static_cast<int>(rng.uniform_index(3));
    int total_gt = 0;
    for (int f = 0; f < frames && total_gt < 5; ++f) {
      const int count = static_cast<int>(rng.uniform_index(3));
      std::vector<GroundTruthBox> boxes;
      for (int g = 0; g < count && total_gt < 5; ++g, ++total_gt) {
        boxes.push_back(gt_at(rng.uniform(-4, 4), rng.uniform(-4, 4)));
      }
      if (!boxes.empty()) truth["f" + std::to_string(f)] = boxes;
    }
    if (truth.empty()) continue;

    std::vector<Detection> detections;
    const int dets = 1 + static_cast<int>(rng.uniform_index(8));
    for (int d = 0; d < dets; ++d) {
      const std::string frame = "f" + std::to_string(rng.uniform_index(frames));
      detections.push_back(
          det_at(frame, d, rng.uniform(), rng.uniform(-4, 4), rng.uniform(-4, 4)));
    }
    const double got = average_precision(detections, truth, 0.3);
    const double expected = oracle::brute_force_ap(detections, truth, 0.3);
    CHECK(got == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("average precision is invariant under positive confidence rescaling") {
  Rng rng(901);
  std::map<std::string, std::vector<GroundTruthBox>> truth;
  truth["f"] = {gt_at(0, 0), gt_at(4, 4)};
  std::vector<Detection> detections;
  for (int d = 0; d < 6; ++d) {
    detections.push_back(det_at("f", d, 0.1 + 0.15 * d, rng.uniform(-5, 5), rng.uniform(-5, 5)));
  }
  const double base = average_precision(detections, truth, 0.3);
  for (Detection& det : detections) det.confidence *= 0.37;
  CHECK(average_precision(detections, truth, 0.3) == doctest::Approx(base));
}

TEST_CASE("matching never claims a ground-truth box twice") {
  std::map<std::string, std::vector<GroundTruthBox>> truth;
  truth["f"] = {gt_at(0, 0)};
  // Two detections on the same object: exactly one true positive possible, so
  // with a single ground-truth box recall tops out at 1 with precision 1/2.
  const double ap = average_precision(
      {det_at("f", 0, 0.9, 0, 0), det_at("f", 1, 0.8, 0.1, 0.0)}, truth, 0.3);
  CHECK(ap == doctest::Approx(1.0));  // the top-ranked one matches first
  const double ap_reversed = average_precision(
      {det_at("f", 0, 0.8, 0, 0), det_at("f", 1, 0.9, 0.1, 0.0)}, truth, 0.3);
  CHECK(ap_reversed == doctest::Approx(1.0));
}

TEST_CASE("harmonic map") {
  CHECK(harmonic_map(0.2, 0.6) == doctest::Approx(0.3));
  CHECK(harmonic_map(0.4, 0.4) == doctest::Approx(0.4));
  CHECK(harmonic_map(0.0, 0.9) == 0.0);
  CHECK(harmonic_map(0.9, 0.0) == 0.0);
  Rng rng(33);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform();
    const double b = rng.uniform();
    const double h = harmonic_map(a, b);
    CHECK(h <= 2.0 * std::min(a, b) + 1e-12);
    CHECK(h <= (a + b) / 2.0 + 1e-12);
  }
}

TEST_CASE("evaluate splits means by the original catalog and logs absent classes") {
  const ClassCatalog catalog({1, 2}, {3, 4});
  std::map<std::string, std::vector<GroundTruthBox>> truth;
  truth["f"] = {gt_at(0, 0, 1), gt_at(5, 5, 3)};  // class 2 and 4 absent

  FrameRecord record;
  record.frame_id = "f";
  PredictedBox hit;
  hit.label = 1;
  hit.confidence = 0.9;
  hit.center = {0, 0, 0};
  hit.size = {2, 2, 1.5};
  record.boxes.push_back(hit);

  const MetricReport report = evaluate({record}, truth, catalog, {});
  CHECK(report.per_class_ap.at(1) == doctest::Approx(1.0));
  CHECK(report.per_class_ap.at(3) == doctest::Approx(0.0));
  CHECK(report.per_class_ap.count(2) == 0);
  CHECK(report.absent_classes == std::vector<int>{2, 4});
  CHECK(report.map_k == doctest::Approx(1.0));   // mean over present known classes
  CHECK(report.map_unk == doctest::Approx(0.0));
  CHECK(report.map_h == 0.0);
}

TEST_CASE("cost curve rows replay the stored reports") {
  std::vector<MetricReport> reports(3);
  for (int r = 0; r < 3; ++r) {
    reports[r].round = r;
    reports[r].cumulative_known_boxes = 100 * (r + 1);
    reports[r].cumulative_unknown_boxes = 10 * r;
    reports[r].map_unk = 0.1 * r;
    reports[r].map_k = 0.5 + 0.1 * r;
    reports[r].map_h = harmonic_map(reports[r].map_unk, reports[r].map_k);
  }
  const std::vector<CostCurveRow> rows = cost_curve(reports);
  REQUIRE(rows.size() == 3);
  for (int r = 0; r < 3; ++r) {
    CHECK(rows[r].cumulative_boxes ==
          reports[r].cumulative_known_boxes + reports[r].cumulative_unknown_boxes);
    CHECK(rows[r].map_h == reports[r].map_h);
    if (r > 0) CHECK(rows[r].cumulative_boxes >= rows[r - 1].cumulative_boxes);
  }

  CHECK(interpolate_at_cost(rows, 0.0, CurveMetric::kMapH) == rows.front().map_h);
  CHECK(interpolate_at_cost(rows, 1e9, CurveMetric::kMapH) == rows.back().map_h);
  const double mid = (rows[0].cumulative_boxes + rows[1].cumulative_boxes) / 2.0;
  CHECK(interpolate_at_cost(rows, mid, CurveMetric::kMapUnk) ==
        doctest::Approx((rows[0].map_unk + rows[1].map_unk) / 2.0));
}
