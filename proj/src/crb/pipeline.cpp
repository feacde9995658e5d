#include "owal/crb/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "owal/error.hpp"
#include "owal/scoring/policies.hpp"

namespace owal::crb {

namespace {

constexpr int kMeansIterationCap = 100;
constexpr double kMeansTolerance = 1e-6;

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

}  // namespace

std::vector<std::string> stage1_concise(const std::vector<FrameRecord>& frames,
                                        const ClassCatalog& catalog, std::size_t k1) {
  if (k1 > frames.size()) {
    throw std::invalid_argument("stage1: k1 exceeds pool size");
  }
  return scoring::select_top_k(scoring::score_frames(scoring::Policy::kEntropy, frames, catalog, 0),
                               k1);
}

std::vector<std::string> stage2_prototypes(const std::vector<FrameRecord>& frames,
                                           std::size_t k2) {
  if (k2 > frames.size()) {
    throw std::invalid_argument("stage2: k2 exceeds input size");
  }
  if (k2 == 0) return {};

  std::size_t dim = 0;
  for (const FrameRecord& f : frames) {
    if (!f.embedding) {
      throw DataError("frame " + f.frame_id + ": embedding required for prototype clustering");
    }
    if (dim == 0) {
      dim = f.embedding->size();
    } else if (f.embedding->size() != dim) {
      throw DataError("frame " + f.frame_id + ": embedding dimension mismatch");
    }
  }

  // Inputs sorted by frame_id so every tie-break below is reproducible.
  std::vector<const FrameRecord*> pts;
  pts.reserve(frames.size());
  for (const FrameRecord& f : frames) pts.push_back(&f);
  std::sort(pts.begin(), pts.end(),
            [](const FrameRecord* a, const FrameRecord* b) { return a->frame_id < b->frame_id; });

  // Farthest-point seeding: first center at the lowest frame_id, then
  // repeatedly the point farthest from its nearest center.
  std::vector<std::vector<double>> centers;
  centers.reserve(k2);
  centers.push_back(*pts[0]->embedding);
  std::vector<double> min_dist(pts.size(), std::numeric_limits<double>::infinity());
  while (centers.size() < k2) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      min_dist[i] = std::min(min_dist[i], sq_dist(*pts[i]->embedding, centers.back()));
      if (min_dist[i] > min_dist[best]) best = i;
    }
    centers.push_back(*pts[best]->embedding);
  }

  std::vector<std::size_t> assignment(pts.size(), 0);
  for (int iter = 0; iter < kMeansIterationCap; ++iter) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::size_t nearest = 0;
      double nearest_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = sq_dist(*pts[i]->embedding, centers[c]);
        if (d < nearest_d) {
          nearest_d = d;
          nearest = c;
        }
      }
      assignment[i] = nearest;
    }

    double moved = 0.0;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      std::vector<double> mean(dim, 0.0);
      std::size_t count = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (assignment[i] != c) continue;
        for (std::size_t d = 0; d < dim; ++d) mean[d] += (*pts[i]->embedding)[d];
        ++count;
      }
      if (count == 0) continue;  // empty cluster keeps its previous center
      for (double& v : mean) v /= static_cast<double>(count);
      moved = std::max(moved, std::sqrt(sq_dist(mean, centers[c])));
      centers[c] = std::move(mean);
    }
    if (moved <= kMeansTolerance) break;
  }

  // One representative frame per center; a frame already claimed falls
  // through to the next-nearest unclaimed one.
  std::vector<bool> claimed(pts.size(), false);
  std::vector<std::string> out;
  out.reserve(k2);
  for (std::size_t c = 0; c < centers.size(); ++c) {
    std::size_t best = pts.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (claimed[i]) continue;
      const double d = sq_dist(*pts[i]->embedding, centers[c]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    claimed[best] = true;
    out.push_back(pts[best]->frame_id);
  }
  return out;
}

std::vector<std::string> stage3_greedy_balance(const std::vector<FrameRecord>& candidates,
                                               const GeometryHistogram& prior,
                                               const GeometryBinning& binning, std::size_t n_r) {
  if (n_r > candidates.size()) {
    throw std::invalid_argument("stage3: n_r exceeds candidate count");
  }

  std::vector<const FrameRecord*> order;
  order.reserve(candidates.size());
  for (const FrameRecord& f : candidates) order.push_back(&f);
  std::sort(order.begin(), order.end(),
            [](const FrameRecord* a, const FrameRecord* b) { return a->frame_id < b->frame_id; });

  GeometryCounts selected = empty_counts(binning);
  std::vector<bool> picked(order.size(), false);
  std::vector<std::string> out;
  out.reserve(n_r);

  for (std::size_t step = 0; step < n_r; ++step) {
    std::size_t best = order.size();
    double best_kl = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (picked[i]) continue;
      GeometryCounts tentative = selected;
      accumulate_counts(tentative, binning, *order[i]);
      const double kl =
          kl_divergence(normalize_counts(tentative, binning, prior.epsilon), prior);
      if (kl < best_kl) {  // order is id-sorted, so strict < keeps the lowest id on ties
        best_kl = kl;
        best = i;
      }
    }
    picked[best] = true;
    accumulate_counts(selected, binning, *order[best]);
    out.push_back(order[best]->frame_id);
  }
  return out;
}

GeometryHistogram build_prior(const std::vector<FrameRecord>& pool_frames,
                              const GeometryBinning& binning, const CrbConfig& config) {
  if (config.prior_source == PriorSource::kUniform) {
    return uniform_histogram(binning, config.smoothing_epsilon);
  }
  GeometryCounts counts = empty_counts(binning);
  for (const FrameRecord& frame : pool_frames) {
    accumulate_counts(counts, binning, frame);
  }
  return normalize_counts(counts, binning, config.smoothing_epsilon);
}

std::vector<std::string> crb_select(const std::vector<FrameRecord>& unlabeled_records,
                                    const ClassCatalog& catalog, const CrbConfig& config) {
  const std::size_t pool = unlabeled_records.size();
  const std::size_t k1 = std::min(config.k1, pool);
  const std::size_t k2 = std::min(config.k2, k1);
  if (config.n_r > k2) {
    throw std::invalid_argument("crb: n_r exceeds stage-2 survivor count");
  }

  const std::vector<std::string> s1 = stage1_concise(unlabeled_records, catalog, k1);
  std::map<std::string, const FrameRecord*> by_id;
  for (const FrameRecord& f : unlabeled_records) by_id[f.frame_id] = &f;

  std::vector<FrameRecord> s1_records;
  s1_records.reserve(s1.size());
  for (const std::string& id : s1) s1_records.push_back(*by_id.at(id));

  const std::vector<std::string> s2 = stage2_prototypes(s1_records, k2);
  std::vector<FrameRecord> s2_records;
  s2_records.reserve(s2.size());
  for (const std::string& id : s2) s2_records.push_back(*by_id.at(id));

  const GeometryBinning binning = derive_binning(unlabeled_records, config.geometry_bins);
  const GeometryHistogram prior = build_prior(unlabeled_records, binning, config);
  return stage3_greedy_balance(s2_records, prior, binning, config.n_r);
}

std::vector<std::string> open_crb_round(const std::vector<FrameRecord>& unlabeled_records,
                                        const ClassCatalog& catalog, const CrbConfig& config,
                                        int round) {
  if (round < 1) {
    throw std::invalid_argument("round index must be >= 1");
  }
  if (config.n_r > unlabeled_records.size()) {
    throw std::invalid_argument("n_r exceeds unlabeled pool size");
  }
  if (round == 1) {
    return scoring::select_top_k(
        scoring::score_frames(scoring::Policy::kOlc, unlabeled_records, catalog, 0), config.n_r);
  }
  return crb_select(unlabeled_records, catalog, config);
}

}  // namespace owal::crb
