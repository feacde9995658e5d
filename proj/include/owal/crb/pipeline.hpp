#pragma once

#include <string>
#include <vector>

#include "owal/core/catalog.hpp"
#include "owal/core/frame.hpp"
#include "owal/crb/histogram.hpp"

namespace owal::crb {

enum class PriorSource { kUniform, kEmpiricalUnlabeled };

// Survivor counts for the hierarchical filter: stage 1 keeps k1 frames,
// stage 2 keeps k2 prototypes, stage 3 picks the final n_r.
struct CrbConfig {
  std::size_t k1 = 100;
  std::size_t k2 = 100;
  std::size_t n_r = 100;
  int geometry_bins = 10;
  double smoothing_epsilon = 1e-6;
  PriorSource prior_source = PriorSource::kEmpiricalUnlabeled;
};

// Top-k1 frames by known-class label entropy, ties by ascending frame_id.
std::vector<std::string> stage1_concise(const std::vector<FrameRecord>& frames,
                                        const ClassCatalog& catalog, std::size_t k1);

// k-means on frame embeddings with deterministic farthest-point seeding
// (iteration cap 100, center-movement tolerance 1e-6); returns the frame
// nearest each center, duplicates resolved by next-nearest, so the survivors
// are cluster representatives. Requires embeddings.
std::vector<std::string> stage2_prototypes(const std::vector<FrameRecord>& frames,
                                           std::size_t k2);

// Greedy selection of n_r candidates: each step adds the candidate whose
// tentative addition minimizes the summed per-dimension KL divergence between
// the selected-box geometry histogram and the prior. Ties by frame_id.
std::vector<std::string> stage3_greedy_balance(const std::vector<FrameRecord>& candidates,
                                               const GeometryHistogram& prior,
                                               const GeometryBinning& binning, std::size_t n_r);

// Prior over predicted-box geometry for stage 3, per the configured source.
GeometryHistogram build_prior(const std::vector<FrameRecord>& pool_frames,
                              const GeometryBinning& binning, const CrbConfig& config);

// Full closed-world pipeline: stage3(stage2(stage1(frames, k1), k2), n_r).
// k1 and k2 are capped to the pool size.
std::vector<std::string> crb_select(const std::vector<FrameRecord>& unlabeled_records,
                                    const ClassCatalog& catalog, const CrbConfig& config);

// One acquisition round: unknown-aware entropy top-k for the first round
// (open-world pool), the CRB pipeline for every later round.
std::vector<std::string> open_crb_round(const std::vector<FrameRecord>& unlabeled_records,
                                        const ClassCatalog& catalog, const CrbConfig& config,
                                        int round);

}  // namespace owal::crb
