#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "owal/core/catalog.hpp"
#include "owal/core/frame.hpp"
#include "owal/scoring/distribution.hpp"

namespace owal::scoring {

struct ScoredFrame {
  std::string frame_id;
  double score = 0.0;
  std::string policy;
  std::map<std::string, double> diagnostics;
};

// Unknown-aware label entropy: -sum p ln p over the effective-known
// components plus the unknown component, with 0 ln 0 := 0. Natural log, so
// the score lies in [0, ln(C_eff + 1)]. Empty frames score 0.
ScoredFrame olc_score(const FrameRecord& frame, const ClassCatalog& catalog);

// Closed-world entropy baseline: entropy of the known components after
// dropping the unknown slot and renormalizing. Frames whose known mass is
// zero (including empty frames) score 0.
ScoredFrame entropy_score(const FrameRecord& frame, const ClassCatalog& catalog);

// Out-of-distribution proxy: per box, the L1 discrepancy between its score
// vector and the uniform distribution; the frame score is the negated mean so
// that boxes close to uniform (small discrepancy) rank first. Empty frames
// rank above all non-empty frames. Requires score vectors.
ScoredFrame gradnorm_surrogate_score(const FrameRecord& frame, const ClassCatalog& catalog);

// Negated mean top1-top2 score gap per box. Requires score vectors.
ScoredFrame confidence_margin_score(const FrameRecord& frame);

// Deterministic pseudo-random score derived from (seed, frame_id).
ScoredFrame random_score(const FrameRecord& frame, std::uint64_t seed);

// Top-k frame ids by descending score, ties broken by ascending frame_id.
std::vector<std::string> select_top_k(const std::vector<ScoredFrame>& scored, std::size_t k);

// Greedy furthest-first selection over frame embeddings: iteratively picks
// the unlabeled frame maximizing its minimum Euclidean distance to the
// labeled frames plus the frames already picked. Ties break by ascending
// frame_id; with no labeled frames the first pick is the lowest frame_id.
// `frames` holds both labeled and unlabeled records, all with embeddings of
// one dimension.
std::vector<std::string> coreset_select(const std::vector<FrameRecord>& frames,
                                        const std::set<std::string>& labeled_ids,
                                        std::size_t k);

enum class Policy { kRandom, kEntropy, kMargin, kCoreset, kGradNorm, kOlc, kCrb, kOpenCrb };

Policy parse_policy(const std::string& name);
std::string policy_name(Policy policy);

// True for policies expressible as a per-frame score plus top-k selection.
bool is_scored_policy(Policy policy);

// Scores every record under a scored policy (seed only used by kRandom).
std::vector<ScoredFrame> score_frames(Policy policy, const std::vector<FrameRecord>& records,
                                      const ClassCatalog& catalog, std::uint64_t seed);

}  // namespace owal::scoring
