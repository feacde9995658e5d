#include "owal/scoring/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "owal/error.hpp"
#include "owal/rng.hpp"

namespace owal::scoring {

namespace {

double entropy_nats(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

}  // namespace

ScoredFrame olc_score(const FrameRecord& frame, const ClassCatalog& catalog) {
  const LabelDistribution dist = label_distribution(frame, catalog);
  ScoredFrame out{frame.frame_id, entropy_nats(dist.components), "olc", {}};
  out.diagnostics["n_boxes"] = static_cast<double>(dist.n_boxes);
  out.diagnostics["p_unknown"] = dist.unknown_component();
  for (std::size_t i = 0; i < dist.class_ids.size(); ++i) {
    out.diagnostics["p_" + std::to_string(dist.class_ids[i])] = dist.components[i];
  }
  return out;
}

ScoredFrame entropy_score(const FrameRecord& frame, const ClassCatalog& catalog) {
  const LabelDistribution dist = label_distribution(frame, catalog);
  std::vector<double> known(dist.components.begin(), dist.components.end() - 1);
  double mass = 0.0;
  for (double v : known) mass += v;
  double score = 0.0;
  if (mass > 0.0) {
    for (double& v : known) v /= mass;
    score = entropy_nats(known);
  }
  return {frame.frame_id, score, "entropy", {}};
}

ScoredFrame gradnorm_surrogate_score(const FrameRecord& frame, const ClassCatalog& catalog) {
  // Empty frames sit above every non-empty frame: the non-empty maximum is 0
  // (a box exactly at the uniform distribution).
  if (frame.boxes.empty()) {
    return {frame.frame_id, 1.0, "gradnorm", {{"n_boxes", 0.0}}};
  }
  const double c_eff = static_cast<double>(catalog.effective_known_count());
  double total = 0.0;
  for (const PredictedBox& box : frame.boxes) {
    if (!box.scores) {
      throw DataError("frame " + frame.frame_id + ": scores vector required for gradnorm");
    }
    double g = 0.0;
    for (double s : *box.scores) g += std::abs(s - 1.0 / c_eff);
    total += g;
  }
  const double score = -total / static_cast<double>(frame.boxes.size());
  return {frame.frame_id, score, "gradnorm", {{"n_boxes", static_cast<double>(frame.boxes.size())}}};
}

ScoredFrame confidence_margin_score(const FrameRecord& frame) {
  if (frame.boxes.empty()) {
    return {frame.frame_id, 0.0, "margin", {}};
  }
  double total = 0.0;
  for (const PredictedBox& box : frame.boxes) {
    if (!box.scores) {
      throw DataError("frame " + frame.frame_id + ": scores vector required for margin");
    }
    double top1 = 0.0;
    double top2 = 0.0;
    for (double s : *box.scores) {
      if (s > top1) {
        top2 = top1;
        top1 = s;
      } else if (s > top2) {
        top2 = s;
      }
    }
    total += top1 - top2;
  }
  return {frame.frame_id, -total / static_cast<double>(frame.boxes.size()), "margin", {}};
}

ScoredFrame random_score(const FrameRecord& frame, std::uint64_t seed) {
  Rng rng(mix(seed, hash_str("random-score"), hash_str(frame.frame_id)));
  return {frame.frame_id, rng.uniform(), "random", {}};
}

std::vector<std::string> select_top_k(const std::vector<ScoredFrame>& scored, std::size_t k) {
  if (k > scored.size()) {
    throw std::invalid_argument("select_top_k: k exceeds number of scored frames");
  }
  std::vector<const ScoredFrame*> order;
  order.reserve(scored.size());
  for (const ScoredFrame& s : scored) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](const ScoredFrame* a, const ScoredFrame* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->frame_id < b->frame_id;
  });
  std::vector<std::string> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(order[i]->frame_id);
  return out;
}

std::vector<std::string> coreset_select(const std::vector<FrameRecord>& frames,
                                        const std::set<std::string>& labeled_ids,
                                        std::size_t k) {
  std::size_t dim = 0;
  for (const FrameRecord& f : frames) {
    if (!f.embedding) {
      throw DataError("frame " + f.frame_id + ": embedding required for coreset");
    }
    if (dim == 0) {
      dim = f.embedding->size();
    } else if (f.embedding->size() != dim) {
      throw DataError("frame " + f.frame_id + ": embedding dimension mismatch");
    }
  }

  std::vector<const FrameRecord*> labeled;
  std::vector<const FrameRecord*> candidates;
  for (const FrameRecord& f : frames) {
    (labeled_ids.count(f.frame_id) > 0 ? labeled : candidates).push_back(&f);
  }
  if (k > candidates.size()) {
    throw std::invalid_argument("coreset_select: k exceeds unlabeled pool size");
  }

  const auto sq_dist = [dim](const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double diff = a[i] - b[i];
      d += diff * diff;
    }
    return d;
  };

  // Minimum squared distance from each candidate to the reference set,
  // maintained incrementally as picks accumulate. With an empty reference set
  // every distance is +inf, so the tie-break seeds at the lowest frame_id.
  std::vector<double> min_dist(candidates.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (const FrameRecord* l : labeled) {
      min_dist[i] = std::min(min_dist[i], sq_dist(*candidates[i]->embedding, *l->embedding));
    }
  }

  std::vector<bool> picked(candidates.size(), false);
  std::vector<std::string> out;
  out.reserve(k);
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t best = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (picked[i]) continue;
      if (best == candidates.size() || min_dist[i] > min_dist[best] ||
          (min_dist[i] == min_dist[best] && candidates[i]->frame_id < candidates[best]->frame_id)) {
        best = i;
      }
    }
    picked[best] = true;
    out.push_back(candidates[best]->frame_id);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (picked[i]) continue;
      min_dist[i] =
          std::min(min_dist[i], sq_dist(*candidates[i]->embedding, *candidates[best]->embedding));
    }
  }
  return out;
}

Policy parse_policy(const std::string& name) {
  if (name == "random") return Policy::kRandom;
  if (name == "entropy") return Policy::kEntropy;
  if (name == "margin") return Policy::kMargin;
  if (name == "coreset") return Policy::kCoreset;
  if (name == "gradnorm") return Policy::kGradNorm;
  if (name == "olc") return Policy::kOlc;
  if (name == "crb") return Policy::kCrb;
  if (name == "open-crb") return Policy::kOpenCrb;
  throw ConfigError("unknown policy: " + name);
}

std::string policy_name(Policy policy) {
  switch (policy) {
    case Policy::kRandom: return "random";
    case Policy::kEntropy: return "entropy";
    case Policy::kMargin: return "margin";
    case Policy::kCoreset: return "coreset";
    case Policy::kGradNorm: return "gradnorm";
    case Policy::kOlc: return "olc";
    case Policy::kCrb: return "crb";
    case Policy::kOpenCrb: return "open-crb";
  }
  return "unknown";
}

bool is_scored_policy(Policy policy) {
  switch (policy) {
    case Policy::kRandom:
    case Policy::kEntropy:
    case Policy::kMargin:
    case Policy::kGradNorm:
    case Policy::kOlc:
      return true;
    default:
      return false;
  }
}

std::vector<ScoredFrame> score_frames(Policy policy, const std::vector<FrameRecord>& records,
                                      const ClassCatalog& catalog, std::uint64_t seed) {
  std::vector<ScoredFrame> out;
  out.reserve(records.size());
  for (const FrameRecord& frame : records) {
    switch (policy) {
      case Policy::kRandom: out.push_back(random_score(frame, seed)); break;
      case Policy::kEntropy: out.push_back(entropy_score(frame, catalog)); break;
      case Policy::kMargin: out.push_back(confidence_margin_score(frame)); break;
      case Policy::kGradNorm: out.push_back(gradnorm_surrogate_score(frame, catalog)); break;
      case Policy::kOlc: out.push_back(olc_score(frame, catalog)); break;
      default:
        throw std::invalid_argument("policy " + policy_name(policy) +
                                    " is not a per-frame scored policy");
    }
  }
  return out;
}

}  // namespace owal::scoring
