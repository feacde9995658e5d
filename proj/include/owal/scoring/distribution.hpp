#pragma once

#include <map>
#include <string>
#include <vector>

#include "owal/core/catalog.hpp"
#include "owal/core/frame.hpp"

namespace owal::scoring {

// Frame-level label distribution over the effective known classes plus one
// trailing unknown component. Built from per-box confidences: each box adds
// its confidence to its predicted class and its residual (1 - confidence) to
// the unknown slot, normalized by the box count. Components sum to 1.
struct LabelDistribution {
  std::vector<int> class_ids;       // effective known ids, aligned with components[0..C-1]
  std::vector<double> components;   // length class_ids.size() + 1; last = unknown
  std::size_t n_boxes = 0;

  double unknown_component() const { return components.back(); }
};

// For an empty frame returns the degenerate distribution with all mass on the
// unknown slot; empty frames carry no evidence either way and score zero
// entropy downstream. Rejects boxes labeled outside the catalog.
LabelDistribution label_distribution(const FrameRecord& frame, const ClassCatalog& catalog);

// Per-class box counts and mean confidences, the harmonic mean of the two
// mean confidences when exactly two known classes are in play, and a flag for
// whether the distribution sits at the maximum-entropy point (all components
// equal within 1e-6). Diagnostic only; never used for selection.
// Requires a non-empty frame.
//
// Keys: "n_boxes", "count_<id>", "mean_confidence_<id>" (absent classes
// omitted), "harmonic_mean" (only when both classes of a 2-class catalog are
// present), "max_entropy" (0/1).
std::map<std::string, double> relationship_diagnostics(const LabelDistribution& dist,
                                                       const FrameRecord& frame);

}  // namespace owal::scoring
