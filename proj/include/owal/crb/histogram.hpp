#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "owal/core/frame.hpp"

namespace owal::crb {

// Uniform-bin histogram over one geometry dimension. Values outside [lo, hi]
// clamp into the edge bins.
struct AxisHistogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> probs;  // normalized, every entry > 0 after smoothing
};

// Normalized per-dimension histograms over box length, width, height and
// heading, with additive smoothing so KL divergences stay finite.
struct GeometryHistogram {
  std::array<AxisHistogram, 4> axes;  // l, w, h, heading
  double epsilon = 1e-6;
};

// Raw per-dimension bin counts; the histogram above is its normalized form.
struct GeometryCounts {
  std::array<std::vector<long>, 4> bins;
  long total = 0;
};

// Bin ranges per dimension, derived from a box population (or fixed).
struct GeometryBinning {
  std::array<std::array<double, 2>, 4> ranges;  // [lo, hi] per dimension
  int bins_per_dim = 10;
};

// Ranges from the min/max of the boxes of all given frames; dimensions with
// no spread get a unit-wide range so binning stays well defined.
GeometryBinning derive_binning(const std::vector<FrameRecord>& frames, int bins_per_dim);

GeometryCounts empty_counts(const GeometryBinning& binning);
void accumulate_counts(GeometryCounts& counts, const GeometryBinning& binning,
                       const FrameRecord& frame);

// Additive smoothing (epsilon per bin) followed by normalization.
GeometryHistogram normalize_counts(const GeometryCounts& counts, const GeometryBinning& binning,
                                   double epsilon);

GeometryHistogram uniform_histogram(const GeometryBinning& binning, double epsilon);

// KL(observed || prior) summed over the four dimensions, 0 ln 0 := 0.
double kl_divergence(const GeometryHistogram& observed, const GeometryHistogram& prior);

}  // namespace owal::crb
