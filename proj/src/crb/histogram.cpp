#include "owal/crb/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace owal::crb {

namespace {

std::array<double, 4> box_dims(const PredictedBox& box) {
  return {box.size[0], box.size[1], box.size[2], box.heading};
}

std::size_t bin_index(double value, const std::array<double, 2>& range, int bins) {
  const double span = range[1] - range[0];
  const double t = (value - range[0]) / span;
  const long idx = static_cast<long>(std::floor(t * bins));
  return static_cast<std::size_t>(std::clamp<long>(idx, 0, bins - 1));
}

}  // namespace

GeometryBinning derive_binning(const std::vector<FrameRecord>& frames, int bins_per_dim) {
  if (bins_per_dim < 1) {
    throw std::invalid_argument("bins_per_dim must be >= 1");
  }
  GeometryBinning binning;
  binning.bins_per_dim = bins_per_dim;
  std::array<double, 4> lo;
  std::array<double, 4> hi;
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const FrameRecord& frame : frames) {
    for (const PredictedBox& box : frame.boxes) {
      const std::array<double, 4> dims = box_dims(box);
      for (std::size_t d = 0; d < 4; ++d) {
        lo[d] = std::min(lo[d], dims[d]);
        hi[d] = std::max(hi[d], dims[d]);
      }
    }
  }
  for (std::size_t d = 0; d < 4; ++d) {
    if (!(lo[d] < hi[d])) {
      // No boxes, or no spread: fall back to a unit range around the value.
      const double center = std::isfinite(lo[d]) ? lo[d] : 0.0;
      lo[d] = center - 0.5;
      hi[d] = center + 0.5;
    }
    binning.ranges[d] = {lo[d], hi[d]};
  }
  return binning;
}

GeometryCounts empty_counts(const GeometryBinning& binning) {
  GeometryCounts counts;
  for (auto& bins : counts.bins) {
    bins.assign(static_cast<std::size_t>(binning.bins_per_dim), 0);
  }
  return counts;
}

void accumulate_counts(GeometryCounts& counts, const GeometryBinning& binning,
                       const FrameRecord& frame) {
  for (const PredictedBox& box : frame.boxes) {
    const std::array<double, 4> dims = box_dims(box);
    for (std::size_t d = 0; d < 4; ++d) {
      ++counts.bins[d][bin_index(dims[d], binning.ranges[d], binning.bins_per_dim)];
    }
    ++counts.total;
  }
}

GeometryHistogram normalize_counts(const GeometryCounts& counts, const GeometryBinning& binning,
                                   double epsilon) {
  GeometryHistogram hist;
  hist.epsilon = epsilon;
  for (std::size_t d = 0; d < 4; ++d) {
    AxisHistogram& axis = hist.axes[d];
    axis.lo = binning.ranges[d][0];
    axis.hi = binning.ranges[d][1];
    axis.probs.resize(counts.bins[d].size());
    double total = 0.0;
    for (std::size_t i = 0; i < axis.probs.size(); ++i) {
      axis.probs[i] = static_cast<double>(counts.bins[d][i]) +
                      epsilon * std::max<long>(counts.total, 1);
      total += axis.probs[i];
    }
    for (double& p : axis.probs) p /= total;
  }
  return hist;
}

GeometryHistogram uniform_histogram(const GeometryBinning& binning, double epsilon) {
  GeometryCounts counts = empty_counts(binning);
  return normalize_counts(counts, binning, epsilon);
}

double kl_divergence(const GeometryHistogram& observed, const GeometryHistogram& prior) {
  double kl = 0.0;
  for (std::size_t d = 0; d < 4; ++d) {
    const std::vector<double>& p = observed.axes[d].probs;
    const std::vector<double>& q = prior.axes[d].probs;
    if (p.size() != q.size()) {
      throw std::invalid_argument("histogram bin counts differ");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] > 0.0) kl += p[i] * std::log(p[i] / q[i]);
    }
  }
  return kl;
}

}  // namespace owal::crb
