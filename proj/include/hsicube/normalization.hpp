#ifndef HSICUBE_NORMALIZATION_HPP
#define HSICUBE_NORMALIZATION_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "hsicube/cube.hpp"
#include "hsicube/error.hpp"

namespace hsicube {

enum class PixelNorm { euclidean, sum };

/// Divides each pixel's spectrum by its norm. Zero spectra stay zero.
inline HsiCube normalize_pixelwise(HsiCube cube, PixelNorm norm = PixelNorm::euclidean) {
  std::vector<double> acc(cube.plane_size(), 0.0);
  for (std::size_t b = 0; b < kBands; ++b) {
    const auto plane = cube.plane(b);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      const double v = plane[i];
      acc[i] += norm == PixelNorm::euclidean ? v * v : std::abs(v);
    }
  }
  if (norm == PixelNorm::euclidean) {
    for (double& v : acc) v = std::sqrt(v);
  }
  for (std::size_t b = 0; b < kBands; ++b) {
    auto plane = cube.plane(b);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      plane[i] = acc[i] > 0.0 ? static_cast<float>(plane[i] / acc[i]) : 0.0f;
    }
  }
  return cube;
}

enum class BandStatsKind { zscore, minmax };

/// Per-band moments and extrema. `kind` selects which pair normalize_bandwise uses.
struct BandStats {
  BandStatsKind kind = BandStatsKind::zscore;
  std::array<double, kBands> mean{};
  std::array<double, kBands> std{};
  std::array<double, kBands> min{};
  std::array<double, kBands> max{};
};

/// Population mean/std and min/max of every band.
inline BandStats compute_band_stats(const HsiCube& cube, BandStatsKind kind = BandStatsKind::zscore) {
  BandStats stats;
  stats.kind = kind;
  const auto n = static_cast<double>(cube.plane_size());
  for (std::size_t b = 0; b < kBands; ++b) {
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (float v : cube.plane(b)) {
      sum += v;
      lo = std::min(lo, static_cast<double>(v));
      hi = std::max(hi, static_cast<double>(v));
    }
    const double mean = n > 0 ? sum / n : 0.0;
    double var = 0.0;
    for (float v : cube.plane(b)) var += (v - mean) * (v - mean);
    stats.mean[b] = mean;
    stats.std[b] = n > 0 ? std::sqrt(var / n) : 0.0;
    stats.min[b] = n > 0 ? lo : 0.0;
    stats.max[b] = n > 0 ? hi : 0.0;
  }
  return stats;
}

/// z-score or min-max scaling per band. A band with zero spread is a
/// statistics error.
inline HsiCube normalize_bandwise(HsiCube cube, const BandStats& stats) {
  for (std::size_t b = 0; b < kBands; ++b) {
    const bool z = stats.kind == BandStatsKind::zscore;
    const double offset = z ? stats.mean[b] : stats.min[b];
    const double spread = z ? stats.std[b] : stats.max[b] - stats.min[b];
    if (!(spread > 0.0)) {
      throw Error(ErrorKind::statistics, std::string(z ? "std" : "range") + " of band " +
                                             std::to_string(b) + " is not positive");
    }
    for (float& v : cube.plane(b)) v = static_cast<float>((v - offset) / spread);
  }
  return cube;
}

}  // namespace hsicube

#endif  // HSICUBE_NORMALIZATION_HPP
