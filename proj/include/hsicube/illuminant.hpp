#ifndef HSICUBE_ILLUMINANT_HPP
#define HSICUBE_ILLUMINANT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hsicube/cube.hpp"
#include "hsicube/error.hpp"
#include "hsicube/frame.hpp"
#include "hsicube/sensor.hpp"

// In-frame illuminant intensity estimate. The brightest broadband reflector
// in the scene (road marks, white car bodies, occasionally sky) is taken as a
// stand-in for the white tile; artificial emitters are screened out by their
// spectral shape before the scale is derived.

namespace hsicube {

struct RejectionParams {
  int sat_k = 3;            ///< saturated bands needed to reject a pixel
  double peak_ratio = 2.5;  ///< max/mean of the white-normalised spectrum
  double cos_min = 0.90;    ///< minimum cosine similarity to the white spectrum
};

enum class RejectReason { none, saturation, emitter_shape, low_similarity };

inline std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::none: return "none";
    case RejectReason::saturation: return "saturation";
    case RejectReason::emitter_shape: return "emitter-shape";
    case RejectReason::low_similarity: return "low-similarity";
  }
  return "unknown";
}

struct ArtificialVerdict {
  bool artificial = false;
  RejectReason reason = RejectReason::none;
};

/// Tests a spectrum in irradiance units (the same units as the white
/// reference's max spectrum) against the three rejection rules, in order:
/// saturation, narrow-band emitter shape, dissimilarity to the white spectrum.
inline ArtificialVerdict is_artificial(std::span<const double> spectrum,
                                       const std::array<double, kBands>& white_max_spectrum,
                                       const RejectionParams& params, int saturated_bands = 0) {
  if (spectrum.size() != kBands) throw Error(ErrorKind::shape, "spectrum must have 25 bands");
  if (saturated_bands >= params.sat_k) return {true, RejectReason::saturation};

  double peak = 0.0, sum = 0.0, dot = 0.0, norm_s = 0.0, norm_w = 0.0;
  for (std::size_t b = 0; b < kBands; ++b) {
    const double w = white_max_spectrum[b];
    const double normalised = w > 0.0 ? spectrum[b] / w : 0.0;
    peak = std::max(peak, normalised);
    sum += normalised;
    dot += spectrum[b] * w;
    norm_s += spectrum[b] * spectrum[b];
    norm_w += w * w;
  }
  const double mean = sum / static_cast<double>(kBands);
  if (!(mean > 0.0) || !(norm_s > 0.0) || !(norm_w > 0.0)) {
    return {true, RejectReason::low_similarity};
  }
  if (peak / mean > params.peak_ratio) return {true, RejectReason::emitter_shape};
  if (dot / std::sqrt(norm_s * norm_w) < params.cos_min) return {true, RejectReason::low_similarity};
  return {};
}

struct AlbedoCandidate {
  std::size_t row = 0;
  std::size_t col = 0;
  Spectrum spectrum{};
  double broadband = 0.0;           ///< mean of `spectrum`
  double smoothed_broadband = 0.0;  ///< 3x3 median broadband over non-artificial neighbours
  bool rejected = false;
  RejectReason reason = RejectReason::none;
};

struct ScalingReport {
  AlbedoCandidate chosen;
  double scale = 1.0;
  std::size_t candidates_examined = 0;
  std::size_t rejected_count = 0;
  bool fallback = false;  ///< every candidate was rejected; scale forced to 1
};

namespace detail {

inline std::vector<double> broadband_map(const HsiCube& cube) {
  std::vector<double> bb(cube.plane_size(), 0.0);
  for (std::size_t b = 0; b < kBands; ++b) {
    const auto plane = cube.plane(b);
    for (std::size_t i = 0; i < bb.size(); ++i) bb[i] += plane[i];
  }
  for (double& v : bb) v /= static_cast<double>(kBands);
  return bb;
}

/// 3x3 median with replicated borders. With `keep`, only window entries whose
/// source pixel is kept take part (an even count averages the middle pair);
/// a window with no kept pixel falls back to all nine.
inline std::vector<double> median3x3(const std::vector<double>& in, std::size_t height, std::size_t width,
                                     const std::vector<std::uint8_t>* keep = nullptr) {
  std::vector<double> out(in.size());
  std::array<double, 9> window{};
  std::array<double, 9> kept{};
  for (std::size_t i = 0; i < height; ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      std::size_t n = 0, m = 0;
      for (std::ptrdiff_t di = -1; di <= 1; ++di) {
        const std::size_t ii = clamp_index(static_cast<std::ptrdiff_t>(i) + di, height);
        for (std::ptrdiff_t dj = -1; dj <= 1; ++dj) {
          const std::size_t idx = ii * width + clamp_index(static_cast<std::ptrdiff_t>(j) + dj, width);
          window[n++] = in[idx];
          if (keep && (*keep)[idx]) kept[m++] = in[idx];
        }
      }
      if (m == 0 || m == 9) {
        std::nth_element(window.begin(), window.begin() + 4, window.end());
        out[i * width + j] = window[4];
        continue;
      }
      std::sort(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(m));
      out[i * width + j] = m % 2 ? kept[m / 2] : 0.5 * (kept[m / 2 - 1] + kept[m / 2]);
    }
  }
  return out;
}

/// is_artificial for every pixel of `cube` (reflectance, converted to
/// irradiance with the white maxima), accumulated band plane by band plane.
/// The per-pixel arithmetic runs in the same order as is_artificial.
inline std::vector<ArtificialVerdict> classify_pixels(const HsiCube& cube, const std::array<double, kBands>& white_max,
                                                      const RejectionParams& params,
                                                      const Frame<std::uint8_t>* saturated) {
  const std::size_t n = cube.plane_size();
  double norm_w = 0.0;
  for (std::size_t b = 0; b < kBands; ++b) norm_w += white_max[b] * white_max[b];
  std::vector<ArtificialVerdict> out(n);
  // Pixel blocks small enough that the accumulators stay in cache across bands.
  constexpr std::size_t kBlock = 512;
  std::array<double, kBlock> peak{}, sum{}, dot{}, norm_s{};
  for (std::size_t start = 0; start < n; start += kBlock) {
    const std::size_t m = std::min(kBlock, n - start);
    peak.fill(0.0);
    sum.fill(0.0);
    dot.fill(0.0);
    norm_s.fill(0.0);
    for (std::size_t b = 0; b < kBands; ++b) {
      const double w = white_max[b];
      const float* plane = cube.plane(b).data() + start;
      if (w > 0.0) {
        for (std::size_t i = 0; i < m; ++i) {
          const double s = plane[i] * w;
          const double normalised = s / w;
          peak[i] = std::max(peak[i], normalised);
          sum[i] += normalised;
          dot[i] += s * w;
          norm_s[i] += s * s;
        }
      } else {
        for (std::size_t i = 0; i < m; ++i) {
          const double s = plane[i] * w;
          dot[i] += s * w;
          norm_s[i] += s * s;
        }
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      ArtificialVerdict& v = out[start + i];
      const int sat = saturated ? saturated->values()[start + i] : 0;
      const double mean = sum[i] / static_cast<double>(kBands);
      if (sat >= params.sat_k) {
        v = {true, RejectReason::saturation};
      } else if (!(mean > 0.0) || !(norm_s[i] > 0.0) || !(norm_w > 0.0)) {
        v = {true, RejectReason::low_similarity};
      } else if (peak[i] / mean > params.peak_ratio) {
        v = {true, RejectReason::emitter_shape};
      } else if (dot[i] / std::sqrt(norm_s[i] * norm_w) < params.cos_min) {
        v = {true, RejectReason::low_similarity};
      }
    }
  }
  return out;
}

struct AlbedoScan {
  std::optional<AlbedoCandidate> chosen;
  std::size_t examined = 0;
  std::size_t rejected = 0;
};

// Candidates are visited by descending smoothed broadband, then raw broadband,
// then scan order (lowest row, lowest column), which makes the result
// independent of how the search is evaluated.
inline AlbedoScan scan_albedo(const HsiCube& cube, const WhiteReference& white,
                              const RejectionParams& params, const Frame<std::uint8_t>* saturated) {
  if (saturated && !saturated->same_shape(cube.width(), cube.height())) {
    throw Error(ErrorKind::shape, "saturation map does not match the cube");
  }
  AlbedoScan scan;
  if (cube.plane_size() == 0) return scan;

  const auto raw_bb = broadband_map(cube);
  const auto& white_max = white.max_spectrum();

  // Classify every pixel first so emitter halos stay out of the neighbourhood
  // medians of natural pixels.
  const auto verdicts = classify_pixels(cube, white_max, params, saturated);
  std::vector<std::uint8_t> natural(cube.plane_size());
  for (std::size_t idx = 0; idx < verdicts.size(); ++idx) natural[idx] = verdicts[idx].artificial ? 0 : 1;
  const auto smooth_bb = median3x3(raw_bb, cube.height(), cube.width(), &natural);

  std::vector<std::uint32_t> heap(cube.plane_size());
  for (std::size_t i = 0; i < heap.size(); ++i) heap[i] = static_cast<std::uint32_t>(i);
  // std heap keeps the "largest" on top: a < b means b is visited first.
  const auto later = [&](std::uint32_t a, std::uint32_t b) {
    if (smooth_bb[a] != smooth_bb[b]) return smooth_bb[a] < smooth_bb[b];
    if (raw_bb[a] != raw_bb[b]) return raw_bb[a] < raw_bb[b];
    return a > b;
  };
  std::make_heap(heap.begin(), heap.end(), later);

  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), later);
    const std::uint32_t idx = heap.back();
    heap.pop_back();
    ++scan.examined;

    AlbedoCandidate cand;
    cand.row = idx / cube.width();
    cand.col = idx % cube.width();
    cand.spectrum = cube.spectrum(cand.row, cand.col);
    cand.broadband = raw_bb[idx];
    cand.smoothed_broadband = smooth_bb[idx];
    auto verdict = verdicts[idx];
    if (!verdict.artificial && !(cand.smoothed_broadband > 0.0)) {
      verdict = {true, RejectReason::low_similarity};
    }
    if (verdict.artificial) {
      ++scan.rejected;
      continue;
    }
    scan.chosen = cand;
    break;
  }
  return scan;
}

}  // namespace detail

/// Locates the highest-albedo pixel that is not an artificial emitter and
/// derives s = 1 / (median broadband of its 3x3 neighbours that are not
/// artificial themselves). `saturated_bands`, when given,
/// holds the per-pixel count of bands at the raw ceiling. Throws an
/// estimation error when every pixel is rejected.
inline ScalingReport find_max_albedo(const HsiCube& cube, const WhiteReference& white,
                                     const RejectionParams& params = {},
                                     const Frame<std::uint8_t>* saturated_bands = nullptr) {
  const auto scan = detail::scan_albedo(cube, white, params, saturated_bands);
  if (!scan.chosen) {
    throw Error(ErrorKind::estimation, "all " + std::to_string(scan.examined) +
                                           " candidate pixels were rejected as artificial");
  }
  ScalingReport report;
  report.chosen = *scan.chosen;
  report.scale = 1.0 / scan.chosen->smoothed_broadband;
  report.candidates_examined = scan.examined;
  report.rejected_count = scan.rejected;
  return report;
}

/// Same search, but total rejection yields s = 1 with `fallback` set.
inline ScalingReport find_max_albedo_or_fallback(const HsiCube& cube, const WhiteReference& white,
                                                 const RejectionParams& params = {},
                                                 const Frame<std::uint8_t>* saturated_bands = nullptr) {
  const auto scan = detail::scan_albedo(cube, white, params, saturated_bands);
  ScalingReport report;
  report.candidates_examined = scan.examined;
  report.rejected_count = scan.rejected;
  if (scan.chosen) {
    report.chosen = *scan.chosen;
    report.scale = 1.0 / scan.chosen->smoothed_broadband;
  } else {
    report.fallback = true;
    report.scale = 1.0;
    report.chosen.rejected = true;
  }
  return report;
}

inline HsiCube apply_scaling(HsiCube cube, const ScalingReport& report) {
  if (!(report.scale > 0.0)) throw Error(ErrorKind::domain, "scale must be positive");
  if (report.scale == 1.0) return cube;
  for (float& v : cube.values()) v = static_cast<float>(static_cast<double>(v) * report.scale);
  return cube;
}

}  // namespace hsicube

#endif  // HSICUBE_ILLUMINANT_HPP
