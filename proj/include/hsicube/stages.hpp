#ifndef HSICUBE_STAGES_HPP
#define HSICUBE_STAGES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hsicube/cube.hpp"
#include "hsicube/error.hpp"
#include "hsicube/frame.hpp"
#include "hsicube/interpolation.hpp"
#include "hsicube/sensor.hpp"

// The individual reflectance-pipeline stages. Each is a pure function of its
// inputs; process_frame (pipeline.hpp) composes them in fixed order.

namespace hsicube {

namespace detail {

inline void check_crop(std::size_t width, std::size_t height, const CropRect& rect) {
  if (rect.x % kTile != 0 || rect.y % kTile != 0) {
    throw Error(ErrorKind::alignment, "crop origin (" + std::to_string(rect.x) + "," +
                                          std::to_string(rect.y) +
                                          ") is not on the 5x5 mosaic tile grid");
  }
  if (rect.w % kTile != 0 || rect.h % kTile != 0 || rect.w == 0 || rect.h == 0) {
    throw Error(ErrorKind::alignment, "crop size " + std::to_string(rect.w) + "x" +
                                          std::to_string(rect.h) +
                                          " is not a positive multiple of 5");
  }
  if (rect.x + rect.w > width || rect.y + rect.h > height) {
    throw Error(ErrorKind::bounds, "crop rect exceeds the " + std::to_string(width) + "x" +
                                       std::to_string(height) + " frame");
  }
}

template <typename T>
Frame<T> crop_grid(const Frame<T>& in, const CropRect& rect) {
  check_crop(in.width(), in.height(), rect);
  std::vector<T> out;
  out.reserve(rect.w * rect.h);
  for (std::size_t r = 0; r < rect.h; ++r) {
    const auto row = in.row(rect.y + r);
    out.insert(out.end(), row.begin() + static_cast<std::ptrdiff_t>(rect.x),
               row.begin() + static_cast<std::ptrdiff_t>(rect.x + rect.w));
  }
  return {rect.w, rect.h, std::move(out)};
}

// debiased / (white - bias); the first non-positive denominator is reported.
inline RealFrame divide_by_white(const RawFrame& debiased, const WhiteReference& white, const Bias& bias) {
  const RealFrame& wf = white.frame();
  if (!wf.same_shape(debiased.width(), debiased.height())) {
    throw Error(ErrorKind::shape, "white frame is " + std::to_string(wf.width()) + "x" +
                                      std::to_string(wf.height()) + ", raw frame is " +
                                      std::to_string(debiased.width()) + "x" +
                                      std::to_string(debiased.height()));
  }
  bias.check_shape(debiased.width(), debiased.height());
  const auto raw = debiased.values();
  const auto ref = wf.values();
  std::vector<float> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const float denom = ref[i] - static_cast<float>(bias.at(i));
    if (!(denom > 0.0f)) {
      throw Error(ErrorKind::calibration,
                  "white reference not above bias at pixel (" + std::to_string(i / wf.width()) + "," +
                      std::to_string(i % wf.width()) + ")");
    }
    out[i] = static_cast<float>(raw[i]) / denom;
  }
  return {debiased.width(), debiased.height(), std::move(out)};
}

}  // namespace detail

/// Cuts `rect` out of the frame. The origin must sit on the tile grid so the
/// mosaic phase of the result matches the sensor's.
inline RawFrame crop_frame(const RawFrame& raw, const CropRect& rect) {
  auto grid = detail::crop_grid(raw.grid(), rect);
  const std::size_t w = grid.width(), h = grid.height();
  return {w, h, std::vector<std::uint16_t>(grid.values().begin(), grid.values().end())};
}

inline RawFrame subtract_bias(const RawFrame& raw, const Bias& bias) {
  bias.check_shape(raw.width(), raw.height());
  const auto in = raw.values();
  std::vector<std::uint16_t> out(in.size());
  if (bias.is_scalar()) {
    const std::uint16_t dark = bias.scalar();
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] > dark ? in[i] - dark : 0;
  } else {
    const auto dark = bias.frame().values();
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] > dark[i] ? in[i] - dark[i] : 0;
  }
  return {raw.width(), raw.height(), std::move(out)};
}

/// (raw - bias)+ / (white - bias). Not clipped; values above 1 are expected
/// for emitters and specular highlights.
inline RealFrame reflectance_correct(const RawFrame& raw, const WhiteReference& white, const Bias& bias) {
  return detail::divide_by_white(subtract_bias(raw, bias), white, bias);
}

/// Partial demosaic: one cube pixel per 5x5 tile, no interpolation.
inline HsiCube demosaic(const RealFrame& frame, const MosaicLayout& layout) {
  if (frame.width() % kTile != 0 || frame.height() % kTile != 0) {
    throw Error(ErrorKind::shape, "frame " + std::to_string(frame.width()) + "x" +
                                      std::to_string(frame.height()) +
                                      " is not a multiple of the 5x5 tile");
  }
  HsiCube cube(frame.height() / kTile, frame.width() / kTile);
  const std::size_t w = cube.width();
  // one pass over the frame, tile row by tile row
  for (std::size_t i = 0; i < cube.height(); ++i) {
    for (std::size_t r = 0; r < kTile; ++r) {
      const auto src = frame.row(i * kTile + r);
      for (std::size_t c = 0; c < kTile; ++c) {
        float* dst = cube.plane(layout.band_at_pixel(r, c)).data() + i * w;
        const float* s = src.data() + c;
        for (std::size_t j = 0; j < w; ++j) dst[j] = s[j * kTile];
      }
    }
  }
  return cube;
}

/// Number of bands per tile whose raw sample sits at the 12-bit ceiling.
inline Frame<std::uint8_t> saturated_band_counts(const RawFrame& raw) {
  if (raw.width() % kTile != 0 || raw.height() % kTile != 0) {
    throw Error(ErrorKind::shape, "frame is not a multiple of the 5x5 tile");
  }
  Frame<std::uint8_t> counts(raw.width() / kTile, raw.height() / kTile, 0);
  for (std::size_t r = 0; r < raw.height(); ++r) {
    for (std::size_t c = 0; c < raw.width(); ++c) {
      if (raw(r, c) >= kRawMax) ++counts(r / kTile, c / kTile);
    }
  }
  return counts;
}

enum class FilterKind { box, gaussian };

struct FilterSpec {
  FilterKind kind = FilterKind::box;
  int radius = 1;
  double sigma = 0.8;
};

/// Parses "box:1" / "gaussian:2" (radius after the colon, default 1).
inline FilterSpec parse_filter_spec(std::string_view text) {
  FilterSpec spec;
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  if (kind == "box") {
    spec.kind = FilterKind::box;
  } else if (kind == "gaussian") {
    spec.kind = FilterKind::gaussian;
  } else {
    throw Error(ErrorKind::configuration, "unsupported spatial filter kind '" + std::string(kind) + "'");
  }
  if (colon != std::string_view::npos) {
    try {
      spec.radius = std::stoi(std::string(text.substr(colon + 1)));
    } catch (const std::exception&) {
      throw Error(ErrorKind::configuration, "bad filter radius in '" + std::string(text) + "'");
    }
  }
  if (spec.radius < 1) throw Error(ErrorKind::configuration, "filter radius must be >= 1");
  return spec;
}

namespace detail {

inline std::vector<float> filter_taps(const FilterSpec& spec) {
  if (spec.radius < 1) throw Error(ErrorKind::configuration, "filter radius must be >= 1");
  const auto n = static_cast<std::size_t>(2 * spec.radius + 1);
  std::vector<double> w(n);
  switch (spec.kind) {
    case FilterKind::box:
      std::fill(w.begin(), w.end(), 1.0);
      break;
    case FilterKind::gaussian:
      if (!(spec.sigma > 0.0)) throw Error(ErrorKind::configuration, "gaussian sigma must be > 0");
      for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) - spec.radius;
        w[i] = std::exp(-x * x / (2.0 * spec.sigma * spec.sigma));
      }
      break;
    default:
      throw Error(ErrorKind::configuration, "unsupported spatial filter kind");
  }
  double total = 0.0;
  for (double v : w) total += v;
  std::vector<float> taps(n);
  for (std::size_t i = 0; i < n; ++i) taps[i] = static_cast<float>(w[i] / total);
  return taps;
}

// One separable pass, accumulated as centre + sum w*(v - centre) so constant
// regions are reproduced exactly.
inline void filter_pass(std::span<const float> in, std::span<float> out, std::size_t height,
                        std::size_t width, const std::vector<float>& taps, bool vertical) {
  const auto radius = static_cast<std::ptrdiff_t>(taps.size() / 2);
  for (std::size_t i = 0; i < height; ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      const float centre = in[i * width + j];
      float acc = 0.0f;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        const std::size_t ii = vertical ? clamp_index(static_cast<std::ptrdiff_t>(i) + k, height) : i;
        const std::size_t jj = vertical ? j : clamp_index(static_cast<std::ptrdiff_t>(j) + k, width);
        acc += taps[static_cast<std::size_t>(k + radius)] * (in[ii * width + jj] - centre);
      }
      out[i * width + j] = centre + acc;
    }
  }
}

}  // namespace detail

/// Per-band separable smoothing with replicated borders.
inline HsiCube spatial_filter(const HsiCube& cube, const FilterSpec& spec) {
  const auto taps = detail::filter_taps(spec);
  HsiCube out(cube.height(), cube.width());
  std::vector<float> tmp(cube.plane_size());
  for (std::size_t b = 0; b < kBands; ++b) {
    detail::filter_pass(cube.plane(b), tmp, cube.height(), cube.width(), taps, false);
    detail::filter_pass(tmp, out.plane(b), cube.height(), cube.width(), taps, true);
  }
  return out;
}

inline HsiCube spatial_filter(const HsiCube& cube, const std::optional<FilterSpec>& spec) {
  return spec ? spatial_filter(cube, *spec) : cube;
}

/// Resamples every band onto the tile-centre grid. A band whose samples sit
/// at tile cell (r, c) lies (r-2)/5, (c-2)/5 cube pixels off centre, so its
/// aligned value at (i, j) is read at (i - (r-2)/5, j - (c-2)/5).
inline HsiCube align_to_center(const HsiCube& cube, const MosaicLayout& layout) {
  HsiCube out(cube.height(), cube.width());
  for (std::size_t b = 0; b < kBands; ++b) {
    const auto [dy, dx] = band_displacement(layout, b);
    if (dy == 0.0 && dx == 0.0) {
      std::copy(cube.plane(b).begin(), cube.plane(b).end(), out.plane(b).begin());
      continue;
    }
    detail::shift_plane(cube.plane(b), out.plane(b), cube.height(), cube.width(), -dy, -dx);
  }
  return out;
}

inline HsiCube clip_unit(HsiCube cube) {
  for (float& v : cube.values()) v = std::clamp(v, 0.0f, 1.0f);
  return cube;
}

}  // namespace hsicube

#endif  // HSICUBE_STAGES_HPP
