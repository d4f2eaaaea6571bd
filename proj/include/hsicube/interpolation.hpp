#ifndef HSICUBE_INTERPOLATION_HPP
#define HSICUBE_INTERPOLATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace hsicube::detail {

inline std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
  if (i < 0) return 0;
  if (static_cast<std::size_t>(i) >= n) return n - 1;
  return static_cast<std::size_t>(i);
}

// Lerp written as a + t*(b - a) so that constant neighbourhoods come back
// bit-identical.
inline float lerp(float a, float b, float t) { return a + t * (b - a); }

/// Bilinear sample of a row-major plane at fractional (y, x) with clamped
/// (replicated) borders.
inline float sample_bilinear(std::span<const float> plane, std::size_t height, std::size_t width,
                             double y, double x) {
  const double fy = std::floor(y);
  const double fx = std::floor(x);
  const auto ty = static_cast<float>(y - fy);
  const auto tx = static_cast<float>(x - fx);
  const auto iy = static_cast<std::ptrdiff_t>(fy);
  const auto ix = static_cast<std::ptrdiff_t>(fx);
  const std::size_t y0 = clamp_index(iy, height), y1 = clamp_index(iy + 1, height);
  const std::size_t x0 = clamp_index(ix, width), x1 = clamp_index(ix + 1, width);
  const float top = lerp(plane[y0 * width + x0], plane[y0 * width + x1], tx);
  const float bottom = lerp(plane[y1 * width + x0], plane[y1 * width + x1], tx);
  return lerp(top, bottom, ty);
}

/// out(i, j) = in(i + dy, j + dx), bilinear, clamped borders. Same weights as
/// sample_bilinear but with the per-column indices hoisted out of the loop.
inline void shift_plane(std::span<const float> in, std::span<float> out, std::size_t height,
                        std::size_t width, double dy, double dx) {
  const double fy = std::floor(dy);
  const double fx = std::floor(dx);
  const auto ty = static_cast<float>(dy - fy);
  const auto tx = static_cast<float>(dx - fx);
  const auto oy = static_cast<std::ptrdiff_t>(fy);
  const auto ox = static_cast<std::ptrdiff_t>(fx);

  std::vector<std::size_t> x0(width), x1(width);
  for (std::size_t j = 0; j < width; ++j) {
    const auto jj = static_cast<std::ptrdiff_t>(j) + ox;
    x0[j] = clamp_index(jj, width);
    x1[j] = clamp_index(jj + 1, width);
  }
  // columns whose two taps need no clamping: 0 <= j + ox and j + ox + 1 < width
  const auto w = static_cast<std::ptrdiff_t>(width);
  const auto lo = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(-ox, 0, w));
  const auto hi = std::max(lo, static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(w - 1 - ox, 0, w)));
  for (std::size_t i = 0; i < height; ++i) {
    const auto ii = static_cast<std::ptrdiff_t>(i) + oy;
    const float* r0 = in.data() + clamp_index(ii, height) * width;
    const float* r1 = in.data() + clamp_index(ii + 1, height) * width;
    float* dst = out.data() + i * width;
    for (std::size_t j = 0; j < width; ++j) {
      if (j == lo) {  // unclamped interior: contiguous, vectorisable
        const float* a0 = r0 + static_cast<std::ptrdiff_t>(lo) + ox;
        const float* a1 = r1 + static_cast<std::ptrdiff_t>(lo) + ox;
        for (std::size_t k = 0; k < hi - lo; ++k) {
          const float top = lerp(a0[k], a0[k + 1], tx);
          const float bottom = lerp(a1[k], a1[k + 1], tx);
          dst[lo + k] = lerp(top, bottom, ty);
        }
        j = hi - 1;
        continue;
      }
      const float top = lerp(r0[x0[j]], r0[x1[j]], tx);
      const float bottom = lerp(r1[x0[j]], r1[x1[j]], tx);
      dst[j] = lerp(top, bottom, ty);
    }
  }
}

}  // namespace hsicube::detail

#endif  // HSICUBE_INTERPOLATION_HPP
