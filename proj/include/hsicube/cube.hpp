#ifndef HSICUBE_CUBE_HPP
#define HSICUBE_CUBE_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hsicube/error.hpp"

namespace hsicube {

inline constexpr std::size_t kBands = 25;
inline constexpr std::size_t kTile = 5;

using Spectrum = std::array<float, kBands>;

/// H x W x 25 reflectance cube, stored band-sequential (one contiguous plane
/// per band) so per-band stages and the ENVI writer stream planes directly.
class HsiCube {
 public:
  HsiCube() = default;
  HsiCube(std::size_t height, std::size_t width, float fill = 0.0f)
      : height_(height), width_(width), values_(height * width * kBands, fill) {}
  HsiCube(std::size_t height, std::size_t width, std::vector<float> bsq)
      : height_(height), width_(width), values_(std::move(bsq)) {
    if (values_.size() != height_ * width_ * kBands) {
      throw Error(ErrorKind::shape, "cube buffer holds " + std::to_string(values_.size()) +
                                        " values, expected " +
                                        std::to_string(height_ * width_ * kBands));
    }
  }

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  static constexpr std::size_t bands() noexcept { return kBands; }
  std::size_t plane_size() const noexcept { return height_ * width_; }

  float& operator()(std::size_t row, std::size_t col, std::size_t band) {
    return values_[band * plane_size() + row * width_ + col];
  }
  float operator()(std::size_t row, std::size_t col, std::size_t band) const {
    return values_[band * plane_size() + row * width_ + col];
  }

  std::span<float> plane(std::size_t band) { return {values_.data() + band * plane_size(), plane_size()}; }
  std::span<const float> plane(std::size_t band) const {
    return {values_.data() + band * plane_size(), plane_size()};
  }

  Spectrum spectrum(std::size_t row, std::size_t col) const {
    Spectrum s{};
    const std::size_t offset = row * width_ + col;
    for (std::size_t b = 0; b < kBands; ++b) s[b] = values_[b * plane_size() + offset];
    return s;
  }

  /// Arithmetic mean over the 25 bands, accumulated in double.
  double broadband(std::size_t row, std::size_t col) const {
    const std::size_t offset = row * width_ + col;
    double sum = 0.0;
    for (std::size_t b = 0; b < kBands; ++b) sum += values_[b * plane_size() + offset];
    return sum / static_cast<double>(kBands);
  }

  std::span<float> values() noexcept { return values_; }
  std::span<const float> values() const noexcept { return values_; }

  friend bool operator==(const HsiCube&, const HsiCube&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<float> values_;
};

}  // namespace hsicube

#endif  // HSICUBE_CUBE_HPP
