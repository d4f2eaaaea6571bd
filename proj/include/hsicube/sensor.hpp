#ifndef HSICUBE_SENSOR_HPP
#define HSICUBE_SENSOR_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hsicube/cube.hpp"
#include "hsicube/error.hpp"
#include "hsicube/frame.hpp"
#include "hsicube/interpolation.hpp"

namespace hsicube {

inline constexpr std::uint16_t kRawMax = 4095;

struct TileOffset {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const TileOffset&, const TileOffset&) = default;
};

/// 5x5 spectral mosaic: which band sits at each cell of the repeating tile.
/// The tile phase is anchored at sensor pixel (0, 0).
class MosaicLayout {
 public:
  using Table = std::array<std::array<int, kTile>, kTile>;

  MosaicLayout() : MosaicLayout(identity_table(), default_band_centers()) {}

  MosaicLayout(const Table& band_at, std::array<double, kBands> band_centers_nm)
      : band_at_(band_at), centers_(band_centers_nm) {
    std::array<bool, kBands> seen{};
    for (std::size_t r = 0; r < kTile; ++r) {
      for (std::size_t c = 0; c < kTile; ++c) {
        const int b = band_at_[r][c];
        if (b < 0 || b >= static_cast<int>(kBands)) {
          throw Error(ErrorKind::configuration, "mosaic cell (" + std::to_string(r) + "," +
                                                    std::to_string(c) + ") holds band " +
                                                    std::to_string(b) + ", outside [0,25)");
        }
        if (seen[b]) {
          throw Error(ErrorKind::configuration,
                      "mosaic layout is not a bijection: band " + std::to_string(b) + " repeats");
        }
        seen[b] = true;
        offsets_[b] = {r, c};
      }
    }
    for (std::size_t b = 1; b < kBands; ++b) {
      if (!(centers_[b] > centers_[b - 1])) {
        throw Error(ErrorKind::configuration, "band centres must be strictly increasing (band " +
                                                  std::to_string(b) + ")");
      }
    }
  }

  static MosaicLayout identity() { return {}; }

  static Table identity_table() {
    Table t{};
    for (std::size_t r = 0; r < kTile; ++r)
      for (std::size_t c = 0; c < kTile; ++c) t[r][c] = static_cast<int>(r * kTile + c);
    return t;
  }

  /// 25 evenly spaced centres over 600-975 nm.
  static std::array<double, kBands> default_band_centers() {
    std::array<double, kBands> centers{};
    for (std::size_t b = 0; b < kBands; ++b) centers[b] = 600.0 + 375.0 * static_cast<double>(b) / 24.0;
    return centers;
  }

  std::size_t band_at(std::size_t tile_row, std::size_t tile_col) const {
    if (tile_row >= kTile || tile_col >= kTile) {
      throw Error(ErrorKind::domain, "tile cell out of range");
    }
    return static_cast<std::size_t>(band_at_[tile_row][tile_col]);
  }
  std::size_t band_at(TileOffset cell) const { return band_at(cell.row, cell.col); }

  /// Band sampled by sensor pixel (row, col).
  std::size_t band_at_pixel(std::size_t row, std::size_t col) const {
    return static_cast<std::size_t>(band_at_[row % kTile][col % kTile]);
  }

  const Table& table() const noexcept { return band_at_; }
  const std::array<double, kBands>& band_centers_nm() const noexcept { return centers_; }

  friend TileOffset band_offset(const MosaicLayout& layout, std::size_t band);

 private:
  Table band_at_;
  std::array<double, kBands> centers_;
  std::array<TileOffset, kBands> offsets_{};
};

/// Inverse of band_at: the tile cell holding `band`.
inline TileOffset band_offset(const MosaicLayout& layout, std::size_t band) {
  if (band >= kBands) {
    throw Error(ErrorKind::domain, "band " + std::to_string(band) + " outside [0,25)");
  }
  return layout.offsets_[band];
}

/// 12-bit sensor frame. Construction rejects any sample above 4095.
class RawFrame {
 public:
  RawFrame() = default;
  RawFrame(std::size_t width, std::size_t height, std::uint16_t fill = 0)
      : grid_(width, height, check_sample(fill)) {}
  RawFrame(std::size_t width, std::size_t height, std::vector<std::uint16_t> values)
      : grid_(width, height, std::move(values)) {
    const auto it = std::find_if(grid_.values().begin(), grid_.values().end(),
                                 [](std::uint16_t v) { return v > kRawMax; });
    if (it != grid_.values().end()) {
      const auto idx = static_cast<std::size_t>(it - grid_.values().begin());
      throw Error(ErrorKind::domain, "raw sample " + std::to_string(*it) + " at (" +
                                         std::to_string(idx / width) + "," +
                                         std::to_string(idx % width) + ") exceeds 12-bit range");
    }
  }

  std::size_t width() const noexcept { return grid_.width(); }
  std::size_t height() const noexcept { return grid_.height(); }
  std::uint16_t operator()(std::size_t row, std::size_t col) const { return grid_(row, col); }
  std::span<const std::uint16_t> values() const noexcept { return grid_.values(); }
  const Frame<std::uint16_t>& grid() const noexcept { return grid_; }

  friend bool operator==(const RawFrame&, const RawFrame&) = default;

 private:
  static std::uint16_t check_sample(std::uint16_t v) {
    if (v > kRawMax) throw Error(ErrorKind::domain, "raw sample exceeds 12-bit range");
    return v;
  }

  Frame<std::uint16_t> grid_;
};

struct CropRect {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t w = 0;
  std::size_t h = 0;
  friend bool operator==(const CropRect&, const CropRect&) = default;
};

/// Dark level in raw counts: one scalar per configuration, or a per-pixel
/// dark frame when one was recorded.
class Bias {
 public:
  Bias(std::uint16_t scalar = 0) : value_(scalar) {}  // NOLINT(google-explicit-constructor)
  explicit Bias(Frame<std::uint16_t> dark) : value_(std::move(dark)) {}

  bool is_scalar() const noexcept { return std::holds_alternative<std::uint16_t>(value_); }
  std::uint16_t scalar() const { return std::get<std::uint16_t>(value_); }
  const Frame<std::uint16_t>& frame() const { return std::get<Frame<std::uint16_t>>(value_); }

  /// Bias at flat index `i` of a frame with the bias's shape (any index for a scalar).
  std::uint16_t at(std::size_t i) const {
    return is_scalar() ? scalar() : frame().values()[i];
  }

  /// Throws a shape error unless this bias applies to a width x height frame.
  void check_shape(std::size_t width, std::size_t height) const {
    if (!is_scalar() && !frame().same_shape(width, height)) {
      throw Error(ErrorKind::shape, "per-pixel bias is " + std::to_string(frame().width()) + "x" +
                                        std::to_string(frame().height()) + ", frame is " +
                                        std::to_string(width) + "x" + std::to_string(height));
    }
  }

  friend bool operator==(const Bias&, const Bias&) = default;

 private:
  std::variant<std::uint16_t, Frame<std::uint16_t>> value_;
};

struct CameraConfig {
  int config_id = 0;
  double f_number = 0.0;
  double analog_gain = 1.0;
  CropRect crop_rect;
  Bias bias;
  std::size_t sensor_width = 0;
  std::size_t sensor_height = 0;

  void validate() const {
    if (config_id < 0 || config_id > 3) {
      throw Error(ErrorKind::configuration,
                  "config_id " + std::to_string(config_id) + " outside {0,1,2,3}");
    }
    if (crop_rect.w == 0 || crop_rect.h == 0 || crop_rect.w % kTile != 0 || crop_rect.h % kTile != 0) {
      throw Error(ErrorKind::configuration, "crop_rect size must be a positive multiple of 5");
    }
    if (sensor_width != 0 && sensor_height != 0 &&
        (crop_rect.x + crop_rect.w > sensor_width || crop_rect.y + crop_rect.h > sensor_height)) {
      throw Error(ErrorKind::configuration, "crop_rect exceeds the sensor extent");
    }
  }
};

/// Averaged white-tile frame plus its per-band maximum spectrum.
class WhiteReference {
 public:
  WhiteReference() = default;

  /// Computes max_spectrum from `frame`; the frame's (0,0) must sit on the
  /// mosaic tile origin.
  WhiteReference(RealFrame frame, const MosaicLayout& layout, int config_id = 0)
      : frame_(std::move(frame)), config_id_(config_id) {
    max_spectrum_ = compute_max_spectrum(frame_, layout);
  }

  /// Uses a max spectrum measured elsewhere (sidecar file, or the full-sensor
  /// reference this frame was cropped from).
  static WhiteReference with_spectrum(RealFrame frame, const std::array<double, kBands>& max_spectrum,
                                      int config_id = 0) {
    WhiteReference w;
    w.frame_ = std::move(frame);
    w.max_spectrum_ = max_spectrum;
    w.config_id_ = config_id;
    return w;
  }

  static std::array<double, kBands> compute_max_spectrum(const RealFrame& frame,
                                                         const MosaicLayout& layout) {
    std::array<double, kBands> max{};
    max.fill(-1.0);
    for (std::size_t r = 0; r < frame.height(); ++r) {
      for (std::size_t c = 0; c < frame.width(); ++c) {
        double& m = max[layout.band_at_pixel(r, c)];
        m = std::max(m, static_cast<double>(frame(r, c)));
      }
    }
    return max;
  }

  const RealFrame& frame() const noexcept { return frame_; }
  const std::array<double, kBands>& max_spectrum() const noexcept { return max_spectrum_; }
  int config_id() const noexcept { return config_id_; }

 private:
  RealFrame frame_;
  std::array<double, kBands> max_spectrum_{};
  int config_id_ = 0;
};

/// Cube-pixel displacement of band `band`'s samples from the tile centre (2,2).
inline std::pair<double, double> band_displacement(const MosaicLayout& layout, std::size_t band) {
  const TileOffset cell = band_offset(layout, band);
  return {(static_cast<double>(cell.row) - 2.0) / 5.0, (static_cast<double>(cell.col) - 2.0) / 5.0};
}

/// Inverse of the reflectance pipeline, used as a test oracle: renders the
/// mosaic frame a sensor would record for `cube` under `white`. Band b of
/// cube pixel (i,j) is sampled at the band's physical sub-tile position.
inline RawFrame synth_raw_from_cube(const HsiCube& cube, const MosaicLayout& layout,
                                    const WhiteReference& white, const Bias& bias) {
  const std::size_t width = cube.width() * kTile;
  const std::size_t height = cube.height() * kTile;
  if (!white.frame().same_shape(width, height)) {
    throw Error(ErrorKind::shape, "white frame is " + std::to_string(white.frame().width()) + "x" +
                                      std::to_string(white.frame().height()) + ", cube needs " +
                                      std::to_string(width) + "x" + std::to_string(height));
  }
  bias.check_shape(width, height);

  std::vector<std::uint16_t> out(width * height);
  for (std::size_t b = 0; b < kBands; ++b) {
    const TileOffset cell = band_offset(layout, b);
    const auto [dy, dx] = band_displacement(layout, b);
    const auto plane = cube.plane(b);
    for (std::size_t i = 0; i < cube.height(); ++i) {
      for (std::size_t j = 0; j < cube.width(); ++j) {
        const double reflectance = detail::sample_bilinear(
            plane, cube.height(), cube.width(), static_cast<double>(i) + dy, static_cast<double>(j) + dx);
        const std::size_t row = i * kTile + cell.row;
        const std::size_t col = j * kTile + cell.col;
        const std::size_t idx = row * width + col;
        const double dark = bias.at(idx);
        const double value = std::round(reflectance * (white.frame().values()[idx] - dark) + dark);
        out[idx] = static_cast<std::uint16_t>(std::clamp(value, 0.0, static_cast<double>(kRawMax)));
      }
    }
  }
  return {width, height, std::move(out)};
}

}  // namespace hsicube

#endif  // HSICUBE_SENSOR_HPP
