#ifndef HSICUBE_IO_RAW_IO_HPP
#define HSICUBE_IO_RAW_IO_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hsicube/error.hpp"
#include "hsicube/sensor.hpp"

// Raw frame file: 16-byte header ("HSRW", u32 width, u32 height, u32 reserved)
// followed by width*height little-endian u16 samples in row-major order.

namespace hsicube::io {

namespace fs = std::filesystem;

inline constexpr std::array<char, 4> kRawMagic{'H', 'S', 'R', 'W'};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::io, "short write to " + path.string());
}

inline std::string encode_u16_frame(const Frame<std::uint16_t>& grid) {
  std::string out;
  out.reserve(16 + grid.size() * 2);
  out.append(kRawMagic.data(), kRawMagic.size());
  put_u32(out, static_cast<std::uint32_t>(grid.width()));
  put_u32(out, static_cast<std::uint32_t>(grid.height()));
  put_u32(out, 0);
  for (std::uint16_t v : grid.values()) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>(v >> 8));
  }
  return out;
}

inline Frame<std::uint16_t> decode_u16_frame(const std::string& bytes, const std::string& what) {
  if (bytes.size() < 16 || bytes.compare(0, 4, kRawMagic.data(), 4) != 0) {
    throw Error(ErrorKind::io, what + ": missing HSRW header");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint32_t width = get_u32(p + 4);
  const std::uint32_t height = get_u32(p + 8);
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (bytes.size() != 16 + 2 * n) {
    throw Error(ErrorKind::io, what + ": expected " + std::to_string(16 + 2 * n) + " bytes, found " +
                                   std::to_string(bytes.size()));
  }
  std::vector<std::uint16_t> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = static_cast<std::uint16_t>(p[16 + 2 * i] | (p[17 + 2 * i] << 8));
  }
  return {width, height, std::move(values)};
}

}  // namespace detail

inline void write_raw(const fs::path& path, const RawFrame& frame) {
  detail::write_file(path, detail::encode_u16_frame(frame.grid()));
}

inline RawFrame read_raw(const fs::path& path) {
  auto grid = detail::decode_u16_frame(detail::read_file(path), path.string());
  const std::size_t w = grid.width(), h = grid.height();
  return {w, h, std::vector<std::uint16_t>(grid.values().begin(), grid.values().end())};
}

/// Dark frame in the raw format (no 12-bit check beyond u16).
inline Frame<std::uint16_t> read_u16_frame(const fs::path& path) {
  return detail::decode_u16_frame(detail::read_file(path), path.string());
}

inline fs::path spectrum_sidecar(const fs::path& white_path) {
  fs::path p = white_path;
  p += ".max";
  return p;
}

/// White frame rounded to u16 in the raw format, plus `<path>.max` with one
/// max-spectrum value per line.
inline void write_white(const fs::path& path, const WhiteReference& white) {
  const RealFrame& f = white.frame();
  std::vector<std::uint16_t> values(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    values[i] = static_cast<std::uint16_t>(std::clamp(std::lround(f.values()[i]), 0L, 65535L));
  }
  detail::write_file(path, detail::encode_u16_frame(Frame<std::uint16_t>(f.width(), f.height(), std::move(values))));
  std::string text;
  char buf[64];
  for (double v : white.max_spectrum()) {
    std::snprintf(buf, sizeof buf, "%.9g\n", v);
    text += buf;
  }
  detail::write_file(spectrum_sidecar(path), text);
}

/// Reads a white reference. The sidecar spectrum, when present, must agree
/// with the frame's per-band maxima.
inline WhiteReference read_white(const fs::path& path, const MosaicLayout& layout, int config_id = 0) {
  auto grid = detail::decode_u16_frame(detail::read_file(path), path.string());
  std::vector<float> values(grid.values().begin(), grid.values().end());
  RealFrame frame(grid.width(), grid.height(), std::move(values));
  WhiteReference white(std::move(frame), layout, config_id);
  const fs::path sidecar = spectrum_sidecar(path);
  if (fs::exists(sidecar)) {
    std::istringstream is(detail::read_file(sidecar));
    std::array<double, kBands> spectrum{};
    for (std::size_t b = 0; b < kBands; ++b) {
      if (!(is >> spectrum[b])) throw Error(ErrorKind::io, sidecar.string() + ": expected 25 values");
      if (std::abs(spectrum[b] - white.max_spectrum()[b]) > 0.5) {
        throw Error(ErrorKind::calibration, sidecar.string() + ": band " + std::to_string(b) +
                                                " maximum disagrees with the reference frame");
      }
    }
    return WhiteReference::with_spectrum(white.frame(), spectrum, config_id);
  }
  return white;
}

}  // namespace hsicube::io

#endif  // HSICUBE_IO_RAW_IO_HPP
