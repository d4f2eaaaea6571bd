#ifndef HSICUBE_IO_ENVI_HPP
#define HSICUBE_IO_ENVI_HPP

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hsicube/cube.hpp"
#include "hsicube/error.hpp"
#include "hsicube/io/raw_io.hpp"

// ENVI standard band-sequential cube: float32 little-endian data file plus a
// text header next to it with the same stem and a .hdr extension.

namespace hsicube::io {

inline fs::path envi_header_path(const fs::path& data_path) {
  fs::path p = data_path;
  return p.replace_extension(".hdr");
}

inline std::string envi_header(const HsiCube& cube, const std::array<double, kBands>& band_centers_nm) {
  std::ostringstream os;
  os << "ENVI\n"
     << "description = {hsicube reflectance cube}\n"
     << "samples = " << cube.width() << '\n'
     << "lines = " << cube.height() << '\n'
     << "bands = " << kBands << '\n'
     << "header offset = 0\n"
     << "file type = ENVI Standard\n"
     << "data type = 4\n"
     << "interleave = bsq\n"
     << "byte order = 0\n"
     << "wavelength units = Nanometers\n"
     << "wavelength = {";
  char buf[32];
  for (std::size_t b = 0; b < kBands; ++b) {
    std::snprintf(buf, sizeof buf, "%.3f", band_centers_nm[b]);
    os << (b ? ", " : "") << buf;
  }
  os << "}\n";
  return os.str();
}

inline void write_envi(const fs::path& data_path, const HsiCube& cube,
                       const std::array<double, kBands>& band_centers_nm) {
  std::string bytes(cube.values().size() * 4, '\0');
  for (std::size_t i = 0; i < cube.values().size(); ++i) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, &cube.values()[i], 4);
    for (int k = 0; k < 4; ++k) bytes[4 * i + k] = static_cast<char>((bits >> (8 * k)) & 0xFF);
  }
  detail::write_file(data_path, bytes);
  detail::write_file(envi_header_path(data_path), envi_header(cube, band_centers_nm));
}

struct EnviCube {
  HsiCube cube;
  std::vector<double> wavelengths;
};

inline EnviCube read_envi(const fs::path& data_path) {
  const fs::path hdr = envi_header_path(data_path);
  std::istringstream is(detail::read_file(hdr));
  std::string line;
  if (!std::getline(is, line) || line.rfind("ENVI", 0) != 0) {
    throw Error(ErrorKind::io, hdr.string() + ": not an ENVI header");
  }
  std::map<std::string, std::string> fields;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    fields[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto field = [&](const std::string& key) -> const std::string& {
    const auto it = fields.find(key);
    if (it == fields.end()) throw Error(ErrorKind::io, hdr.string() + ": missing '" + key + "'");
    return it->second;
  };
  const std::size_t samples = std::stoul(field("samples"));
  const std::size_t lines = std::stoul(field("lines"));
  if (std::stoul(field("bands")) != kBands || field("data type") != "4" || field("interleave") != "bsq" ||
      field("byte order") != "0") {
    throw Error(ErrorKind::io, hdr.string() + ": only 25-band float32 little-endian BSQ is supported");
  }
  const std::string bytes = detail::read_file(data_path);
  const std::size_t n = samples * lines * kBands;
  if (bytes.size() != n * 4) throw Error(ErrorKind::io, data_path.string() + ": size does not match header");
  std::vector<float> values(n);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t bits = detail::get_u32(p + 4 * i);
    std::memcpy(&values[i], &bits, 4);
  }
  EnviCube out{HsiCube(lines, samples, std::move(values)), {}};
  if (const auto it = fields.find("wavelength"); it != fields.end()) {
    std::string list = it->second;
    for (char& c : list) {
      if (c == '{' || c == '}' || c == ',') c = ' ';
    }
    std::istringstream ws(list);
    double w;
    while (ws >> w) out.wavelengths.push_back(w);
  }
  return out;
}

}  // namespace hsicube::io

#endif  // HSICUBE_IO_ENVI_HPP
