#ifndef HSICUBE_IO_CONFIG_HPP
#define HSICUBE_IO_CONFIG_HPP

#include <array>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hsicube/error.hpp"
#include "hsicube/illuminant.hpp"
#include "hsicube/io/raw_io.hpp"
#include "hsicube/pipeline.hpp"
#include "hsicube/sensor.hpp"

// Camera configuration file.
//
//   # comment
//   key = value
//   key =            <- a value may continue on following indented lines
//       more value
//
// Keys:
//   config_id     0..3
//   f_number      real
//   analog_gain   real
//   sensor_size   <width> <height>            (default: crop extent)
//   crop_rect     <x> <y> <w> <h>
//   bias          <counts>                    (scalar dark level)
//   bias_frame    <path>                      (per-pixel dark frame, raw format)
//   white         <path>                      (white reference, raw format + .max sidecar)
//   layout        25 band indices, tile rows top to bottom
//   band_centers  25 wavelengths in nm
//   sat_k, peak_ratio, cos_min                (emitter rejection thresholds)
//
// Relative paths resolve against the configuration file's directory.

namespace hsicube::io {

struct CameraFile {
  CameraConfig camera;
  MosaicLayout layout;
  RejectionParams rejection;
  std::optional<fs::path> white_path;
  std::optional<fs::path> bias_frame_path;
};

namespace detail {

inline std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& what) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  std::string current;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const bool continuation = first > 0 && line.find('=') == std::string::npos;
    if (continuation) {
      if (current.empty()) {
        throw Error(ErrorKind::configuration, what + ":" + std::to_string(lineno) + ": continuation without a key");
      }
      kv[current] += ' ' + line.substr(first);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::configuration, what + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = line.substr(first, eq - first);
    key.erase(key.find_last_not_of(" \t") + 1);
    if (kv.count(key)) {
      throw Error(ErrorKind::configuration, what + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    kv[key] = line.substr(eq + 1);
    current = key;
  }
  return kv;
}

template <typename T>
std::vector<T> parse_list(const std::string& value, const std::string& key) {
  std::istringstream is(value);
  std::vector<T> out;
  T v;
  while (is >> v) out.push_back(v);
  if (!is.eof()) throw Error(ErrorKind::configuration, "bad value for '" + key + "'");
  return out;
}

template <typename T>
T parse_one(const std::string& value, const std::string& key) {
  const auto list = parse_list<T>(value, key);
  if (list.size() != 1) throw Error(ErrorKind::configuration, "'" + key + "' takes one value");
  return list.front();
}

}  // namespace detail

inline CameraFile parse_camera_config(const std::string& text, const fs::path& base_dir = {},
                                      const std::string& what = "config") {
  auto kv = detail::parse_key_values(text, what);
  CameraFile file;
  auto take = [&](const char* key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto resolve = [&](const std::string& value, const char* key) {
    fs::path p = detail::parse_one<std::string>(value, key);
    return p.is_relative() ? base_dir / p : p;
  };

  if (auto v = take("config_id")) file.camera.config_id = detail::parse_one<int>(*v, "config_id");
  if (auto v = take("f_number")) file.camera.f_number = detail::parse_one<double>(*v, "f_number");
  if (auto v = take("analog_gain")) file.camera.analog_gain = detail::parse_one<double>(*v, "analog_gain");
  if (auto v = take("crop_rect")) {
    const auto r = detail::parse_list<long long>(*v, "crop_rect");
    if (r.size() != 4 || r[0] < 0 || r[1] < 0 || r[2] <= 0 || r[3] <= 0) {
      throw Error(ErrorKind::configuration, "crop_rect needs four non-negative integers x y w h");
    }
    file.camera.crop_rect = {static_cast<std::size_t>(r[0]), static_cast<std::size_t>(r[1]),
                             static_cast<std::size_t>(r[2]), static_cast<std::size_t>(r[3])};
  } else {
    throw Error(ErrorKind::configuration, what + ": missing crop_rect");
  }
  if (auto v = take("sensor_size")) {
    const auto s = detail::parse_list<long long>(*v, "sensor_size");
    if (s.size() != 2 || s[0] <= 0 || s[1] <= 0) throw Error(ErrorKind::configuration, "sensor_size needs width height");
    file.camera.sensor_width = static_cast<std::size_t>(s[0]);
    file.camera.sensor_height = static_cast<std::size_t>(s[1]);
  } else {
    file.camera.sensor_width = file.camera.crop_rect.x + file.camera.crop_rect.w;
    file.camera.sensor_height = file.camera.crop_rect.y + file.camera.crop_rect.h;
  }
  if (auto v = take("bias")) {
    const int bias = detail::parse_one<int>(*v, "bias");
    if (bias < 0 || bias > kRawMax) throw Error(ErrorKind::configuration, "bias outside [0,4095]");
    file.camera.bias = Bias(static_cast<std::uint16_t>(bias));
  }
  if (auto v = take("bias_frame")) {
    file.bias_frame_path = resolve(*v, "bias_frame");
  }
  if (auto v = take("white")) file.white_path = resolve(*v, "white");

  MosaicLayout::Table table = MosaicLayout::identity_table();
  auto centers = MosaicLayout::default_band_centers();
  if (auto v = take("layout")) {
    const auto cells = detail::parse_list<int>(*v, "layout");
    if (cells.size() != kBands) throw Error(ErrorKind::configuration, "layout needs 25 band indices");
    for (std::size_t i = 0; i < kBands; ++i) table[i / kTile][i % kTile] = cells[i];
  }
  if (auto v = take("band_centers")) {
    const auto list = detail::parse_list<double>(*v, "band_centers");
    if (list.size() != kBands) throw Error(ErrorKind::configuration, "band_centers needs 25 values");
    std::copy(list.begin(), list.end(), centers.begin());
  }
  file.layout = MosaicLayout(table, centers);

  if (auto v = take("sat_k")) file.rejection.sat_k = detail::parse_one<int>(*v, "sat_k");
  if (auto v = take("peak_ratio")) file.rejection.peak_ratio = detail::parse_one<double>(*v, "peak_ratio");
  if (auto v = take("cos_min")) file.rejection.cos_min = detail::parse_one<double>(*v, "cos_min");

  if (!kv.empty()) throw Error(ErrorKind::configuration, what + ": unknown key '" + kv.begin()->first + "'");
  file.camera.validate();
  return file;
}

inline CameraFile read_camera_config(const fs::path& path) {
  return parse_camera_config(detail::read_file(path), path.parent_path(), path.string());
}

/// Writes `file` in the grammar above; paths are written as given.
inline std::string format_camera_config(const CameraFile& file) {
  std::ostringstream os;
  const auto& cam = file.camera;
  os << "config_id = " << cam.config_id << '\n';
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", cam.f_number);
  os << "f_number = " << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.9g", cam.analog_gain);
  os << "analog_gain = " << buf << '\n';
  os << "sensor_size = " << cam.sensor_width << ' ' << cam.sensor_height << '\n';
  os << "crop_rect = " << cam.crop_rect.x << ' ' << cam.crop_rect.y << ' ' << cam.crop_rect.w << ' '
     << cam.crop_rect.h << '\n';
  if (file.bias_frame_path) {
    os << "bias_frame = " << file.bias_frame_path->generic_string() << '\n';
  } else {
    os << "bias = " << (cam.bias.is_scalar() ? cam.bias.scalar() : 0) << '\n';
  }
  if (file.white_path) os << "white = " << file.white_path->generic_string() << '\n';
  os << "layout =\n";
  for (std::size_t r = 0; r < kTile; ++r) {
    os << "   ";
    for (std::size_t c = 0; c < kTile; ++c) {
      std::snprintf(buf, sizeof buf, " %2d", file.layout.table()[r][c]);
      os << buf;
    }
    os << '\n';
  }
  os << "band_centers =";
  for (std::size_t b = 0; b < kBands; ++b) {
    std::snprintf(buf, sizeof buf, "%.9g", file.layout.band_centers_nm()[b]);
    os << (b % 5 == 0 ? "\n    " : " ") << buf;
  }
  os << '\n';
  os << "sat_k = " << file.rejection.sat_k << '\n';
  std::snprintf(buf, sizeof buf, "%.9g", file.rejection.peak_ratio);
  os << "peak_ratio = " << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.9g", file.rejection.cos_min);
  os << "cos_min = " << buf << '\n';
  return os.str();
}

/// Loads the configuration plus the calibration frames it references.
inline PipelineConfig load_pipeline_config(const fs::path& path) {
  CameraFile file = read_camera_config(path);
  PipelineConfig cfg;
  if (file.bias_frame_path) file.camera.bias = Bias(read_u16_frame(*file.bias_frame_path));
  cfg.camera = file.camera;
  cfg.layout = file.layout;
  cfg.rejection = file.rejection;
  if (!file.white_path) throw Error(ErrorKind::configuration, path.string() + ": no white reference configured");
  cfg.white = read_white(*file.white_path, cfg.layout, file.camera.config_id);
  return cfg;
}

}  // namespace hsicube::io

#endif  // HSICUBE_IO_CONFIG_HPP
