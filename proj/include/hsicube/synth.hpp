#ifndef HSICUBE_SYNTH_HPP
#define HSICUBE_SYNTH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hsicube/cube.hpp"
#include "hsicube/error.hpp"
#include "hsicube/pipeline.hpp"
#include "hsicube/sensor.hpp"
#include "hsicube/stages.hpp"

// Synthetic scenes with known ground truth, and the calibration frames used
// to render them into raw sensor frames.
//
// Scene spec grammar, one directive per line ('#' starts a comment):
//   seed <n>
//   noise <sigma>                                  additive gaussian, reflectance units
//   flat <albedo>                                  background level (default 0.1)
//   gradient <a0> <ax> <ay>                        a0 + ax*x/W + ay*y/H added everywhere
//   blob <row> <col> <sigma> <amp> [tilt]          gaussian bump, optional spectral tilt
//   patch <row> <col> <h> <w> <albedo>             flat broadband reflector
//   emitter <row> <col> <size> <band> <peak>       narrow-band source around <band>
// Coordinates are cube pixels. Directives apply in file order.

namespace hsicube {

struct SceneElement {
  enum class Kind { flat, gradient, blob, patch, emitter } kind;
  std::vector<double> args;
};

struct SceneSpec {
  std::uint64_t seed = 0;
  double noise = 0.0;
  std::vector<SceneElement> elements;
};

inline SceneSpec parse_scene_spec(const std::string& text) {
  SceneSpec spec;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    std::vector<double> args;
    double v;
    while (ls >> v) args.push_back(v);
    if (!ls.eof()) {
      throw Error(ErrorKind::configuration, "scene line " + std::to_string(lineno) + ": non-numeric argument");
    }
    auto need = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi) {
        throw Error(ErrorKind::configuration,
                    "scene line " + std::to_string(lineno) + ": wrong argument count for '" + word + "'");
      }
    };
    if (word == "seed") {
      need(1, 1);
      if (args[0] < 0) throw Error(ErrorKind::configuration, "seed must be non-negative");
      spec.seed = static_cast<std::uint64_t>(args[0]);
    } else if (word == "noise") {
      need(1, 1);
      if (args[0] < 0) throw Error(ErrorKind::configuration, "noise must be non-negative");
      spec.noise = args[0];
    } else if (word == "flat") {
      need(1, 1);
      spec.elements.push_back({SceneElement::Kind::flat, args});
    } else if (word == "gradient") {
      need(3, 3);
      spec.elements.push_back({SceneElement::Kind::gradient, args});
    } else if (word == "blob") {
      need(4, 5);
      if (args[2] <= 0) throw Error(ErrorKind::configuration, "blob sigma must be positive");
      args.resize(5, 0.0);
      spec.elements.push_back({SceneElement::Kind::blob, args});
    } else if (word == "patch") {
      need(5, 5);
      spec.elements.push_back({SceneElement::Kind::patch, args});
    } else if (word == "emitter") {
      need(5, 5);
      if (args[3] < 0 || args[3] >= static_cast<double>(kBands)) {
        throw Error(ErrorKind::configuration, "emitter band outside [0,25)");
      }
      spec.elements.push_back({SceneElement::Kind::emitter, args});
    } else {
      throw Error(ErrorKind::configuration, "scene line " + std::to_string(lineno) + ": unknown directive '" + word + "'");
    }
  }
  return spec;
}

/// Spectrum of a narrow-band source peaking at `band` over a background level.
inline Spectrum emitter_spectrum(std::size_t band, double peak, double background) {
  Spectrum s;
  s.fill(static_cast<float>(background));
  s[band] = static_cast<float>(peak);
  if (band > 0) s[band - 1] = static_cast<float>(background + 0.3 * (peak - background));
  if (band + 1 < kBands) s[band + 1] = static_cast<float>(background + 0.3 * (peak - background));
  return s;
}

inline HsiCube render_scene(const SceneSpec& spec, std::size_t height, std::size_t width) {
  HsiCube cube(height, width, 0.1f);
  const auto in_bounds = [&](double r, double c) {
    return r >= 0 && c >= 0 && r < static_cast<double>(height) && c < static_cast<double>(width);
  };
  for (const auto& e : spec.elements) {
    const auto& a = e.args;
    switch (e.kind) {
      case SceneElement::Kind::flat:
        for (float& v : cube.values()) v = static_cast<float>(a[0]);
        break;
      case SceneElement::Kind::gradient:
        for (std::size_t b = 0; b < kBands; ++b) {
          auto plane = cube.plane(b);
          for (std::size_t i = 0; i < height; ++i)
            for (std::size_t j = 0; j < width; ++j)
              plane[i * width + j] += static_cast<float>(a[0] + a[1] * static_cast<double>(j) / static_cast<double>(width) +
                                                         a[2] * static_cast<double>(i) / static_cast<double>(height));
        }
        break;
      case SceneElement::Kind::blob:
        for (std::size_t b = 0; b < kBands; ++b) {
          const double gain = 1.0 + a[4] * (static_cast<double>(b) / 24.0 - 0.5);
          auto plane = cube.plane(b);
          for (std::size_t i = 0; i < height; ++i) {
            for (std::size_t j = 0; j < width; ++j) {
              const double dy = static_cast<double>(i) - a[0], dx = static_cast<double>(j) - a[1];
              plane[i * width + j] +=
                  static_cast<float>(a[3] * gain * std::exp(-(dx * dx + dy * dy) / (2.0 * a[2] * a[2])));
            }
          }
        }
        break;
      case SceneElement::Kind::patch:
        for (std::size_t i = 0; i < static_cast<std::size_t>(std::max(0.0, a[2])); ++i)
          for (std::size_t j = 0; j < static_cast<std::size_t>(std::max(0.0, a[3])); ++j) {
            const double r = a[0] + static_cast<double>(i), c = a[1] + static_cast<double>(j);
            if (!in_bounds(r, c)) continue;
            for (std::size_t b = 0; b < kBands; ++b)
              cube(static_cast<std::size_t>(r), static_cast<std::size_t>(c), b) = static_cast<float>(a[4]);
          }
        break;
      case SceneElement::Kind::emitter: {
        const auto size = static_cast<std::size_t>(std::max(1.0, a[2]));
        for (std::size_t i = 0; i < size; ++i)
          for (std::size_t j = 0; j < size; ++j) {
            const double r = a[0] + static_cast<double>(i), c = a[1] + static_cast<double>(j);
            if (!in_bounds(r, c)) continue;
            const auto ri = static_cast<std::size_t>(r), ci = static_cast<std::size_t>(c);
            const Spectrum s = emitter_spectrum(static_cast<std::size_t>(a[3]), a[4], cube(ri, ci, 0));
            for (std::size_t b = 0; b < kBands; ++b) cube(ri, ci, b) = s[b];
          }
        break;
      }
    }
  }
  if (spec.noise > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise);
    for (float& v : cube.values()) v = static_cast<float>(v + noise(rng));
  }
  for (float& v : cube.values()) v = std::max(v, 0.0f);
  return cube;
}

/// Averaged white-tile frame: a smooth per-band level (peaking mid-range)
/// times radial vignetting, above `bias`, rounded to whole counts.
inline WhiteReference make_white_reference(const MosaicLayout& layout, std::size_t width, std::size_t height,
                                           std::uint16_t bias, int config_id = 0, double peak_level = 3600.0) {
  RealFrame frame(width, height);
  const double cx = 0.5 * static_cast<double>(width), cy = 0.5 * static_cast<double>(height);
  const double r2max = cx * cx + cy * cy;
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const auto b = static_cast<double>(layout.band_at_pixel(r, c));
      const double level = peak_level * (0.7 + 0.3 * std::sin(3.14159265358979 * (b + 2.0) / 29.0));
      const double dx = static_cast<double>(c) - cx, dy = static_cast<double>(r) - cy;
      const double vignette = 1.0 - 0.15 * (dx * dx + dy * dy) / r2max;
      frame(r, c) = static_cast<float>(std::round(static_cast<double>(bias) + level * vignette));
    }
  }
  return WhiteReference(std::move(frame), layout, config_id);
}

/// Renders `scene` into a full sensor frame: the crop region holds the
/// synthesized mosaic, everything outside reads the dark level.
inline RawFrame synthesize_sensor_frame(const HsiCube& scene, const MosaicLayout& layout,
                                        const WhiteReference& sensor_white, std::uint16_t bias,
                                        const CropRect& crop) {
  if (scene.width() * kTile != crop.w || scene.height() * kTile != crop.h) {
    throw Error(ErrorKind::shape, "scene size does not match the crop rectangle");
  }
  const RealFrame& wf = sensor_white.frame();
  const WhiteReference white_crop =
      wf.same_shape(crop.w, crop.h)
          ? sensor_white
          : WhiteReference::with_spectrum(detail::crop_grid(wf, crop), sensor_white.max_spectrum());
  const RawFrame inner = synth_raw_from_cube(scene, layout, white_crop, Bias(bias));
  if (wf.same_shape(crop.w, crop.h)) return inner;
  std::vector<std::uint16_t> full(wf.size(), bias);
  for (std::size_t r = 0; r < crop.h; ++r)
    for (std::size_t c = 0; c < crop.w; ++c) full[(crop.y + r) * wf.width() + crop.x + c] = inner(r, c);
  return {wf.width(), wf.height(), std::move(full)};
}

/// Smooth scene: background gradient plus a few wide gaussian blobs with
/// spectral tilt. Values stay inside [0.05, 0.95].
inline HsiCube random_bandlimited_scene(std::mt19937_64& rng, std::size_t height, std::size_t width) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SceneSpec spec;
  spec.elements.push_back({SceneElement::Kind::flat, {0.15 + 0.2 * u(rng)}});
  spec.elements.push_back({SceneElement::Kind::gradient, {0.0, 0.3 * (u(rng) - 0.5), 0.3 * (u(rng) - 0.5)}});
  const int blobs = 1 + static_cast<int>(u(rng) * 3.0);
  for (int k = 0; k < blobs; ++k) {
    spec.elements.push_back({SceneElement::Kind::blob,
                             {u(rng) * static_cast<double>(height), u(rng) * static_cast<double>(width),
                              5.0 + 5.0 * u(rng), 0.1 + 0.15 * u(rng), 0.6 * (u(rng) - 0.5)}});
  }
  HsiCube cube = render_scene(spec, height, width);
  for (float& v : cube.values()) v = std::clamp(v, 0.05f, 0.95f);
  return cube;
}

struct SyntheticRig {
  PipelineConfig cfg;
  RawFrame raw;
  HsiCube truth;
};

/// Camera, calibration and one rendered frame for a width x height sensor
/// (both multiples of 5): smooth background, one bright road-mark-like patch
/// and a pair of narrow-band emitters.
inline SyntheticRig make_synthetic_rig(std::size_t width, std::size_t height, std::uint64_t seed,
                                       std::uint16_t bias = 64) {
  if (width % kTile != 0 || height % kTile != 0 || width < 50 || height < 50) {
    throw Error(ErrorKind::shape, "synthetic sensor must be a multiple of 5 and at least 50x50");
  }
  SyntheticRig rig;
  rig.cfg.camera.crop_rect = {0, 0, width, height};
  rig.cfg.camera.sensor_width = width;
  rig.cfg.camera.sensor_height = height;
  rig.cfg.camera.bias = Bias(bias);
  rig.cfg.white = make_white_reference(rig.cfg.layout, width, height, bias);

  std::mt19937_64 rng(seed);
  const std::size_t h = height / kTile, w = width / kTile;
  rig.truth = random_bandlimited_scene(rng, h, w);
  SceneSpec extras;
  extras.elements.push_back({SceneElement::Kind::patch,
                             {static_cast<double>(h / 2), static_cast<double>(w / 3), 4.0, 12.0, 0.85}});
  extras.elements.push_back({SceneElement::Kind::emitter, {2.0, 2.0, 3.0, 20.0, 1.0}});
  extras.elements.push_back(
      {SceneElement::Kind::emitter, {static_cast<double>(h) - 6.0, static_cast<double>(w) - 6.0, 3.0, 4.0, 1.0}});
  const HsiCube overlay = render_scene(extras, h, w);
  // Keep the smooth background where the overlay left its default level.
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j)
      for (std::size_t b = 0; b < kBands; ++b)
        if (overlay(i, j, b) != 0.1f) {
          for (std::size_t k = 0; k < kBands; ++k) rig.truth(i, j, k) = overlay(i, j, k);
          break;
        }
  rig.raw = synthesize_sensor_frame(rig.truth, rig.cfg.layout, rig.cfg.white, bias, rig.cfg.camera.crop_rect);
  return rig;
}

}  // namespace hsicube

#endif  // HSICUBE_SYNTH_HPP
