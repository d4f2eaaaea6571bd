#ifndef HSICUBE_PIPELINE_HPP
#define HSICUBE_PIPELINE_HPP

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "hsicube/cube.hpp"
#include "hsicube/error.hpp"
#include "hsicube/illuminant.hpp"
#include "hsicube/normalization.hpp"
#include "hsicube/sensor.hpp"
#include "hsicube/stages.hpp"

namespace hsicube {

struct PipelineConfig {
  CameraConfig camera;
  MosaicLayout layout;
  WhiteReference white;
  std::optional<FilterSpec> spatial_filter;
  bool enable_illuminant_scaling = false;
  bool enable_pixel_norm = false;
  PixelNorm pixel_norm = PixelNorm::euclidean;
  RejectionParams rejection;
  std::optional<BandStats> band_stats;
};

/// Label of the experimental variant a flag combination reproduces
/// ("No scaling+PN", "Scaling+PN", "Scaling"; "No scaling" otherwise).
inline std::string version_label(const PipelineConfig& cfg) {
  std::string label = cfg.enable_illuminant_scaling ? "Scaling" : "No scaling";
  if (cfg.enable_pixel_norm) label += "+PN";
  return label;
}

struct StageTiming {
  std::string stage;
  double microseconds = 0.0;
};

class StageTrace {
 public:
  void record(std::string stage, double us) { stages_.push_back({std::move(stage), us}); }

  const std::vector<StageTiming>& stages() const noexcept { return stages_; }

  double total_us() const {
    double t = 0.0;
    for (const auto& s : stages_) t += s.microseconds;
    return t;
  }

  std::string to_text() const {
    std::ostringstream os;
    char buf[64];
    for (const auto& s : stages_) {
      std::snprintf(buf, sizeof buf, "%-12s %12.1f us\n", s.stage.c_str(), s.microseconds);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, "%-12s %12.1f us\n", "total", total_us());
    os << buf;
    return os.str();
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "stage,us\n";
    char buf[32];
    for (const auto& s : stages_) {
      std::snprintf(buf, sizeof buf, "%.1f", s.microseconds);
      os << s.stage << ',' << buf << '\n';
    }
    return os.str();
  }

 private:
  std::vector<StageTiming> stages_;
};

struct PipelineResult {
  HsiCube cube;
  StageTrace trace;
  std::optional<ScalingReport> scaling;
  std::optional<Frame<std::uint8_t>> saturated_bands;
};

namespace detail {

class StageTimer {
 public:
  explicit StageTimer(StageTrace& trace) : trace_(trace) {}

  template <typename Fn>
  auto run(const char* stage, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        finish(stage, start);
      } else {
        auto out = fn();
        finish(stage, start);
        return out;
      }
    } catch (const Error& e) {
      throw e.stage().empty() ? e.with_stage(stage) : e;
    }
  }

 private:
  void finish(const char* stage, std::chrono::steady_clock::time_point start) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    trace_.record(stage, std::chrono::duration<double, std::micro>(elapsed).count());
  }

  StageTrace& trace_;
};

// Calibration frames may be supplied at full sensor size (cropped alongside
// the raw frame) or already at crop size. Crop-sized frames are used in place:
// these return nothing and the caller keeps referring to the configured one.
inline std::optional<WhiteReference> fit_white(const WhiteReference& white, std::size_t raw_w, std::size_t raw_h,
                                               const CropRect& rect) {
  const RealFrame& f = white.frame();
  if (f.same_shape(rect.w, rect.h)) return std::nullopt;
  if (f.same_shape(raw_w, raw_h)) {
    return WhiteReference::with_spectrum(crop_grid(f, rect), white.max_spectrum(), white.config_id());
  }
  throw Error(ErrorKind::shape, "white frame " + std::to_string(f.width()) + "x" +
                                    std::to_string(f.height()) +
                                    " matches neither the raw frame nor the crop");
}

inline std::optional<Bias> fit_bias(const Bias& bias, std::size_t raw_w, std::size_t raw_h, const CropRect& rect) {
  if (bias.is_scalar() || bias.frame().same_shape(rect.w, rect.h)) return std::nullopt;
  if (bias.frame().same_shape(raw_w, raw_h)) return Bias(crop_grid(bias.frame(), rect));
  throw Error(ErrorKind::shape, "per-pixel bias matches neither the raw frame nor the crop");
}

}  // namespace detail

/// Full reflectance pipeline: crop, bias removal, reflectance correction,
/// partial demosaic, optional spatial filter, band alignment, optional
/// illuminant scaling, unit clipping, optional pixel / band normalisation.
inline PipelineResult process_frame(const RawFrame& raw, const PipelineConfig& cfg) {
  PipelineResult result;
  detail::StageTimer timer(result.trace);
  const CropRect& rect = cfg.camera.crop_rect;

  struct Calibrated {
    RawFrame raw;
    std::optional<WhiteReference> white;
    std::optional<Bias> bias;
  };
  const auto cal = timer.run("crop", [&] {
    return Calibrated{crop_frame(raw, rect), detail::fit_white(cfg.white, raw.width(), raw.height(), rect),
                      detail::fit_bias(cfg.camera.bias, raw.width(), raw.height(), rect)};
  });
  const WhiteReference& white = cal.white ? *cal.white : cfg.white;
  const Bias& bias = cal.bias ? *cal.bias : cfg.camera.bias;
  const RawFrame debiased = timer.run("bias", [&] { return subtract_bias(cal.raw, bias); });
  RealFrame reflectance =
      timer.run("reflectance", [&] { return detail::divide_by_white(debiased, white, bias); });
  HsiCube cube = timer.run("demosaic", [&] { return demosaic(reflectance, cfg.layout); });
  if (cfg.spatial_filter) {
    cube = timer.run("filter", [&] { return spatial_filter(cube, *cfg.spatial_filter); });
  }
  cube = timer.run("align", [&] { return align_to_center(cube, cfg.layout); });
  if (cfg.enable_illuminant_scaling) {
    cube = timer.run("scaling", [&] {
      result.saturated_bands = saturated_band_counts(cal.raw);
      result.scaling =
          find_max_albedo_or_fallback(cube, white, cfg.rejection, &*result.saturated_bands);
      return apply_scaling(std::move(cube), *result.scaling);
    });
  }
  cube = timer.run("clip", [&] { return clip_unit(std::move(cube)); });
  if (cfg.enable_pixel_norm) {
    cube = timer.run("pixel_norm", [&] { return normalize_pixelwise(std::move(cube), cfg.pixel_norm); });
  }
  if (cfg.band_stats) {
    cube = timer.run("band_norm", [&] { return normalize_bandwise(std::move(cube), *cfg.band_stats); });
  }
  result.cube = std::move(cube);
  return result;
}

}  // namespace hsicube

#endif  // HSICUBE_PIPELINE_HPP
