#include "commands.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hsicube/hsicube.hpp"
#include "hsicube/io/config.hpp"
#include "hsicube/io/envi.hpp"
#include "hsicube/io/png_labels.hpp"
#include "hsicube/io/raw_io.hpp"
#include "hsicube/io/text.hpp"

namespace hsicube::cli {

namespace fs = std::filesystem;

namespace {

std::vector<fs::path> list_files(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorKind::io, dir.string() + ": not a directory");
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

void write_text(const fs::path& path, const std::string& text) { io::detail::write_file(path, text); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

std::optional<FilterSpec> filter_option(const std::string& text) {
  if (text.empty() || text == "none") return std::nullopt;
  return parse_filter_spec(text);
}

PixelNorm pixel_norm_option(const std::string& kind) {
  if (kind == "l2") return PixelNorm::euclidean;
  if (kind == "sum") return PixelNorm::sum;
  throw Error(ErrorKind::configuration, "pixel norm must be l2 or sum, got '" + kind + "'");
}

BandStatsKind band_norm_mode(const std::string& mode) {
  if (mode == "zscore") return BandStatsKind::zscore;
  if (mode == "minmax") return BandStatsKind::minmax;
  throw Error(ErrorKind::configuration, "band norm mode must be zscore or minmax, got '" + mode + "'");
}

fs::path with_suffix(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension();
  return p.string() + suffix;
}

struct FrameOutcome {
  std::optional<ScalingReport> scaling;
};

FrameOutcome process_one(const fs::path& raw_path, const fs::path& out_path, const PipelineConfig& cfg) {
  spdlog::debug("processing {}", raw_path.string());
  const RawFrame raw = io::read_raw(raw_path);
  PipelineResult result = process_frame(raw, cfg);
  io::write_envi(out_path, result.cube, cfg.layout.band_centers_nm());
  write_text(with_suffix(out_path, ".trace.csv"), result.trace.to_csv());
  spdlog::debug("{}: {:.1f} us", raw_path.filename().string(), result.trace.total_us());
  return {result.scaling};
}

}  // namespace

int run_process(const ProcessOptions& opt) {
  PipelineConfig cfg = io::load_pipeline_config(opt.config);
  cfg.enable_illuminant_scaling = opt.scale;
  cfg.enable_pixel_norm = opt.pixel_norm;
  cfg.pixel_norm = pixel_norm_option(opt.pixel_norm_kind);
  cfg.spatial_filter = filter_option(opt.filter);
  if (!opt.band_norm.empty()) cfg.band_stats = io::read_band_stats(opt.band_norm, band_norm_mode(opt.band_norm_mode));
  spdlog::info("variant: {}", version_label(cfg));

  std::vector<std::pair<fs::path, fs::path>> jobs;
  fs::path scaling_csv;
  std::error_code ec;
  if (fs::is_directory(opt.raw, ec)) {
    const fs::path out_dir = opt.out;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::io, out_dir.string() + ": " + ec.message());
    for (const auto& f : list_files(opt.raw, ".hsrw")) {
      jobs.emplace_back(f, out_dir / f.filename().replace_extension(".cube"));
    }
    scaling_csv = out_dir / "scaling.csv";
  } else {
    jobs.emplace_back(opt.raw, opt.out);
    scaling_csv = with_suffix(opt.out, ".scaling.csv");
  }
  if (jobs.empty()) throw Error(ErrorKind::io, opt.raw + ": no .hsrw frames found");

  std::vector<FrameOutcome> outcomes(jobs.size());
  parallel_for(jobs.size(), opt.workers,
               [&](std::size_t i) { outcomes[i] = process_one(jobs[i].first, jobs[i].second, cfg); });

  bool any_fallback = false;
  if (opt.scale) {
    std::string csv = std::string(io::kScalingCsvHeader) + '\n';
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const auto& report = *outcomes[i].scaling;
      csv += io::scaling_csv_row(jobs[i].first.stem().string(), report) + '\n';
      if (report.fallback) {
        any_fallback = true;
        spdlog::warn("{}: every candidate rejected, scale left at 1", jobs[i].first.string());
      }
    }
    write_text(scaling_csv, csv);
  }
  spdlog::info("processed {} frame(s)", jobs.size());
  if (any_fallback && opt.strict_scaling) {
    std::cerr << "[scaling] estimation: fallback scale used\n";
    return kEstimationFallback;
  }
  return kOk;
}

int run_synth(const SynthOptions& opt) {
  SceneSpec spec = parse_scene_spec(io::detail::read_file(opt.scene));
  if (opt.seed) spec.seed = *opt.seed;
  io::CameraFile file = io::read_camera_config(opt.config);
  const CameraConfig& cam = file.camera;
  if (file.bias_frame_path || !cam.bias.is_scalar()) {
    throw Error(ErrorKind::configuration, "synth needs a scalar bias");
  }
  const std::uint16_t bias = cam.bias.scalar();
  const CropRect crop = cam.crop_rect;
  if (crop.w % kTile != 0 || crop.h % kTile != 0 || crop.w == 0 || crop.h == 0) {
    throw Error(ErrorKind::alignment, "crop size must be a positive multiple of 5");
  }

  const fs::path prefix = opt.out;
  WhiteReference white;
  if (file.white_path) {
    white = io::read_white(*file.white_path, file.layout, cam.config_id);
  } else {
    white = make_white_reference(file.layout, cam.sensor_width, cam.sensor_height, bias, cam.config_id);
    const fs::path white_path = prefix.string() + "_white.hsrw";
    io::write_white(white_path, white);
    io::CameraFile out_file = file;
    out_file.white_path = white_path.filename();
    write_text(prefix.string() + ".cfg", io::format_camera_config(out_file));
  }

  const HsiCube truth = render_scene(spec, crop.h / kTile, crop.w / kTile);
  const RawFrame raw = synthesize_sensor_frame(truth, file.layout, white, bias, crop);
  io::write_raw(prefix.string() + ".hsrw", raw);
  io::write_envi(prefix.string() + "_truth.cube", truth, file.layout.band_centers_nm());
  spdlog::info("wrote {}.hsrw ({}x{})", prefix.string(), raw.width(), raw.height());
  return kOk;
}

int run_stats(const StatsOptions& opt) {
  if (!opt.diff.empty()) {
    if (opt.diff.size() != 2) throw Error(ErrorKind::configuration, "--diff takes two table files");
    const auto older = parse_frequency_table_csv(io::detail::read_file(opt.diff[0]));
    const auto newer = parse_frequency_table_csv(io::detail::read_file(opt.diff[1]));
    const std::string csv = delta_csv(diff_tables(older, newer));
    if (opt.csv.empty()) {
      std::cout << csv;
    } else {
      write_text(opt.csv, csv);
    }
    return kOk;
  }
  if (opt.inputs.empty()) throw Error(ErrorKind::configuration, "stats needs label maps or --diff");
  std::vector<fs::path> files;
  for (const auto& in : opt.inputs) {
    std::error_code ec;
    if (fs::is_directory(in, ec)) {
      const auto found = list_files(in, ".png");
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(in);
    }
  }
  ClassFrequencyTable table = ClassFrequencyTable::from_counts({});
  for (const auto& f : files) {
    const LabelMap map = io::read_label_png(f);
    table += class_frequencies(std::span<const LabelMap>(&map, 1));
  }
  spdlog::info("{} label map(s), {} labeled pixels", files.size(), table.total());
  std::cout << frequency_table_text(table);
  if (!opt.csv.empty()) write_text(opt.csv, frequency_table_csv(table));
  return kOk;
}

namespace {

MetricsReport parse_metrics_csv(const fs::path& path, std::size_t& n_classes, std::string& header) {
  std::istringstream is(io::detail::read_file(path));
  std::string head, row;
  if (!std::getline(is, head) || !std::getline(is, row)) {
    throw Error(ErrorKind::schema, path.string() + ": expected a header and a data row");
  }
  const auto cols = split(head, ',');
  const auto vals = split(row, ',');
  if (cols.size() < 3 || cols.size() != vals.size() || cols[cols.size() - 2] != "global" ||
      cols.back() != "weighted") {
    throw Error(ErrorKind::schema, path.string() + ": not a metrics table");
  }
  if (header.empty()) {
    header = head;
    n_classes = cols.size() - 2;
  } else if (head != header) {
    throw Error(ErrorKind::schema, path.string() + ": class columns differ from the first table");
  }
  const auto number = [&](const std::string& v) {
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return d / 100.0;
    } catch (const std::exception&) {
      throw Error(ErrorKind::schema, path.string() + ": bad value '" + v + "'");
    }
  };
  MetricsReport r;
  for (std::size_t c = 0; c < n_classes; ++c) {
    r.iou.push_back(vals[c] == "NA" ? std::nullopt : std::optional<double>(number(vals[c])));
  }
  r.support.assign(n_classes, 0.0);
  r.global = number(vals[n_classes]);
  r.weighted = number(vals[n_classes + 1]);
  return r;
}

}  // namespace

int run_metrics(const MetricsOptions& opt) {
  std::string header;
  MetricsReport report;
  if (!opt.mean_of.empty()) {
    std::size_t n = 0;
    std::vector<MetricsReport> folds;
    for (const auto& f : opt.mean_of) folds.push_back(parse_metrics_csv(f, n, header));
    report = kfold_mean(folds);
  } else {
    if (opt.gt.empty() || opt.pred.empty() || opt.classes == 0) {
      throw Error(ErrorKind::configuration, "metrics needs --gt, --pred and --classes");
    }
    std::vector<std::uint8_t> mapping;
    if (!opt.grouping.empty()) {
      for (const auto& g : split(opt.grouping, ',')) {
        const int v = std::stoi(g);
        if (v < 0 || static_cast<std::size_t>(v) > opt.classes) {
          throw Error(ErrorKind::configuration, "group id " + g + " outside 0.." + std::to_string(opt.classes));
        }
        mapping.push_back(static_cast<std::uint8_t>(v));
      }
      if (mapping.empty() || mapping[0] != 0) throw Error(ErrorKind::configuration, "grouping must map 0 to 0");
    }
    std::vector<std::pair<fs::path, fs::path>> pairs;
    std::error_code ec;
    if (fs::is_directory(opt.gt, ec)) {
      for (const auto& g : list_files(opt.gt, ".png")) {
        const fs::path p = fs::path(opt.pred) / fs::relative(g, opt.gt);
        if (!fs::exists(p)) throw Error(ErrorKind::io, p.string() + ": missing prediction");
        pairs.emplace_back(g, p);
      }
    } else {
      pairs.emplace_back(opt.gt, opt.pred);
    }
    ConfusionMatrix total(opt.classes);
    for (const auto& [g, p] : pairs) {
      LabelMap gt = io::read_label_png(g);
      if (!mapping.empty()) gt = apply_grouping(gt, mapping);
      total += confusion(gt, io::read_label_png(p), opt.classes);
    }
    report = aggregate(total);
    auto names = default_class_names(opt.classes);
    if (!opt.class_names.empty()) {
      names = split(opt.class_names, ',');
      if (names.size() != opt.classes) {
        throw Error(ErrorKind::configuration, "--class-names needs " + std::to_string(opt.classes) + " names");
      }
    }
    header = metrics_csv_header(names);
  }
  const std::string csv = header + '\n' + metrics_csv_row(report) + '\n';
  std::cout << csv;
  if (!opt.csv.empty()) write_text(opt.csv, csv);
  return kOk;
}

int run_bench(const BenchOptions& opt) {
  PipelineConfig cfg;
  RawFrame raw;
  if (opt.raw.empty()) {
    SyntheticRig rig = make_synthetic_rig(2045, 1080, 1);
    cfg = std::move(rig.cfg);
    raw = std::move(rig.raw);
    spdlog::info("benchmarking a synthetic 2045x1080 frame");
  } else {
    if (opt.config.empty()) throw Error(ErrorKind::configuration, "--raw needs --config");
    cfg = io::load_pipeline_config(opt.config);
    raw = io::read_raw(opt.raw);
  }
  cfg.enable_illuminant_scaling = opt.scale;
  cfg.enable_pixel_norm = opt.pixel_norm;
  cfg.spatial_filter = filter_option(opt.filter);

  const BenchResult result = run_bench(raw, cfg, opt.reps, opt.warmup, opt.workers);
  std::cout << result.to_text();
  if (!opt.csv.empty()) {
    std::ostringstream os;
    os << "stage,mean_us\n";
    char buf[64];
    for (const auto& s : result.stage_mean_us) {
      std::snprintf(buf, sizeof buf, "%.1f", s.microseconds);
      os << s.stage << ',' << buf << '\n';
    }
    std::snprintf(buf, sizeof buf, "%.3f", result.median_frame_ms);
    os << "median_frame_ms," << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.2f", result.batch_fps);
    os << "batch_fps," << buf << '\n';
    write_text(opt.csv, os.str());
  }
  if (!opt.out_cube.empty()) io::write_envi(opt.out_cube, result.last_cube, cfg.layout.band_centers_nm());

  int code = kOk;
  if (opt.max_frame_ms > 0.0 && result.median_frame_ms > opt.max_frame_ms) {
    std::cerr << "[bench] median frame " << result.median_frame_ms << " ms exceeds " << opt.max_frame_ms << " ms\n";
    code = kValidationError;
  }
  if (!opt.baseline.empty()) {
    std::istringstream is(io::detail::read_file(opt.baseline));
    double baseline_ms = 0.0;
    if (!(is >> baseline_ms) || baseline_ms <= 0.0) {
      throw Error(ErrorKind::schema, opt.baseline + ": expected a positive frame time in ms");
    }
    const double limit = baseline_ms * (1.0 + opt.tolerance);
    if (result.median_frame_ms > limit) {
      std::cerr << "[bench] median frame " << result.median_frame_ms << " ms exceeds baseline " << baseline_ms
                << " ms +" << opt.tolerance * 100.0 << "%\n";
      code = kValidationError;
    } else {
      spdlog::info("within baseline: {:.2f} ms <= {:.2f} ms", result.median_frame_ms, limit);
    }
  }
  return code;
}

int run_manifest(const ManifestOptions& opt) {
  std::vector<std::size_t> channels;
  for (const auto& c : split(opt.channels, ',')) {
    try {
      const long v = std::stol(c);
      if (v <= 0) throw std::out_of_range(c);
      channels.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw Error(ErrorKind::configuration, "bad channel count '" + c + "'");
    }
  }
  const auto manifest = eca::build_attention_manifest(channels, opt.gamma, opt.b);
  std::cout << manifest.to_text();
  if (!opt.csv.empty()) write_text(opt.csv, manifest.to_csv());
  return kOk;
}

}  // namespace hsicube::cli
