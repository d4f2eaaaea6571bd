#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "hsicube/error.hpp"

namespace {

// HSICUBE_LOG: trace, debug, info, warn (default), error, off.
void configure_logging() {
  auto logger = spdlog::stderr_color_mt("hsicube");
  logger->set_pattern("%^%l%$: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("HSICUBE_LOG"); env && *env) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off") {
      spdlog::warn("unknown HSICUBE_LOG level '{}', keeping warn", env);
    } else {
      spdlog::set_level(level);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hsicube::cli;
  configure_logging();

  CLI::App app{"Hyperspectral snapshot-mosaic cube tools"};
  app.require_subcommand(1);

  ProcessOptions process;
  auto* p = app.add_subcommand("process", "raw frame(s) to reflectance cube(s)");
  p->add_option("--raw", process.raw, "raw frame, or a directory of .hsrw frames")->required();
  p->add_option("--config", process.config, "camera configuration")->required();
  p->add_option("--out", process.out, "output cube, or output directory in batch mode")->required();
  p->add_flag("--scale", process.scale, "illuminant intensity scaling");
  p->add_flag("--pixel-norm", process.pixel_norm, "per-pixel spectral normalization");
  p->add_option("--pixel-norm-kind", process.pixel_norm_kind, "l2 or sum")->capture_default_str();
  p->add_option("--band-norm", process.band_norm, "band statistics file");
  p->add_option("--band-norm-mode", process.band_norm_mode, "zscore or minmax")->capture_default_str();
  p->add_option("--filter", process.filter, "spatial filter kind:radius (box, gaussian)");
  p->add_flag("--strict-scaling", process.strict_scaling, "exit 3 if the scaling search falls back");
  p->add_option("--workers", process.workers, "parallel frames in batch mode")->check(CLI::PositiveNumber);

  SynthOptions synth;
  std::uint64_t seed = 0;
  auto* s = app.add_subcommand("synth", "render a scene spec into a raw frame and truth cube");
  s->add_option("--scene", synth.scene, "scene spec")->required();
  s->add_option("--config", synth.config, "camera configuration")->required();
  s->add_option("--out", synth.out, "output prefix")->required();
  auto* seed_opt = s->add_option("--seed", seed, "override the spec's seed");

  StatsOptions stats;
  auto* st = app.add_subcommand("stats", "class pixel counts of label maps");
  st->add_option("inputs", stats.inputs, "label PNGs or directories");
  st->add_option("--diff", stats.diff, "old.csv new.csv")->expected(2);
  st->add_option("--csv", stats.csv, "write the table as CSV");

  MetricsOptions metrics;
  auto* m = app.add_subcommand("metrics", "IoU, global and weighted accuracy");
  m->add_option("--gt", metrics.gt, "ground-truth PNG or directory");
  m->add_option("--pred", metrics.pred, "prediction PNG or directory");
  m->add_option("--classes", metrics.classes, "number of evaluated classes");
  m->add_option("--grouping", metrics.grouping, "comma list mapping fine id (from 0) to class id");
  m->add_option("--class-names", metrics.class_names, "comma list of column names");
  m->add_option("--mean-of", metrics.mean_of, "average metrics CSVs (k-fold)");
  m->add_option("--csv", metrics.csv, "also write the CSV to a file");

  BenchOptions bench;
  auto* b = app.add_subcommand("bench", "per-stage latency and throughput");
  b->add_option("--raw", bench.raw, "raw frame (default: synthetic 2045x1080)");
  b->add_option("--config", bench.config, "camera configuration");
  b->add_option("-n", bench.reps, "timed repetitions")->capture_default_str()->check(CLI::PositiveNumber);
  b->add_option("--warmup", bench.warmup, "untimed repetitions")->capture_default_str();
  b->add_option("--workers", bench.workers, "threads for the batch run")->check(CLI::PositiveNumber);
  b->add_flag("--scale", bench.scale, "illuminant intensity scaling");
  b->add_flag("--pixel-norm", bench.pixel_norm, "per-pixel spectral normalization");
  b->add_option("--filter", bench.filter, "spatial filter kind:radius");
  b->add_option("--baseline", bench.baseline, "file holding the recorded median frame time (ms)");
  b->add_option("--tolerance", bench.tolerance, "allowed slowdown over the baseline")->capture_default_str();
  b->add_option("--max-frame-ms", bench.max_frame_ms, "absolute limit on the median frame time");
  b->add_option("--out-cube", bench.out_cube, "write the last processed cube");
  b->add_option("--csv", bench.csv, "write stage means as CSV");

  ManifestOptions manifest;
  auto* mf = app.add_subcommand("manifest", "ECA block placement and kernel sizes");
  mf->add_option("--channels", manifest.channels, "comma list of per-stage channel counts")->required();
  mf->add_option("--gamma", manifest.gamma)->capture_default_str();
  mf->add_option("--b", manifest.b)->capture_default_str();
  mf->add_option("--csv", manifest.csv, "write the manifest as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidationError;
  }

  try {
    if (*p) return run_process(process);
    if (*s) {
      if (*seed_opt) synth.seed = seed;
      return run_synth(synth);
    }
    if (*st) return run_stats(stats);
    if (*m) return run_metrics(metrics);
    if (*b) return run_bench(bench);
    if (*mf) return run_manifest(manifest);
  } catch (const hsicube::Error& e) {
    std::cerr << e.what() << '\n';
    if (e.kind() == hsicube::ErrorKind::io) return kIoError;
    return kValidationError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kValidationError;
  }
  return kValidationError;
}
