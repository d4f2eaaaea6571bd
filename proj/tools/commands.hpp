#ifndef HSICUBE_TOOLS_COMMANDS_HPP
#define HSICUBE_TOOLS_COMMANDS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hsicube::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kValidationError = 2,
  kEstimationFallback = 3,
};

struct ProcessOptions {
  std::string raw;
  std::string config;
  std::string out;
  bool scale = false;
  bool pixel_norm = false;
  std::string pixel_norm_kind = "l2";
  std::string band_norm;
  std::string band_norm_mode = "zscore";
  std::string filter;
  bool strict_scaling = false;
  std::size_t workers = 1;
};

struct SynthOptions {
  std::string scene;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

struct StatsOptions {
  std::vector<std::string> inputs;
  std::vector<std::string> diff;
  std::string csv;
};

struct MetricsOptions {
  std::string gt;
  std::string pred;
  std::size_t classes = 0;
  std::string grouping;
  std::string class_names;
  std::vector<std::string> mean_of;
  std::string csv;
};

struct BenchOptions {
  std::string raw;
  std::string config;
  std::size_t reps = 20;
  std::size_t warmup = 3;
  std::size_t workers = 1;
  bool scale = false;
  bool pixel_norm = false;
  std::string filter;
  std::string baseline;
  double tolerance = 0.30;
  double max_frame_ms = 0.0;
  std::string out_cube;
  std::string csv;
};

struct ManifestOptions {
  std::string channels;
  double gamma = 2.0;
  double b = 1.0;
  std::string csv;
};

int run_process(const ProcessOptions& opt);
int run_synth(const SynthOptions& opt);
int run_stats(const StatsOptions& opt);
int run_metrics(const MetricsOptions& opt);
int run_bench(const BenchOptions& opt);
int run_manifest(const ManifestOptions& opt);

}  // namespace hsicube::cli

#endif  // HSICUBE_TOOLS_COMMANDS_HPP
