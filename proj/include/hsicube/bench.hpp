#ifndef HSICUBE_BENCH_HPP
#define HSICUBE_BENCH_HPP

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hsicube/parallel.hpp"
#include "hsicube/pipeline.hpp"

namespace hsicube {

struct BenchResult {
  std::size_t repetitions = 0;
  std::size_t workers = 1;
  std::vector<StageTiming> stage_mean_us;  ///< single-threaded, execution order
  double median_frame_ms = 0.0;            ///< single-threaded
  double single_fps = 0.0;
  double batch_fps = 0.0;                  ///< `workers` frames in flight
  HsiCube last_cube;                       ///< output of the final repetition

  std::string to_text() const {
    std::ostringstream os;
    char buf[96];
    std::snprintf(buf, sizeof buf, "repetitions  %zu\nworkers      %zu\n", repetitions, workers);
    os << buf;
    for (const auto& s : stage_mean_us) {
      std::snprintf(buf, sizeof buf, "%-12s %12.1f us\n", s.stage.c_str(), s.microseconds);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, "median frame %12.2f ms\nsingle fps   %12.2f\nbatch fps    %12.2f\n",
                  median_frame_ms, single_fps, batch_fps);
    os << buf;
    return os.str();
  }
};

/// Times process_frame: `warmup` untimed runs, `reps` single-threaded timed
/// runs (per-stage means, median frame time), then `reps` frames spread over
/// `workers` threads for throughput.
inline BenchResult run_bench(const RawFrame& raw, const PipelineConfig& cfg, std::size_t reps,
                             std::size_t warmup = 3, std::size_t workers = 1) {
  using clock = std::chrono::steady_clock;
  BenchResult result;
  result.repetitions = std::max<std::size_t>(1, reps);
  result.workers = std::max<std::size_t>(1, workers);
  for (std::size_t i = 0; i < warmup; ++i) (void)process_frame(raw, cfg);

  std::vector<double> frame_ms;
  std::vector<std::string> order;
  std::map<std::string, double> stage_sum;
  for (std::size_t i = 0; i < result.repetitions; ++i) {
    const auto t0 = clock::now();
    auto out = process_frame(raw, cfg);
    frame_ms.push_back(std::chrono::duration<double, std::milli>(clock::now() - t0).count());
    for (const auto& s : out.trace.stages()) {
      if (!stage_sum.count(s.stage)) order.push_back(s.stage);
      stage_sum[s.stage] += s.microseconds;
    }
    if (i + 1 == result.repetitions) result.last_cube = std::move(out.cube);
  }
  for (const auto& name : order) {
    result.stage_mean_us.push_back({name, stage_sum[name] / static_cast<double>(result.repetitions)});
  }
  std::sort(frame_ms.begin(), frame_ms.end());
  result.median_frame_ms = frame_ms[frame_ms.size() / 2];
  result.single_fps = 1000.0 / result.median_frame_ms;

  const auto t0 = clock::now();
  parallel_for(result.repetitions, result.workers, [&](std::size_t) { (void)process_frame(raw, cfg); });
  const double wall_s = std::chrono::duration<double>(clock::now() - t0).count();
  result.batch_fps = static_cast<double>(result.repetitions) / wall_s;
  return result;
}

}  // namespace hsicube

#endif  // HSICUBE_BENCH_HPP
