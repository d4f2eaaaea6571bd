#ifndef HSICUBE_IO_TEXT_HPP
#define HSICUBE_IO_TEXT_HPP

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "hsicube/attention.hpp"
#include "hsicube/error.hpp"
#include "hsicube/illuminant.hpp"
#include "hsicube/io/raw_io.hpp"
#include "hsicube/normalization.hpp"

// Small text formats: band statistics CSV, ECA kernel files, scaling report rows.

namespace hsicube::io {

/// `band,mean,std,min,max`, header line then one row per band.
inline std::string format_band_stats(const BandStats& s) {
  std::ostringstream os;
  os << "band,mean,std,min,max\n";
  char buf[160];
  for (std::size_t b = 0; b < kBands; ++b) {
    std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g,%.9g\n", b, s.mean[b], s.std[b], s.min[b], s.max[b]);
    os << buf;
  }
  return os.str();
}

inline BandStats parse_band_stats(const std::string& text, BandStatsKind kind = BandStatsKind::zscore) {
  BandStats s;
  s.kind = kind;
  std::istringstream is(text);
  std::string line;
  std::array<bool, kBands> seen{};
  while (std::getline(is, line)) {
    if (line.empty() || line.rfind("band", 0) == 0) continue;
    std::size_t band = 0;
    double mean = 0, sd = 0, lo = 0, hi = 0;
    if (std::sscanf(line.c_str(), "%zu,%lf,%lf,%lf,%lf", &band, &mean, &sd, &lo, &hi) != 5 || band >= kBands) {
      throw Error(ErrorKind::statistics, "bad band statistics row '" + line + "'");
    }
    s.mean[band] = mean;
    s.std[band] = sd;
    s.min[band] = lo;
    s.max[band] = hi;
    seen[band] = true;
  }
  for (std::size_t b = 0; b < kBands; ++b) {
    if (!seen[b]) throw Error(ErrorKind::statistics, "band statistics missing band " + std::to_string(b));
  }
  return s;
}

inline BandStats read_band_stats(const fs::path& path, BandStatsKind kind = BandStatsKind::zscore) {
  return parse_band_stats(detail::read_file(path), kind);
}

/// One coefficient per line; blank lines and '#' comments are ignored.
inline std::vector<double> parse_kernel(const std::string& text) {
  std::vector<double> kernel;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      kernel.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw Error(ErrorKind::configuration, "bad kernel coefficient '" + line + "'");
    }
  }
  return kernel;
}

inline std::string format_kernel(const std::vector<double>& kernel) {
  std::string out;
  char buf[64];
  for (double w : kernel) {
    std::snprintf(buf, sizeof buf, "%.17g\n", w);
    out += buf;
  }
  return out;
}

inline constexpr const char* kScalingCsvHeader =
    "frame_id,row,col,scale,candidates_examined,rejected_count,fallback_flag";

inline std::string scaling_csv_row(const std::string& frame_id, const ScalingReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.9g,%zu,%zu,%d", frame_id.c_str(), r.chosen.row, r.chosen.col,
                r.scale, r.candidates_examined, r.rejected_count, r.fallback ? 1 : 0);
  return buf;
}

}  // namespace hsicube::io

#endif  // HSICUBE_IO_TEXT_HPP
