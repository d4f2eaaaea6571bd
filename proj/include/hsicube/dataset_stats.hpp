#ifndef HSICUBE_DATASET_STATS_HPP
#define HSICUBE_DATASET_STATS_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hsicube/error.hpp"
#include "hsicube/metrics.hpp"

namespace hsicube {

inline constexpr std::size_t kDatasetClasses = 10;

/// Class id -> name, ids 1..10 in the published table column order.
struct ClassInfo {
  const char* name;
  const char* header;
};
inline constexpr std::array<ClassInfo, kDatasetClasses> kClasses{{
    {"Road", "Road"},
    {"Road Marks", "R.Marks"},
    {"Vegetation", "Veg."},
    {"Painted Metal", "Pain.Met."},
    {"Sky", "Sky"},
    {"Concrete", "Concrete"},
    {"Pedestrian", "Ped."},
    {"Water", "Water"},
    {"Unpainted Metal", "Unpain.Met."},
    {"Glass", "Glass"},
}};

/// Pixel totals per class with shares rounded half-up to hundredths of a percent.
class ClassFrequencyTable {
 public:
  ClassFrequencyTable() = default;

  static std::vector<std::string> default_columns() {
    std::vector<std::string> cols;
    for (const auto& c : kClasses) cols.emplace_back(c.header);
    return cols;
  }

  static ClassFrequencyTable from_counts(const std::array<std::uint64_t, kDatasetClasses>& counts,
                                         std::vector<std::string> columns = default_columns()) {
    if (columns.size() != kDatasetClasses) {
      throw Error(ErrorKind::schema, "frequency table needs exactly 10 class columns");
    }
    ClassFrequencyTable t;
    t.counts_ = counts;
    t.columns_ = std::move(columns);
    for (auto c : counts) t.total_ += c;
    return t;
  }

  const std::vector<std::string>& columns() const noexcept { return columns_; }

  const std::array<std::uint64_t, kDatasetClasses>& counts() const noexcept { return counts_; }
  std::uint64_t count(std::size_t class_id) const { return counts_.at(class_id - 1); }
  std::uint64_t total() const noexcept { return total_; }

  /// Share of class `class_id` in hundredths of a percent, rounded half-up
  /// (5938 means 59.38 %). Exact integer arithmetic.
  std::uint64_t percent_centi(std::size_t class_id) const {
    if (total_ == 0) return 0;
    return (20000 * count(class_id) + total_) / (2 * total_);
  }
  double percent(std::size_t class_id) const { return static_cast<double>(percent_centi(class_id)) / 100.0; }

  ClassFrequencyTable& operator+=(const ClassFrequencyTable& other) {
    if (other.columns_ != columns_) throw Error(ErrorKind::schema, "tables describe different class sets");
    for (std::size_t i = 0; i < kDatasetClasses; ++i) counts_[i] += other.counts_[i];
    total_ += other.total_;
    return *this;
  }

  friend bool operator==(const ClassFrequencyTable&, const ClassFrequencyTable&) = default;

 private:
  std::array<std::uint64_t, kDatasetClasses> counts_{};
  std::uint64_t total_ = 0;
  std::vector<std::string> columns_ = default_columns();
};

inline ClassFrequencyTable class_frequencies(std::span<const LabelMap> maps) {
  std::array<std::uint64_t, kDatasetClasses + 1> hist{};
  for (const auto& m : maps) {
    for (std::uint8_t v : m.labels()) ++hist[v];
  }
  std::array<std::uint64_t, kDatasetClasses> counts{};
  for (std::size_t c = 1; c <= kDatasetClasses; ++c) counts[c - 1] = hist[c];
  return ClassFrequencyTable::from_counts(counts);
}

struct CountDelta {
  std::string name;
  std::int64_t absolute = 0;
  std::optional<double> relative_percent;  ///< none when the old count is zero
};

struct TableDelta {
  std::vector<CountDelta> classes;
  CountDelta total;
};

namespace detail {
inline CountDelta make_delta(std::string name, std::uint64_t old_count, std::uint64_t new_count) {
  CountDelta d;
  d.name = std::move(name);
  d.absolute = static_cast<std::int64_t>(new_count) - static_cast<std::int64_t>(old_count);
  if (old_count > 0) d.relative_percent = 100.0 * static_cast<double>(d.absolute) / static_cast<double>(old_count);
  return d;
}
}  // namespace detail

/// Per-class and total change from `older` to `newer`. Both tables must
/// describe the same class list.
inline TableDelta diff_tables(const ClassFrequencyTable& older, const ClassFrequencyTable& newer) {
  if (older.columns() != newer.columns()) {
    throw Error(ErrorKind::schema, "tables describe different class sets");
  }
  TableDelta delta;
  for (std::size_t c = 1; c <= kDatasetClasses; ++c) {
    delta.classes.push_back(detail::make_delta(older.columns()[c - 1], older.count(c), newer.count(c)));
  }
  delta.total = detail::make_delta("Total", older.total(), newer.total());
  return delta;
}

inline std::string format_percent(std::uint64_t centi) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%llu.%02llu", static_cast<unsigned long long>(centi / 100),
                static_cast<unsigned long long>(centi % 100));
  return buf;
}

/// Same columns as the published tables: Total, then the ten classes.
inline std::string frequency_table_csv(const ClassFrequencyTable& t) {
  std::ostringstream os;
  os << ",Total";
  for (const auto& c : t.columns()) os << ',' << c;
  os << "\nPixels," << t.total();
  for (std::size_t c = 1; c <= kDatasetClasses; ++c) os << ',' << t.count(c);
  os << "\n%,100";
  for (std::size_t c = 1; c <= kDatasetClasses; ++c) os << ',' << format_percent(t.percent_centi(c));
  os << '\n';
  return os.str();
}

inline std::string frequency_table_text(const ClassFrequencyTable& t) {
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-8s %12s", "", "Total");
  os << buf;
  for (const auto& c : t.columns()) {
    std::snprintf(buf, sizeof buf, " %12s", c.c_str());
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "\n%-8s %12llu", "Pixels", static_cast<unsigned long long>(t.total()));
  os << buf;
  for (std::size_t c = 1; c <= kDatasetClasses; ++c) {
    std::snprintf(buf, sizeof buf, " %12llu", static_cast<unsigned long long>(t.count(c)));
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "\n%-8s %12s", "%", "100");
  os << buf;
  for (std::size_t c = 1; c <= kDatasetClasses; ++c) {
    std::snprintf(buf, sizeof buf, " %12s", format_percent(t.percent_centi(c)).c_str());
    os << buf;
  }
  os << '\n';
  return os.str();
}

/// Reads back frequency_table_csv output (the "%" row is recomputed, not read).
inline ClassFrequencyTable parse_frequency_table_csv(const std::string& text) {
  std::istringstream is(text);
  std::string header, pixels;
  if (!std::getline(is, header) || !std::getline(is, pixels)) {
    throw Error(ErrorKind::schema, "frequency table needs a header and a Pixels row");
  }
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
  };
  const auto cols = split(header);
  const auto vals = split(pixels);
  if (cols.size() != kDatasetClasses + 2 || cols[1] != "Total" || vals.size() != cols.size() || vals[0] != "Pixels") {
    throw Error(ErrorKind::schema, "frequency table columns do not match ',Total,<10 classes>'");
  }
  std::array<std::uint64_t, kDatasetClasses> counts{};
  try {
    for (std::size_t c = 0; c < kDatasetClasses; ++c) counts[c] = std::stoull(vals[c + 2]);
    if (!vals[1].empty() && std::stoull(vals[1]) != std::accumulate(counts.begin(), counts.end(), std::uint64_t{0})) {
      throw Error(ErrorKind::schema, "frequency table Total does not equal the sum of its classes");
    }
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::schema, "non-numeric pixel count in frequency table");
  } catch (const std::out_of_range&) {
    throw Error(ErrorKind::schema, "pixel count out of range in frequency table");
  }
  return ClassFrequencyTable::from_counts(counts, std::vector<std::string>(cols.begin() + 2, cols.end()));
}

inline std::string delta_csv(const TableDelta& d) {
  std::ostringstream os;
  os << "class,absolute,relative_percent\n";
  char buf[32];
  auto row = [&](const CountDelta& c) {
    os << c.name << ',' << c.absolute << ',';
    if (c.relative_percent) {
      std::snprintf(buf, sizeof buf, "%.2f", *c.relative_percent);
      os << buf;
    } else {
      os << "NA";
    }
    os << '\n';
  };
  row(d.total);
  for (const auto& c : d.classes) row(c);
  return os.str();
}

}  // namespace hsicube

#endif  // HSICUBE_DATASET_STATS_HPP
