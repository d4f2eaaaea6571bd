#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "hsicube/dataset_stats.hpp"

using namespace hsicube;

namespace {

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(HSICUBE_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The published "%" row of a table file.
std::vector<double> published_percent(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  std::vector<double> out;
  while (std::getline(is, line)) {
    if (line.rfind("%,", 0) != 0) continue;
    std::istringstream ls(line.substr(2));
    std::string cell;
    std::getline(ls, cell, ',');  // Total
    while (std::getline(ls, cell, ',')) out.push_back(std::stod(cell));
  }
  return out;
}

}  // namespace

TEST(Frequencies, HandCount) {
  const LabelMap m(2, 2, {1, 1, 2, 0});
  const auto t = class_frequencies(std::span<const LabelMap>(&m, 1));
  EXPECT_EQ(t.total(), 3u);
  EXPECT_EQ(t.count(1), 2u);
  EXPECT_EQ(t.count(2), 1u);
  EXPECT_EQ(format_percent(t.percent_centi(1)), "66.67");
  EXPECT_EQ(format_percent(t.percent_centi(2)), "33.33");
}

TEST(Frequencies, EmptyCollection) {
  const auto t = class_frequencies({});
  EXPECT_EQ(t.total(), 0u);
  EXPECT_EQ(t.percent_centi(1), 0u);
}

TEST(Frequencies, PublishedTablePercentages) {
  for (const char* name : {"hsidrive_v20_counts.csv", "hsidrive_v21_counts.csv"}) {
    const std::string csv = read_data(name);
    const auto table = parse_frequency_table_csv(csv);
    const auto published = published_percent(csv);
    ASSERT_EQ(published.size(), kDatasetClasses) << name;
    for (std::size_t c = 1; c <= kDatasetClasses; ++c) {
      EXPECT_NEAR(table.percent(c), published[c - 1], 0.01 + 1e-9) << name << " class " << c;
      // oracle: plain double division, then rounding half-up
      const double pct = 100.0 * static_cast<double>(table.count(c)) / static_cast<double>(table.total());
      EXPECT_NEAR(table.percent(c), std::floor(pct * 100.0 + 0.5) / 100.0, 1e-9);
    }
  }
}

TEST(Frequencies, RoadAndWaterExamples) {
  const auto t = parse_frequency_table_csv(read_data("hsidrive_v21_counts.csv"));
  EXPECT_EQ(t.total(), 45055512u);
  EXPECT_EQ(format_percent(t.percent_centi(1)), "59.38");
  EXPECT_EQ(format_percent(t.percent_centi(8)), "0.02");
}

TEST(Frequencies, HalfUpRounding) {
  // one count out of N gives 1/N percent, rounded half-up to hundredths
  std::array<std::uint64_t, kDatasetClasses> counts{};
  counts[0] = 1;
  counts[1] = 1999;
  EXPECT_EQ(format_percent(ClassFrequencyTable::from_counts(counts).percent_centi(1)), "0.05");
  counts[0] = 1;
  counts[1] = 15;
  EXPECT_EQ(format_percent(ClassFrequencyTable::from_counts(counts).percent_centi(1)), "6.25");
  counts[0] = 1;
  counts[1] = 79999;  // 0.00125 % -> 0.00
  EXPECT_EQ(format_percent(ClassFrequencyTable::from_counts(counts).percent_centi(1)), "0.00");
  counts[0] = 1;
  counts[1] = 39999;  // 0.0025 % -> 0.00 (half of a hundredth is 0.005)
  EXPECT_EQ(format_percent(ClassFrequencyTable::from_counts(counts).percent_centi(1)), "0.00");
  counts[0] = 1;
  counts[1] = 19999;  // 0.005 % -> 0.01 half-up
  EXPECT_EQ(format_percent(ClassFrequencyTable::from_counts(counts).percent_centi(1)), "0.01");
}

TEST(Frequencies, PercentagesSumToHundred) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::uint64_t> u(0, 5'000'000);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<std::uint64_t, kDatasetClasses> counts{};
    for (auto& c : counts) c = u(rng);
    const auto t = ClassFrequencyTable::from_counts(counts);
    if (t.total() == 0) continue;
    std::uint64_t sum = 0;
    for (std::size_t c = 1; c <= kDatasetClasses; ++c) sum += t.percent_centi(c);
    EXPECT_LE(std::llabs(static_cast<long long>(sum) - 10000), 5);
  }
}

TEST(Frequencies, Additivity) {
  std::mt19937_64 rng(32);
  std::uniform_int_distribution<int> lbl(0, 10);
  std::vector<LabelMap> maps;
  for (int k = 0; k < 6; ++k) {
    std::vector<std::uint8_t> v(7 * 9);
    for (auto& x : v) x = static_cast<std::uint8_t>(lbl(rng));
    maps.emplace_back(7, 9, v);
  }
  auto sum = ClassFrequencyTable::from_counts({});
  for (const auto& m : maps) sum += class_frequencies(std::span<const LabelMap>(&m, 1));
  EXPECT_EQ(class_frequencies(maps), sum);
}

TEST(Diff, PublishedDelta) {
  const auto v20 = parse_frequency_table_csv(read_data("hsidrive_v20_counts.csv"));
  const auto v21 = parse_frequency_table_csv(read_data("hsidrive_v21_counts.csv"));
  const auto d = diff_tables(v20, v21);
  EXPECT_EQ(d.total.absolute, 1108009);
  ASSERT_TRUE(d.total.relative_percent);
  EXPECT_NEAR(*d.total.relative_percent, 2.52, 0.005);
  EXPECT_EQ(d.classes[8].absolute, 119347);
  EXPECT_NEAR(*d.classes[8].relative_percent, 34.26, 0.005);
  EXPECT_EQ(d.classes[7].absolute, -1738);  // Water shrank
  const std::string csv = delta_csv(d);
  EXPECT_EQ(csv.substr(0, csv.find('\n', csv.find('\n') + 1) + 1),
            "class,absolute,relative_percent\nTotal,1108009,2.52\n");
}

TEST(Diff, IdenticalTablesZero) {
  const auto t = parse_frequency_table_csv(read_data("hsidrive_v21_counts.csv"));
  const auto d = diff_tables(t, t);
  EXPECT_EQ(d.total.absolute, 0);
  for (const auto& c : d.classes) {
    EXPECT_EQ(c.absolute, 0);
    EXPECT_EQ(*c.relative_percent, 0.0);
  }
}

TEST(Diff, SchemaMismatch) {
  auto cols = ClassFrequencyTable::default_columns();
  cols[3] = "Metal";
  const auto a = ClassFrequencyTable::from_counts({});
  const auto b = ClassFrequencyTable::from_counts({}, cols);
  try {
    diff_tables(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::schema);
  }
}

TEST(TableCsv, RoundTripAndHeader) {
  const auto t = parse_frequency_table_csv(read_data("hsidrive_v21_counts.csv"));
  const std::string csv = frequency_table_csv(t);
  EXPECT_EQ(csv, read_data("hsidrive_v21_counts.csv"));
  EXPECT_EQ(parse_frequency_table_csv(csv), t);
}

TEST(TableCsv, RejectsBadInput) {
  EXPECT_THROW(parse_frequency_table_csv(""), Error);
  EXPECT_THROW(parse_frequency_table_csv(",Total,a,b\nPixels,1,1,0\n"), Error);
  std::string bad = read_data("hsidrive_v21_counts.csv");
  bad.replace(bad.find("45055512"), 8, "45055513");
  EXPECT_THROW(parse_frequency_table_csv(bad), Error);
}
