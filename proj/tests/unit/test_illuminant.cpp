#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hsicube/illuminant.hpp"
#include "hsicube/stages.hpp"

using namespace hsicube;

namespace {

std::array<double, kBands> white_spectrum() {
  std::array<double, kBands> w{};
  for (std::size_t b = 0; b < kBands; ++b) w[b] = 2000.0 + 60.0 * static_cast<double>(b) - 2.0 * static_cast<double>(b * b);
  return w;
}

WhiteReference white_ref() { return WhiteReference::with_spectrum(RealFrame(5, 5, 1.0f), white_spectrum()); }

std::array<double, kBands> scaled_white(double k) {
  auto w = white_spectrum();
  for (double& v : w) v *= k;
  return w;
}

HsiCube patch_scene(double background, std::size_t row, std::size_t col, std::size_t size, double albedo,
                    std::size_t h = 20, std::size_t w = 24) {
  HsiCube cube(h, w, static_cast<float>(background));
  for (std::size_t i = row; i < row + size; ++i)
    for (std::size_t j = col; j < col + size; ++j)
      for (std::size_t b = 0; b < kBands; ++b) cube(i, j, b) = static_cast<float>(albedo);
  return cube;
}

void plant_emitter(HsiCube& cube, std::size_t row, std::size_t col, std::size_t size, std::size_t band, double peak) {
  for (std::size_t i = row; i < row + size; ++i)
    for (std::size_t j = col; j < col + size; ++j) {
      for (std::size_t b = 0; b < kBands; ++b) cube(i, j, b) = 0.2f;
      cube(i, j, band) = static_cast<float>(peak);
    }
}

}  // namespace

TEST(IsArtificial, ScaledWhiteIsNatural) {
  const auto v = is_artificial(scaled_white(0.6), white_spectrum(), {});
  EXPECT_FALSE(v.artificial);
  EXPECT_EQ(v.reason, RejectReason::none);
}

TEST(IsArtificial, SingleBandPeakIsEmitter) {
  auto s = scaled_white(0.1);
  s[7] = 10.0 * s[7];
  // white-normalised: 24 bands at 0.1, one at 1.0 -> peak/mean = 1 / (3.4 / 25)
  const double ratio = 1.0 / (3.4 / 25.0);
  ASSERT_GT(ratio, 2.5);
  const auto v = is_artificial(s, white_spectrum(), {});
  EXPECT_TRUE(v.artificial);
  EXPECT_EQ(v.reason, RejectReason::emitter_shape);
}

TEST(IsArtificial, SaturationComesFirst) {
  const auto v = is_artificial(white_spectrum(), white_spectrum(), {}, 5);
  EXPECT_TRUE(v.artificial);
  EXPECT_EQ(v.reason, RejectReason::saturation);
  EXPECT_FALSE(is_artificial(white_spectrum(), white_spectrum(), {}, 2).artificial);
  EXPECT_TRUE(is_artificial(white_spectrum(), white_spectrum(), {}, 3).artificial);
}

TEST(IsArtificial, LowSimilarity) {
  // A ramp across the bands has a modest peak/mean but points away from the
  // white spectrum.
  std::array<double, kBands> s{};
  const auto w = white_spectrum();
  for (std::size_t b = 0; b < kBands; ++b) s[b] = w[b] * (b < 12 ? 0.02 : 0.5);
  double dot = 0, ns = 0, nw = 0, peak = 0, mean = 0;
  for (std::size_t b = 0; b < kBands; ++b) {
    dot += s[b] * w[b];
    ns += s[b] * s[b];
    nw += w[b] * w[b];
    peak = std::max(peak, s[b] / w[b]);
    mean += s[b] / w[b] / 25.0;
  }
  ASSERT_LT(peak / mean, 2.5);
  ASSERT_LT(dot / std::sqrt(ns * nw), 0.90);
  const auto v = is_artificial(s, w, {});
  EXPECT_TRUE(v.artificial);
  EXPECT_EQ(v.reason, RejectReason::low_similarity);
}

TEST(IsArtificial, ZeroSpectrumRejected) {
  std::array<double, kBands> zero{};
  EXPECT_TRUE(is_artificial(zero, white_spectrum(), {}).artificial);
}

TEST(IsArtificial, ThresholdsConfigurable) {
  auto s = scaled_white(0.1);
  s[7] = 10.0 * s[7];
  RejectionParams loose;
  loose.peak_ratio = 10.0;
  loose.cos_min = 0.0;
  EXPECT_FALSE(is_artificial(s, white_spectrum(), loose).artificial);
}

TEST(FindMaxAlbedo, PlantedPatch) {
  const HsiCube cube = patch_scene(0.2, 5, 6, 5, 0.6);
  const auto r = find_max_albedo(cube, white_ref());
  EXPECT_GE(r.chosen.row, 5u);
  EXPECT_LT(r.chosen.row, 10u);
  EXPECT_GE(r.chosen.col, 6u);
  EXPECT_LT(r.chosen.col, 11u);
  EXPECT_NEAR(r.scale, 1.0 / 0.6, 1e-6);
  EXPECT_NEAR(r.scale, 1.667, 1e-3);
  EXPECT_FALSE(r.chosen.rejected);
  EXPECT_EQ(r.rejected_count, 0u);
}

TEST(FindMaxAlbedo, BrighterEmitterRejected) {
  HsiCube cube = patch_scene(0.2, 5, 6, 5, 0.6);
  plant_emitter(cube, 14, 16, 3, 9, 12.0);
  const auto r = find_max_albedo(cube, white_ref());
  EXPECT_GE(r.chosen.row, 5u);
  EXPECT_LT(r.chosen.row, 10u);
  EXPECT_NEAR(r.scale, 1.0 / 0.6, 1e-6);
  EXPECT_GT(r.rejected_count, 0u);
  EXPECT_EQ(r.candidates_examined, r.rejected_count + 1);
}

TEST(FindMaxAlbedo, AllOnesPicksFirstPixel) {
  const auto r = find_max_albedo(HsiCube(4, 4, 1.0f), white_ref());
  EXPECT_EQ(r.scale, 1.0);
  EXPECT_EQ(r.chosen.row, 0u);
  EXPECT_EQ(r.chosen.col, 0u);
  EXPECT_EQ(r.candidates_examined, 1u);
}

TEST(FindMaxAlbedo, SaturatedPixelsSkipped) {
  const HsiCube cube = patch_scene(0.2, 5, 6, 5, 0.6);
  Frame<std::uint8_t> sat(cube.width(), cube.height(), 0);
  for (std::size_t i = 5; i < 10; ++i)
    for (std::size_t j = 6; j < 11; ++j) sat(i, j) = 4;
  const auto r = find_max_albedo(cube, white_ref(), {}, &sat);
  EXPECT_EQ(r.rejected_count, 25u);
  EXPECT_NEAR(r.scale, 1.0 / 0.2, 1e-5);
}

TEST(FindMaxAlbedo, TotalRejectionIsEstimationError) {
  HsiCube cube(3, 3);
  plant_emitter(cube, 0, 0, 3, 4, 2.0);
  try {
    find_max_albedo(cube, white_ref());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::estimation);
  }
  const auto r = find_max_albedo_or_fallback(cube, white_ref());
  EXPECT_TRUE(r.fallback);
  EXPECT_EQ(r.scale, 1.0);
  EXPECT_EQ(r.rejected_count, 9u);
}

TEST(FindMaxAlbedo, MedianResistsIsolatedHotPixel) {
  // A lone bright pixel outranks the patch on raw broadband, but its 3x3
  // median is background, so the patch sets the scale.
  HsiCube cube = patch_scene(0.2, 5, 6, 5, 0.6);
  for (std::size_t b = 0; b < kBands; ++b) cube(15, 3, b) = 0.9f;
  const auto r = find_max_albedo(cube, white_ref());
  EXPECT_NEAR(r.scale, 1.0 / 0.6, 1e-6);
}

TEST(FindMaxAlbedo, EmitterNeighboursDoNotLiftNaturalPixels) {
  // Background column between two emitters: six of its nine neighbours are
  // emitter pixels, which must not enter its median.
  HsiCube cube = patch_scene(0.2, 2, 2, 5, 0.6);
  plant_emitter(cube, 10, 5, 3, 4, 12.0);
  plant_emitter(cube, 10, 9, 3, 17, 12.0);
  const auto r = find_max_albedo(cube, white_ref());
  EXPECT_GE(r.chosen.row, 2u);
  EXPECT_LT(r.chosen.row, 7u);
  EXPECT_NEAR(r.scale, 1.0 / 0.6, 1e-6);
}

TEST(ClassifyPixels, MatchesPerPixelVerdicts) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  HsiCube cube(9, 11);
  for (float& v : cube.values()) v = static_cast<float>(0.1 + 0.8 * u(rng));
  plant_emitter(cube, 1, 1, 3, 5, 8.0);
  for (std::size_t b = 0; b < kBands; ++b) cube(7, 9, b) = 0.0f;
  Frame<std::uint8_t> sat(11, 9);
  sat(4, 4) = 3;
  sat(4, 5) = 2;
  const auto white = white_spectrum();
  const RejectionParams params;
  const auto verdicts = detail::classify_pixels(cube, white, params, &sat);
  std::array<double, kBands> irr{};
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 11; ++j) {
      for (std::size_t b = 0; b < kBands; ++b) irr[b] = cube(i, j, b) * white[b];
      const auto v = is_artificial(irr, white, params, sat(i, j));
      EXPECT_EQ(verdicts[i * 11 + j].artificial, v.artificial) << i << "," << j;
      EXPECT_EQ(verdicts[i * 11 + j].reason, v.reason) << i << "," << j;
    }
  EXPECT_EQ(verdicts[4 * 11 + 4].reason, RejectReason::saturation);
  EXPECT_EQ(verdicts[1 * 11 + 1].reason, RejectReason::emitter_shape);
  EXPECT_EQ(verdicts[7 * 11 + 9].reason, RejectReason::low_similarity);
}

TEST(Median3x3, KeepMaskAveragesMiddlePair) {
  // 3x3 map, centre window holds every pixel; keep only four of them.
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::vector<std::uint8_t> keep{1, 0, 1, 0, 0, 0, 1, 0, 1};
  EXPECT_EQ(detail::median3x3(v, 3, 3)[4], 5.0);
  EXPECT_EQ(detail::median3x3(v, 3, 3, &keep)[4], 5.0);  // (3 + 7) / 2
  const std::vector<std::uint8_t> none(9, 0);
  EXPECT_EQ(detail::median3x3(v, 3, 3, &none)[4], 5.0);
  const std::vector<std::uint8_t> three{1, 1, 0, 0, 0, 0, 0, 0, 1};
  EXPECT_EQ(detail::median3x3(v, 3, 3, &three)[4], 2.0);
}

TEST(FindMaxAlbedo, ChosenInsideHighestPlateauWhenNoiseFree) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    HsiCube cube(16, 16);
    for (std::size_t i = 0; i < 16; ++i)
      for (std::size_t j = 0; j < 16; ++j) {
        const auto v = static_cast<float>(0.1 + 0.3 * u(rng));
        for (std::size_t b = 0; b < kBands; ++b) cube(i, j, b) = v;
      }
    const auto r0 = static_cast<std::size_t>(u(rng) * 12), c0 = static_cast<std::size_t>(u(rng) * 12);
    for (std::size_t i = r0; i < r0 + 4; ++i)
      for (std::size_t j = c0; j < c0 + 4; ++j)
        for (std::size_t b = 0; b < kBands; ++b) cube(i, j, b) = 0.8f;
    const auto r = find_max_albedo(cube, white_ref());
    EXPECT_GE(r.chosen.row, r0);
    EXPECT_LT(r.chosen.row, r0 + 4);
    EXPECT_GE(r.chosen.col, c0);
    EXPECT_LT(r.chosen.col, c0 + 4);
    EXPECT_EQ(r.chosen.broadband, cube.broadband(r.chosen.row, r.chosen.col));
  }
}

TEST(FindMaxAlbedo, ScaleInvariantChoice) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    HsiCube cube(12, 14);
    for (std::size_t i = 0; i < 12; ++i)
      for (std::size_t j = 0; j < 14; ++j) {
        const double level = 0.05 + 0.5 * u(rng);
        for (std::size_t b = 0; b < kBands; ++b) cube(i, j, b) = static_cast<float>(level * (0.95 + 0.1 * u(rng)));
      }
    plant_emitter(cube, 2, 2, 2, static_cast<std::size_t>(u(rng) * 25), 2.0);
    const auto base = find_max_albedo(cube, white_ref());
    for (double c : {0.5, 2.0, 10.0}) {
      HsiCube scaled = cube;
      for (float& v : scaled.values()) v = static_cast<float>(v * c);
      const auto r = find_max_albedo(scaled, white_ref());
      EXPECT_EQ(r.chosen.row, base.chosen.row) << "c=" << c;
      EXPECT_EQ(r.chosen.col, base.chosen.col) << "c=" << c;
    }
  }
}

TEST(FindMaxAlbedo, BroadbandIsSpectrumMean) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 0.6);
  HsiCube cube(6, 6);
  for (float& v : cube.values()) v = static_cast<float>(u(rng));
  const auto r = find_max_albedo_or_fallback(cube, white_ref(), {99, 100.0, -1.0});
  double mean = 0.0;
  for (float v : r.chosen.spectrum) mean += v;
  EXPECT_NEAR(r.chosen.broadband, mean / 25.0, 1e-12);
}

TEST(ApplyScaling, ChosenBecomesUnit) {
  const HsiCube cube = patch_scene(0.2, 5, 6, 5, 0.6);
  const auto report = find_max_albedo(cube, white_ref());
  const HsiCube out = apply_scaling(cube, report);
  EXPECT_NEAR(out.broadband(report.chosen.row, report.chosen.col), 1.0, 1e-6);
}

TEST(ApplyScaling, UnitScaleIsIdentity) {
  HsiCube cube(3, 3, 0.37f);
  cube(1, 1, 4) = 1.3f;
  ScalingReport report;
  report.scale = 1.0;
  EXPECT_EQ(apply_scaling(cube, report), cube);
}

TEST(ApplyScaling, EmitterClippedAfterScaling) {
  HsiCube cube(1, 1, 0.5f);
  cube(0, 0, 3) = 0.65f;
  ScalingReport report;
  report.scale = 2.0;
  const HsiCube out = clip_unit(apply_scaling(cube, report));
  EXPECT_EQ(out(0, 0, 3), 1.0f);
}

TEST(ApplyScaling, ClipNeverAddsValuesAboveOne) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    HsiCube cube(4, 4);
    for (float& v : cube.values()) v = static_cast<float>(u(rng));
    ScalingReport report;
    report.scale = 0.5 + u(rng);
    const HsiCube out = clip_unit(apply_scaling(cube, report));
    for (float v : out.values()) EXPECT_LE(v, 1.0f);
  }
}

TEST(ApplyScaling, RejectsNonPositiveScale) {
  ScalingReport report;
  report.scale = 0.0;
  EXPECT_THROW(apply_scaling(HsiCube(1, 1), report), Error);
}
