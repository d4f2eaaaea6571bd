#include <gtest/gtest.h>

#include <cmath>

#include "hsicube/synth.hpp"

using namespace hsicube;

TEST(SceneSpec, ParsesDirectives) {
  const auto spec = parse_scene_spec(
      "seed 7\n"
      "noise 0.01   # small\n"
      "\n"
      "flat 0.3\n"
      "blob 5 5 2 0.4\n"
      "patch 1 2 3 4 0.9\n"
      "emitter 3 3 2 12 1.5\n");
  EXPECT_EQ(spec.seed, 7u);
  EXPECT_DOUBLE_EQ(spec.noise, 0.01);
  ASSERT_EQ(spec.elements.size(), 4u);
  EXPECT_EQ(spec.elements[1].kind, SceneElement::Kind::blob);
  EXPECT_EQ(spec.elements[1].args.size(), 5u);  // spectral tilt defaults to 0
  EXPECT_EQ(spec.elements[3].args[3], 12.0);
}

TEST(SceneSpec, Errors) {
  for (const char* bad : {"wobble 1\n", "flat\n", "flat 1 2\n", "flat x\n", "blob 1 1 0 0.5\n",
                          "emitter 1 1 1 25 1\n", "noise -1\n"}) {
    try {
      parse_scene_spec(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::configuration) << bad;
    }
  }
}

TEST(SceneRender, FlatPatchAndEmitter) {
  const auto spec = parse_scene_spec("flat 0.4\npatch 2 3 2 2 0.8\nemitter 8 8 1 6 2.0\n");
  const HsiCube cube = render_scene(spec, 12, 12);
  EXPECT_FLOAT_EQ(cube(0, 0, 0), 0.4f);
  EXPECT_FLOAT_EQ(cube(2, 3, 10), 0.8f);
  EXPECT_FLOAT_EQ(cube(3, 4, 24), 0.8f);
  EXPECT_FLOAT_EQ(cube(8, 8, 6), 2.0f);
  EXPECT_LT(cube(8, 8, 20), 1.0f);
}

TEST(SceneRender, NoiseIsSeeded) {
  const auto a = render_scene(parse_scene_spec("seed 3\nnoise 0.02\nflat 0.5\n"), 6, 6);
  const auto b = render_scene(parse_scene_spec("seed 3\nnoise 0.02\nflat 0.5\n"), 6, 6);
  const auto c = render_scene(parse_scene_spec("seed 4\nnoise 0.02\nflat 0.5\n"), 6, 6);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(EmitterSpectrum, PeakAndShoulders) {
  const Spectrum s = emitter_spectrum(0, 1.0, 0.1);
  EXPECT_FLOAT_EQ(s[0], 1.0f);
  EXPECT_FLOAT_EQ(s[1], 0.37f);
  EXPECT_FLOAT_EQ(s[2], 0.1f);
}

TEST(SensorFrame, FlatReflectanceClosedForm) {
  const MosaicLayout layout;
  const WhiteReference white = make_white_reference(layout, 50, 50, 64);
  const RawFrame raw = synthesize_sensor_frame(HsiCube(10, 10, 0.6f), layout, white, 64, {0, 0, 50, 50});
  for (std::size_t r = 0; r < 50; ++r)
    for (std::size_t c = 0; c < 50; ++c) {
      const double expected = std::round(64.0 + 0.6 * (white.frame()(r, c) - 64.0));
      EXPECT_NEAR(raw(r, c), expected, 1.0) << r << "," << c;
    }
}

TEST(SensorFrame, OutsideCropReadsDark) {
  const MosaicLayout layout;
  const WhiteReference white = make_white_reference(layout, 60, 40, 30);
  const RawFrame raw = synthesize_sensor_frame(HsiCube(4, 6, 0.5f), layout, white, 30, {10, 5, 30, 20});
  EXPECT_EQ(raw.width(), 60u);
  EXPECT_EQ(raw(0, 0), 30);
  EXPECT_EQ(raw(39, 59), 30);
  EXPECT_GT(raw(10, 20), 1000);
  EXPECT_THROW(synthesize_sensor_frame(HsiCube(4, 5, 0.5f), layout, white, 30, {10, 5, 30, 20}), Error);
}

TEST(WhiteReference, VignettedAndDeterministic) {
  const MosaicLayout layout;
  const auto a = make_white_reference(layout, 100, 100, 64);
  EXPECT_EQ(a.frame(), make_white_reference(layout, 100, 100, 64).frame());
  // same band (tile phase), centre brighter than corner
  EXPECT_GT(a.frame()(50, 50), a.frame()(0, 0));
  for (float v : a.frame().values()) {
    EXPECT_GT(v, 64.0f);
    EXPECT_LE(v, static_cast<float>(kRawMax));
  }
}

TEST(BandlimitedScene, RangeAndDeterminism) {
  std::mt19937_64 a(5), b(5);
  const HsiCube x = random_bandlimited_scene(a, 10, 14);
  EXPECT_EQ(x, random_bandlimited_scene(b, 10, 14));
  for (float v : x.values()) {
    EXPECT_GE(v, 0.05f);
    EXPECT_LE(v, 0.95f);
  }
}

TEST(SyntheticRig, ShapesAndFeatures) {
  const auto rig = make_synthetic_rig(100, 60, 1);
  EXPECT_EQ(rig.raw.width(), 100u);
  EXPECT_EQ(rig.raw.height(), 60u);
  EXPECT_EQ(rig.truth.height(), 12u);
  EXPECT_EQ(rig.truth.width(), 20u);
  EXPECT_FLOAT_EQ(rig.truth(6, 6, 0), 0.85f);  // patch corner at (h/2, w/3)
  EXPECT_FLOAT_EQ(rig.truth(2, 2, 20), 1.0f);   // emitter peak
  for (std::uint16_t v : rig.raw.values()) EXPECT_LE(v, kRawMax);
  EXPECT_EQ(make_synthetic_rig(100, 60, 1).raw, rig.raw);
  EXPECT_NE(make_synthetic_rig(100, 60, 2).raw, rig.raw);
  EXPECT_THROW(make_synthetic_rig(102, 60, 1), Error);
  EXPECT_THROW(make_synthetic_rig(45, 60, 1), Error);
}
