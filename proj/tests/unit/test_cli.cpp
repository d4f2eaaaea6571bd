#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("hsicube_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    put("cam.cfg", "crop_rect = 0 0 100 50\nbias = 64\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  void put(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }

  std::string get(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  // Runs the CLI inside the temp dir; stderr goes to err.txt.
  int run(const std::string& args) const {
    const std::string cmd = "cd '" + dir_.string() + "' && '" + HSICUBE_CLI + "' " + args + " >out.txt 2>err.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  void synth(const std::string& prefix, const std::string& scene) {
    put(prefix + ".scene", scene);
    ASSERT_EQ(run("synth --scene " + prefix + ".scene --config cam.cfg --out " + prefix), 0) << get("err.txt");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ProcessWritesCubeAndScalingRow) {
  synth("g", "seed 1\nnoise 0.002\nflat 0.3\npatch 2 2 10 8 0.8\n");
  EXPECT_TRUE(fs::exists(dir_ / "g.cfg"));
  EXPECT_TRUE(fs::exists(dir_ / "g_white.hsrw"));
  ASSERT_EQ(run("process --raw g.hsrw --config g.cfg --out g.cube --scale"), 0) << get("err.txt");
  EXPECT_EQ(fs::file_size(dir_ / "g.cube"), 10u * 20u * 25u * 4u);

  std::istringstream csv(get("g.scaling.csv"));
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  EXPECT_EQ(header, "frame_id,row,col,scale,candidates_examined,rejected_count,fallback_flag");
  std::vector<std::string> cells;
  std::istringstream rs(row);
  for (std::string c; std::getline(rs, c, ',');) cells.push_back(c);
  ASSERT_EQ(cells.size(), 7u);
  EXPECT_EQ(cells[0], "g");
  EXPECT_NEAR(std::stod(cells[3]), 1.0 / 0.8, 0.01);  // inside the 0.8 patch
  EXPECT_EQ(cells[6], "0");
}

TEST_F(Cli, StrictScalingFallbackExitsThree) {
  synth("d", "flat 0\n");
  EXPECT_EQ(run("process --raw d.hsrw --config d.cfg --out d.cube --scale"), 0);
  EXPECT_EQ(run("process --raw d.hsrw --config d.cfg --out d.cube --scale --strict-scaling"), 3);
  EXPECT_NE(get("err.txt").find("[scaling]"), std::string::npos);
  EXPECT_NE(get("d.scaling.csv").find(",1\n"), std::string::npos);
}

TEST_F(Cli, MisalignedCropNamesStage) {
  synth("a", "flat 0.5\n");
  std::string cfg = get("a.cfg");
  cfg.replace(cfg.find("crop_rect = 0 0 100 50"), 22, "crop_rect = 1 0 95 50");
  put("bad.cfg", cfg);
  EXPECT_EQ(run("process --raw a.hsrw --config bad.cfg --out b.cube"), 2);
  EXPECT_EQ(get("err.txt").rfind("[crop]", 0), 0u);
  EXPECT_FALSE(fs::exists(dir_ / "b.cube"));
}

TEST_F(Cli, ExitCodes) {
  synth("a", "flat 0.5\n");
  EXPECT_EQ(run("process --raw missing.hsrw --config a.cfg --out x.cube"), 1);
  EXPECT_EQ(run("process --config a.cfg"), 2);  // parse error
  EXPECT_EQ(run("frobnicate"), 2);
  put("bad_bias.cfg", "crop_rect = 0 0 100 50\nbias = 9000\n");
  EXPECT_EQ(run("process --raw a.hsrw --config bad_bias.cfg --out x.cube"), 2);
  EXPECT_EQ(run("manifest --channels 25,64"), 0);
  EXPECT_NE(get("out.txt").find("k=3"), std::string::npos);
  EXPECT_EQ(run("manifest --channels 0"), 2);
}
