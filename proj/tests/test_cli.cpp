#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "dilatekit/report.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kPresets = DILATEKIT_PRESETS;

int run(const std::string& args) {
  const std::string cmd = std::string(DILATEKIT_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("dilatekit_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string preset(const std::string& name) { return (kPresets / (name + ".json")).string(); }

}  // namespace

TEST(Cli, ParsevalPassAndFail) {
  EXPECT_EQ(run("parseval --config " + preset("bs12_sub_shannon")), 0);
  EXPECT_EQ(run("parseval --config " + preset("parseval_fail")), 1);
}

TEST(Cli, ShannonDilationIsTrivial) {
  const auto out = scratch("shannon");
  ASSERT_EQ(run("dilate --config " + preset("shannon") + " --out " + out.string()), 0);
  const auto r = dilatekit::report::load_report(out / "report.json");
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.sections.at("factorization").info.at("rank"), 0.0);
  EXPECT_EQ(run("verify --config " + preset("shannon") + " --model " + (out / "model").string()), 0);
  fs::remove_all(out);
}

TEST(Cli, IndefiniteKernelFailsPsdSection) {
  const auto out = scratch("indefinite");
  EXPECT_EQ(run("dilate --config " + preset("random_explicit_indefinite") + " --out " + out.string()), 1);
  const auto r = dilatekit::report::load_report(out / "report.json");
  EXPECT_FALSE(r.sections.at("psd").pass());
  EXPECT_FALSE(r.pass());
  fs::remove_all(out);
}

TEST(Cli, GramWritesMatrix) {
  const auto out = scratch("gram");
  EXPECT_EQ(run("gram --config " + preset("shannon") + " --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "gram.txt"));
  EXPECT_TRUE(fs::exists(out / "report.json"));
  fs::remove_all(out);
}

TEST(Cli, InvalidInputExitsTwo) {
  EXPECT_EQ(run("dilate --config /nonexistent/config.json"), 2);
  const auto bad = fs::temp_directory_path() / "dilatekit_cli_bad.json";
  std::ofstream(bad) << R"({"group": {"family": "bs12"}, "frame": {"kind": "msf_dyadic"}})";
  EXPECT_EQ(run("dilate --config " + bad.string()), 2);
  std::ofstream(bad) << "{ not json";
  EXPECT_EQ(run("parseval --config " + bad.string()), 2);
  fs::remove(bad);
  EXPECT_EQ(run("roots nonsense"), 2);
  EXPECT_EQ(run(""), 2);
}

TEST(Cli, RootsSubcommands) {
  EXPECT_EQ(run("roots finite-heisenberg --N 8 --a 2 --b 2"), 0);
  EXPECT_EQ(run("roots finite-heisenberg --N 4 --a 1 --b 1"), 0);
  const auto m = fs::temp_directory_path() / "dilatekit_cli_matrix.txt";
  std::ofstream(m) << "2\n0 0 1 0\n1 0 0 0\n";
  EXPECT_EQ(run("roots principal --input " + m.string() + " --power 2"), 0);
  std::ofstream(m) << "2\n2 0 0 0\n0 0 1 0\n";
  EXPECT_EQ(run("roots principal --input " + m.string() + " --power 2"), 2);
  fs::remove(m);
}
