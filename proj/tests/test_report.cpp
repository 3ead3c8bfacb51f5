#include <cfloat>
#include <cmath>
#include <filesystem>
#include <limits>

#include <gtest/gtest.h>

#include "dilatekit/config.hpp"
#include "dilatekit/errors.hpp"
#include "dilatekit/report.hpp"

using namespace dilatekit;
using namespace dilatekit::report;

namespace {

Report sample_report() {
  Report r;
  r.metadata["command"] = "dilate";
  r.metadata["seed"] = "7";
  auto& s = r.section("psd");
  s.checks.push_back(make_check("min_eigenvalue", -1.25e-15, -1e-10, Comparison::GreaterEqual));
  s.info["rank"] = 847;
  s.notes["status"] = "ok";
  auto& t = r.section("parseval_checks");
  t.checks.push_back(make_check("calderon_deviation", 0, 0, Comparison::Equal));
  t.checks.push_back(make_check("translation_orthogonality", (0.1 + 0.2) * 1e-12, 1e-8));
  return r;
}

}  // namespace

TEST(Report, JsonRoundTripIsExact) {
  const auto r = sample_report();
  const auto text = to_json(r);
  const auto back = from_json(text);
  EXPECT_EQ(back, r);
  EXPECT_EQ(to_json(back), text);
}

TEST(Report, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "dilatekit_report_roundtrip.json";
  emit_report(sample_report(), path);
  EXPECT_EQ(load_report(path), sample_report());
  std::filesystem::remove(path);
}

TEST(Report, PassAggregatesChecks) {
  auto r = sample_report();
  EXPECT_TRUE(r.pass());
  r.section("psd").checks.push_back(make_check("extra", 2.0, 1.0));
  EXPECT_FALSE(r.section("psd").pass());
  EXPECT_FALSE(r.pass());
}

TEST(Report, ComparisonsAndNonFiniteValues) {
  EXPECT_TRUE(make_check("a", 1.0, 1.0).pass);
  EXPECT_FALSE(make_check("a", 1.0 + 1e-16 * 4, 1.0).pass);
  EXPECT_TRUE(make_check("b", 2.0, 1.0, Comparison::GreaterEqual).pass);
  EXPECT_FALSE(make_check("c", 1.0, 0.0, Comparison::Equal).pass);
  const auto nan = make_check("d", std::numeric_limits<double>::quiet_NaN(), 1.0);
  EXPECT_FALSE(nan.pass);
  EXPECT_EQ(nan.value, DBL_MAX);
  EXPECT_EQ(parse_comparison(comparison_name(Comparison::GreaterEqual)), Comparison::GreaterEqual);
  EXPECT_THROW(parse_comparison("<"), InvalidInput);
}

TEST(Report, MalformedJsonIsInvalidInput) {
  EXPECT_THROW(from_json("{"), InvalidInput);
  EXPECT_THROW(from_json("[]"), InvalidInput);
}

TEST(Config, ParsesPresetLayout) {
  const auto cfg = cli::parse_config(R"({
    "group": {"family": "bs12"},
    "frame": {"kind": "msf_dyadic", "intervals": [["-1/4", "-1/8"], ["1/8", "1/4"]]},
    "window": {"j_min": -2, "j_max": 1, "radius": 5},
    "tolerances": {"rank": 1e-12},
    "seed": 3
  })");
  EXPECT_EQ(cfg.j_min, -2);
  EXPECT_EQ(cfg.radius, 5);
  EXPECT_EQ(cfg.tol.rank, 1e-12);
  EXPECT_EQ(cfg.tol.psd, 1e-10);
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_EQ(cfg.window().size(), 4u * 11u);
  EXPECT_FALSE(cfg.invariance_words.empty());
}

TEST(Config, SeedOverrideChangesRandomVectors) {
  const char* doc = R"({"group": {"family": "bs12"},
    "frame": {"kind": "explicit", "source": "random", "d": 2},
    "window": {"j_min": 0, "j_max": 0, "radius": 1}, "seed": 1})";
  const auto a = cli::parse_config(doc), b = cli::parse_config(doc), c = cli::parse_config(doc, {}, 2);
  const auto& va = std::get<frame::ExplicitVectors>(a.frame).vecs;
  const auto& vb = std::get<frame::ExplicitVectors>(b.frame).vecs;
  const auto& vc = std::get<frame::ExplicitVectors>(c.frame).vecs;
  EXPECT_TRUE(va.front().second == vb.front().second);
  EXPECT_FALSE(va.front().second == vc.front().second);
}

TEST(Config, RejectsMalformedDocuments) {
  EXPECT_THROW(cli::parse_config("{}"), InvalidInput);
  EXPECT_THROW(cli::parse_config(R"({"group": {"family": "bogus"}, "frame": {"kind": "explicit", "source": "zero"}})"),
               InvalidInput);
  EXPECT_THROW(cli::parse_config(R"({"group": {"family": "bs12"},
    "frame": {"kind": "msf_dyadic", "intervals": [["1/4", "1/8"]]}})"),
               InvalidInput);
}
