#include "symcap/capacity.hpp"
#include "symcap/report.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace symcap;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = SYMCAP_FIXTURES;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("symcap_report_" + name);
  fs::remove_all(p);
  return p;
}

VerifyOptions fast(int jobs = 1) {
  VerifyOptions o;
  o.seed = 3;
  o.profile = "fast";
  o.jobs = jobs;
  return o;
}

}  // namespace

TEST(Calibration, SelfTestPasses) { EXPECT_EQ(calibration_self_test(), ""); }

TEST(Profiles, DefaultsAndOverrides) {
  const Profile full = profile_from_suite(Json::object(), "full");
  EXPECT_EQ(full.points, 256);
  EXPECT_EQ(full.restarts, 8);
  EXPECT_EQ(full.girth_samples, 4096);
  const Profile f = profile_from_suite(Json::object(), "fast");
  EXPECT_EQ(f.points, 128);
  EXPECT_EQ(f.restarts, 4);
  const Json suite = {{"profiles", {{"fast", {{"points", 64}}}}}};
  EXPECT_EQ(profile_from_suite(suite, "fast").points, 64);
  EXPECT_EQ(profile_from_suite(suite, "fast").restarts, 4);
  EXPECT_THROW(profile_from_suite(suite, "medium"), Error);
}

TEST(Csv, HeaderAndRowShape) {
  const std::string header = report_csv_header();
  EXPECT_EQ(header,
            "id,kind,dim,n,symmetric,c_j,c_j_method,c_ehz_est,c_ehz_exact,ratio,bound_general,bound_symmetric,"
            "margin_general,margin_symmetric,girth_length,schaffer_bound,schaffer_margin,seed,status");
  VerificationRecord r;
  r.id = "x";
  EXPECT_EQ(split(report_csv_row(r)).size(), split(header).size());
}

TEST(Verify, EmptySuiteWritesHeaderOnly) {
  const fs::path out = scratch("empty");
  const VerifyOutcome o = run_verify(kFixtures + "/empty_suite.json", out.string(), fast());
  EXPECT_TRUE(o.all_pass);
  EXPECT_TRUE(o.records.empty());
  EXPECT_EQ(slurp(out / "report.csv"), report_csv_header() + "\n");
  EXPECT_TRUE(fs::exists(out / "report.json"));
  EXPECT_TRUE(fs::exists(out / "timing.json"));
}

TEST(Verify, ParseErrorCarriesLine) {
  try {
    run_verify(kFixtures + "/bad_suite.json", scratch("bad").string(), fast());
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SpecParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Verify, SmallSuiteRecordsAndCsvRoundTrip) {
  const fs::path out = scratch("small");
  const VerifyOutcome o = run_verify(kFixtures + "/small_suite.json", out.string(), fast(2));
  ASSERT_EQ(o.records.size(), 2u);
  EXPECT_TRUE(o.all_pass);
  const auto& ball = o.records[0];
  const auto& shifted = o.records[1];
  EXPECT_EQ(ball.id, "ball_n1");
  EXPECT_EQ(shifted.id, "shifted_ellipsoid");
  EXPECT_NEAR(ball.c_j, 1.0, 1e-9);
  EXPECT_NEAR(ball.ratio, std::numbers::pi, 1e-2 * std::numbers::pi);
  ASSERT_TRUE(ball.c_ehz_exact.has_value());
  EXPECT_NEAR(*ball.c_ehz_exact, std::numbers::pi, 1e-12);
  ASSERT_TRUE(ball.margin_symmetric && ball.girth_length && ball.schaffer_margin);
  EXPECT_FALSE(shifted.symmetric);
  EXPECT_FALSE(shifted.margin_symmetric.has_value());
  EXPECT_FALSE(shifted.girth_length.has_value());
  EXPECT_GE(shifted.margin_general, 0.0);
  EXPECT_NE(ball.seed, shifted.seed);

  const auto rows = lines(slurp(out / "report.csv"));
  ASSERT_EQ(rows.size(), 3u);
  const auto head = split(rows[0]);
  for (std::size_t k = 0; k < o.records.size(); ++k) {
    const auto& r = o.records[k];
    const auto cells = split(rows[k + 1]);
    ASSERT_EQ(cells.size(), head.size());
    auto col = [&](const std::string& name) {
      return cells[std::size_t(std::find(head.begin(), head.end(), name) - head.begin())];
    };
    EXPECT_EQ(col("id"), r.id);
    EXPECT_EQ(std::stod(col("c_j")), r.c_j);
    EXPECT_EQ(std::stod(col("ratio")), r.ratio);
    // margins reproduce the module invariants without recomputation drift
    EXPECT_NEAR(std::stod(col("margin_general")), std::stod(col("ratio")) - std::stod(col("bound_general")), 1e-12);
    EXPECT_NEAR(std::stod(col("ratio")), std::stod(col("c_ehz_est")) / std::stod(col("c_j")), 1e-12);
    if (r.margin_symmetric)
      EXPECT_NEAR(std::stod(col("margin_symmetric")), std::stod(col("ratio")) - std::stod(col("bound_symmetric")),
                  1e-12);
    else
      EXPECT_EQ(col("margin_symmetric"), "");
    EXPECT_EQ(col("status"), "ok");
  }
  const Json j = parse_json_text(slurp(out / "report.json"));
  EXPECT_EQ(j.at("records").size(), 2u);
  EXPECT_EQ(slurp(out / "report.csv").find("wall"), std::string::npos);
}

TEST(Verify, DeterministicAcrossRunsAndJobCounts) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  run_verify(kFixtures + "/small_suite.json", a.string(), fast(1));
  run_verify(kFixtures + "/small_suite.json", b.string(), fast(2));
  EXPECT_EQ(slurp(a / "report.csv"), slurp(b / "report.csv"));
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
}

TEST(Verify, BadBodyIsRecordedAndRunContinues) {
  const Json bad = {{"id", "bad"}, {"kind", "lp"}, {"dim", 4}, {"params", {{"p", 0.5}}}};
  const VerificationRecord r = verify_body(bad, 0, profile_from_suite(Json::object(), "fast"), 0);
  EXPECT_EQ(r.status, "NonConvexParameters");
  EXPECT_FALSE(r.passes(1e-2));
  const Json odd = {{"id", "odd"}, {"kind", "ellipsoid"}, {"dim", 3}, {"params", {{"axes", {1, 1, 1}}}}};
  EXPECT_EQ(verify_body(odd, 1, profile_from_suite(Json::object(), "fast"), 0).status, "DimensionMismatch");
}
