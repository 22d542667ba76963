#pragma once

#include "symcap/io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace symcap {

struct Profile {
  int points = 256;
  int restarts = 8;
  int girth_samples = 4096;
};

/// Built-in "fast" and "full" profiles, overridable by the suite file.
Profile profile_from_suite(const Json& suite, const std::string& name);

struct VerificationRecord {
  std::string id;
  std::string kind;
  Eigen::Index dim = 0;
  Eigen::Index n = 0;
  bool symmetric = false;
  double c_j = 0.0;
  std::string c_j_method;
  double c_ehz_est = 0.0;
  std::optional<double> c_ehz_exact;
  double ratio = 0.0;
  double bound_general = 0.0;
  double bound_symmetric = 0.0;
  double margin_general = 0.0;
  std::optional<double> margin_symmetric;
  std::optional<double> girth_length;
  std::optional<double> schaffer_bound;
  std::optional<double> schaffer_margin;
  std::uint64_t seed = 0;
  std::string status = "ok";
  std::string message;
  double wall_seconds = 0.0;

  /// Margins are nonnegative up to the tolerance and the body ran without error.
  bool passes(double tol) const;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::string profile = "full";
  double tol = 1e-2;
  int jobs = 1;
};

/// Processes one body spec; numerical failures are recorded in `status`.
VerificationRecord verify_body(const Json& body_spec, std::size_t index, const Profile& profile, std::uint64_t seed);

struct VerifyOutcome {
  std::vector<VerificationRecord> records;
  bool all_pass = true;
  std::string self_test_failure;
};

/// Reads the suite, runs every body (up to `jobs` at once, rows in input order) and
/// writes report.csv, report.json and timing.json into `out_dir`.
VerifyOutcome run_verify(const std::string& suite_file, const std::string& out_dir, const VerifyOptions& options);

/// Clarke functional on regular polygons of the unit disc against N tan(pi/N),
/// and agreement of both sign conventions on the ball. Empty string on success.
std::string calibration_self_test();

std::string report_csv_header();
std::string report_csv_row(const VerificationRecord& record);
Json to_json(const VerificationRecord& record);

}  // namespace symcap
