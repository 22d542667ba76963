#include "symcap/report.hpp"

#include "symcap/capacity.hpp"
#include "symcap/girth.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <sstream>

namespace symcap {

Profile profile_from_suite(const Json& suite, const std::string& name) {
  Profile p;
  if (name == "fast") {
    p = {128, 4, 1024};
  } else {
    require(name == "full", ErrorCode::InvalidArgument, "unknown profile \"" + name + "\"");
  }
  if (suite.is_object() && suite.contains("profiles") && suite["profiles"].contains(name)) {
    const Json& o = suite["profiles"][name];
    require(o.is_object(), ErrorCode::SpecParseError, "profile must be an object");
    p.points = o.value("points", p.points);
    p.restarts = o.value("restarts", p.restarts);
    p.girth_samples = o.value("girth_samples", p.girth_samples);
  }
  return p;
}

bool VerificationRecord::passes(double tol) const {
  if (status != "ok") return false;
  if (margin_general < -tol) return false;
  if (margin_symmetric && *margin_symmetric < -tol) return false;
  if (schaffer_margin && *schaffer_margin < -tol) return false;
  return true;
}

VerificationRecord verify_body(const Json& spec, std::size_t index, const Profile& profile, std::uint64_t seed) {
  VerificationRecord r;
  r.id = spec.is_object() && spec.contains("id") ? spec["id"].get<std::string>() : "body" + std::to_string(index);
  r.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const ConvexBody body = body_from_json(spec);
    r.kind = to_string(body.kind());
    r.dim = body.dim();
    r.n = body.dim() / 2;
    r.symmetric = body.is_symmetric();
    require(r.dim % 2 == 0, ErrorCode::DimensionMismatch, "capacities need an even dimension");

    const CapacityResult cj = c_j(body, seed);
    r.c_j = cj.value;
    r.c_j_method = to_string(cj.method);

    OptimizerConfig cfg;
    cfg.seed = seed;
    cfg.points = profile.points;
    cfg.restarts = profile.restarts;
    cfg.threads = 1;
    r.c_ehz_est = clarke_minimize(body, cfg).value;
    if (std::holds_alternative<Ellipsoid>(body.data())) r.c_ehz_exact = ellipsoid_ehz_exact(body).value;

    r.ratio = r.c_ehz_est / r.c_j;
    r.bound_general = general_ratio_bound(r.n);
    r.bound_symmetric = symmetric_ratio_bound(r.n);
    r.margin_general = r.ratio - r.bound_general;
    if (r.symmetric) {
      r.margin_symmetric = r.ratio - r.bound_symmetric;
      GirthOptions g;
      g.samples = profile.girth_samples;
      g.seed = seed;
      const GirthResult girth = symmetric_girth(body, g);
      r.girth_length = girth.length;
      r.schaffer_bound = girth.bound;
      r.schaffer_margin = girth.margin;
    }
  } catch (const Error& e) {
    r.status = to_string(e.code());
    r.message = e.what();
  } catch (const std::exception& e) {
    r.status = "Exception";
    r.message = e.what();
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string calibration_self_test() {
  const ConvexBody disc = ConvexBody::ball(2);
  for (int N : {8, 64, 1024}) {
    Mat x(2, N);
    for (int k = 0; k < N; ++k) {
      const double t = 2.0 * std::numbers::pi * k / N;
      x.col(k) << std::cos(t), std::sin(t);
    }
    const DiscreteLoop loop(x);
    const double expected = N * std::tan(std::numbers::pi / N);
    const double got = clarke_functional(loop, disc);
    const double mirror = clarke_functional(loop, disc, true);
    if (std::abs(got - expected) > 1e-10 * expected || std::abs(mirror - got) > 1e-12 * got)
      return "Clarke functional off calibration on the " + std::to_string(N) + "-gon";
  }
  return {};
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string report_csv_header() {
  return "id,kind,dim,n,symmetric,c_j,c_j_method,c_ehz_est,c_ehz_exact,ratio,bound_general,bound_symmetric,"
         "margin_general,margin_symmetric,girth_length,schaffer_bound,schaffer_margin,seed,status";
}

std::string report_csv_row(const VerificationRecord& r) {
  std::ostringstream o;
  o << csv_escape(r.id) << ',' << r.kind << ',' << r.dim << ',' << r.n << ',' << (r.symmetric ? "true" : "false") << ','
    << format_double(r.c_j) << ',' << r.c_j_method << ',' << format_double(r.c_ehz_est) << ',' << opt(r.c_ehz_exact)
    << ',' << format_double(r.ratio) << ',' << format_double(r.bound_general) << ','
    << format_double(r.bound_symmetric) << ',' << format_double(r.margin_general) << ',' << opt(r.margin_symmetric)
    << ',' << opt(r.girth_length) << ',' << opt(r.schaffer_bound) << ',' << opt(r.schaffer_margin) << ',' << r.seed
    << ',' << r.status;
  return o.str();
}

Json to_json(const VerificationRecord& r) {
  Json j = {{"id", r.id},
            {"kind", r.kind},
            {"dim", r.dim},
            {"n", r.n},
            {"symmetric", r.symmetric},
            {"c_j", r.c_j},
            {"c_j_method", r.c_j_method},
            {"c_ehz_est", r.c_ehz_est},
            {"c_ehz_exact", opt_json(r.c_ehz_exact)},
            {"ratio", r.ratio},
            {"bound_general", r.bound_general},
            {"bound_symmetric", r.bound_symmetric},
            {"margin_general", r.margin_general},
            {"margin_symmetric", opt_json(r.margin_symmetric)},
            {"girth_length", opt_json(r.girth_length)},
            {"schaffer_bound", opt_json(r.schaffer_bound)},
            {"schaffer_margin", opt_json(r.schaffer_margin)},
            {"seed", r.seed},
            {"status", r.status}};
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

VerifyOutcome run_verify(const std::string& suite_file, const std::string& out_dir, const VerifyOptions& options) {
  const Json suite = read_json_file(suite_file);
  Json bodies = Json::array();
  if (!suite.is_null()) {
    require(suite.is_object(), ErrorCode::SpecParseError, "suite must be an object");
    if (suite.contains("bodies")) {
      require(suite["bodies"].is_array(), ErrorCode::SpecParseError, "\"bodies\" must be an array");
      bodies = suite["bodies"];
    }
  }
  const Profile profile = profile_from_suite(suite, options.profile);

  VerifyOutcome out;
  out.self_test_failure = calibration_self_test();
  if (!out.self_test_failure.empty()) out.all_pass = false;

  const auto count = bodies.size();
  out.records.resize(count);
  auto task = [&](std::size_t k) {
    out.records[k] = verify_body(bodies[k], k, profile, options.seed + 1009 * static_cast<std::uint64_t>(k));
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(count)));
  if (jobs <= 1) {
    for (std::size_t k = 0; k < count; ++k) task(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    for (int w = 0; w < jobs; ++w)
      workers.push_back(std::async(std::launch::async, [&] {
        for (std::size_t k = next++; k < count; k = next++) task(k);
      }));
    for (auto& f : workers) f.get();
  }
  for (const auto& r : out.records) out.all_pass = out.all_pass && r.passes(options.tol);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  {
    std::ofstream csv(dir / "report.csv", std::ios::binary);
    csv << report_csv_header() << '\n';
    for (const auto& r : out.records) csv << report_csv_row(r) << '\n';
  }
  {
    Json records = Json::array();
    for (const auto& r : out.records) records.push_back(to_json(r));
    const Json report = {{"seed", options.seed},
                         {"profile", options.profile},
                         {"tol", options.tol},
                         {"self_test", out.self_test_failure.empty() ? "ok" : out.self_test_failure},
                         {"all_pass", out.all_pass},
                         {"records", records}};
    std::ofstream js(dir / "report.json", std::ios::binary);
    js << report.dump(2) << '\n';
  }
  {
    Json timing = Json::array();
    double total = 0.0;
    for (const auto& r : out.records) {
      timing.push_back({{"id", r.id}, {"wall_seconds", r.wall_seconds}});
      total += r.wall_seconds;
    }
    std::ofstream js(dir / "timing.json", std::ios::binary);
    js << Json{{"records", timing}, {"total_seconds", total}}.dump(2) << '\n';
  }
  return out;
}

}  // namespace symcap
