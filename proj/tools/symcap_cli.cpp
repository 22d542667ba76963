// Command-line front end: capacities, symmetrization, girth, characteristic flow
// and the batch verification harness.

#include "symcap/capacity.hpp"
#include "symcap/characteristics.hpp"
#include "symcap/girth.hpp"
#include "symcap/report.hpp"
#include "symcap/symmetry.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace symcap;

namespace {

struct Global {
  std::uint64_t seed = 0;
  std::string out;
  double tol = 1e-2;
  bool json = false;
  bool csv = false;
};

void emit(const Global& g, const Json& json, const std::string& csv) {
  const std::string text = g.csv ? csv : json.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(g.out, std::ios::binary);
    require(static_cast<bool>(f), ErrorCode::InvalidArgument, "cannot write " + g.out);
    f << text;
  }
}

Vec parse_vector(const std::string& text) {
  std::string s = text;
  if (s.find('[') == std::string::npos) s = "[" + s + "]";
  return vector_from_json(parse_json_text(s));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symplectic capacity estimates for convex bodies"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Base random seed")->capture_default_str();
  app.add_option("--out", g.out, "Output file (output directory for verify)");
  app.add_option("--tol", g.tol, "Inequality tolerance")->capture_default_str();
  auto* json_flag = app.add_flag("--json", g.json, "JSON output (default)");
  auto* csv_flag = app.add_flag("--csv", g.csv, "CSV output");
  json_flag->excludes(csv_flag);

  std::string body_file, loop_file, suite_file, start_text, profile = "full", norm_kind = "clarke";
  int restarts = 8, points = 256, m = 2, samples = 4096, neighbours = 12, jobs = 1;
  double t_max = 0.0, step = 1e-3;
  bool symmetric = false, mirror = false;

  auto* cj = app.add_subcommand("cj", "c_J(K) = 1 / max omega over the polar");
  cj->fallthrough();
  cj->add_option("body", body_file, "Body spec JSON")->required()->check(CLI::ExistingFile);

  auto* cap = app.add_subcommand("capacity", "Clarke dual minimization estimate of the EHZ capacity");
  cap->fallthrough();
  cap->add_option("body", body_file, "Body spec JSON")->required()->check(CLI::ExistingFile);
  cap->add_option("--restarts", restarts)->capture_default_str()->check(CLI::PositiveNumber);
  cap->add_option("--points", points)->capture_default_str()->check(CLI::Range(8, 1 << 20));
  cap->add_flag("--symmetric", symmetric, "Restrict to centrally symmetric loops");
  cap->add_flag("--mirror", mirror, "Use h_K(Jv) as the loop norm");

  auto* sym = app.add_subcommand("symmetrize", "Central or m-fold symmetrization of a loop");
  sym->fallthrough();
  sym->add_option("loop", loop_file, "Loop JSON")->required()->check(CLI::ExistingFile);
  sym->add_option("--body", body_file, "Body spec JSON")->required()->check(CLI::ExistingFile);
  sym->add_option("--m", m)->capture_default_str()->check(CLI::Range(2, 1 << 16));
  sym->add_option("--norm", norm_kind, "clarke (h_K(-Jv)) or gauge")
      ->capture_default_str()
      ->check(CLI::IsMember({"clarke", "gauge"}));

  auto* gir = app.add_subcommand("girth", "Short centrally symmetric boundary curve and the Schaffer bound");
  gir->fallthrough();
  gir->add_option("body", body_file, "Body spec JSON")->required()->check(CLI::ExistingFile);
  gir->add_option("--samples", samples)->capture_default_str()->check(CLI::Range(4, 1 << 20));
  gir->add_option("--neighbours", neighbours)->capture_default_str()->check(CLI::PositiveNumber);

  auto* flow = app.add_subcommand("flow", "Integrate the characteristic flow from a boundary point");
  flow->fallthrough();
  flow->add_option("body", body_file, "Body spec JSON")->required()->check(CLI::ExistingFile);
  flow->add_option("--start", start_text, "Start point, comma separated")->required();
  flow->add_option("--tmax", t_max)->required()->check(CLI::PositiveNumber);
  flow->add_option("--step", step)->capture_default_str()->check(CLI::PositiveNumber);

  auto* ver = app.add_subcommand("verify", "Run the verification suite and write reports");
  ver->fallthrough();
  ver->add_option("suite", suite_file, "Suite JSON")->required()->check(CLI::ExistingFile);
  ver->add_option("--profile", profile)->capture_default_str()->check(CLI::IsMember({"fast", "full"}));
  ver->add_option("--jobs", jobs)->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cj) {
      const CapacityResult r = c_j(body_from_json(read_json_file(body_file)), g.seed);
      emit(g, to_json(r), "value,method\n" + format_double(r.value) + "," + to_string(r.method) + "\n");
    } else if (*cap) {
      OptimizerConfig cfg;
      cfg.seed = g.seed;
      cfg.restarts = restarts;
      cfg.points = points;
      cfg.symmetric = symmetric;
      cfg.mirror_sign = mirror;
      const CapacityResult r = clarke_minimize(body_from_json(read_json_file(body_file)), cfg);
      emit(g, to_json(r), "value,method,iterations\n" + format_double(r.value) + "," + to_string(r.method) + "," +
                              std::to_string(r.diagnostics.iterations) + "\n");
    } else if (*sym) {
      const ConvexBody body = body_from_json(read_json_file(body_file));
      const DiscreteLoop loop = loop_from_json(read_json_file(loop_file));
      const LoopNorm norm(body, norm_kind == "gauge" ? LoopNorm::Kind::Gauge : LoopNorm::Kind::ClarkeDual);
      const SymmetrizationOutcome o = m == 2 ? symmetrize_central(loop, norm) : symmetrize_mfold(loop, norm, m);
      std::ostringstream csv;
      csv << "index,segment_action,polygon_term,candidate_action,identity_residual\n";
      for (std::size_t i = 0; i < o.decomposition.size(); ++i) {
        const auto& c = o.decomposition[i];
        csv << i << ',' << format_double(c.segment_action) << ',' << format_double(c.polygon_term) << ','
            << format_double(c.candidate_action) << ',' << format_double(c.identity_residual) << '\n';
      }
      emit(g, to_json(o), csv.str());
    } else if (*gir) {
      GirthOptions opt;
      opt.samples = samples;
      opt.neighbours = neighbours;
      opt.seed = g.seed;
      const GirthResult r = symmetric_girth(body_from_json(read_json_file(body_file)), opt);
      emit(g, to_json(r),
           "length,bound,margin\n" + format_double(r.length) + "," + format_double(r.bound) + "," +
               format_double(r.margin) + "\n");
    } else if (*flow) {
      const ConvexBody body = body_from_json(read_json_file(body_file));
      FlowOptions opt;
      opt.step = step;
      const Trajectory tr = integrate_characteristic(body, parse_vector(start_text), t_max, opt);
      Json j = {{"steps", tr.states.cols() - 1},
                {"step", tr.step},
                {"closed", tr.closed()},
                {"boundary_residual", tr.boundary_residual}};
      if (tr.closed()) {
        j["period"] = *tr.period;
        j["closure_residual"] = tr.closure_residual;
        if (tr.closure_residual <= 1e-4 * tr.diameter) {
          const OrbitAction a = closed_orbit_action(body, tr);
          j["action"] = a.action;
          j["identity_residual"] = a.identity_residual;
          j["normal_sum"] = a.normal_sum;
          j["gauge_length"] = a.gauge_length;
        }
      }
      std::ostringstream csv;
      write_trajectory_csv(csv, body, tr);
      emit(g, j, csv.str());
    } else if (*ver) {
      VerifyOptions opt;
      opt.seed = g.seed;
      opt.profile = profile;
      opt.tol = g.tol;
      opt.jobs = jobs;
      const VerifyOutcome o = run_verify(suite_file, g.out.empty() ? "report" : g.out, opt);
      if (!o.self_test_failure.empty()) std::cerr << "self-test failed: " << o.self_test_failure << '\n';
      for (const auto& r : o.records)
        if (!r.passes(opt.tol)) std::cerr << "FAIL " << r.id << ": " << r.status << ' ' << r.message << '\n';
      return o.all_pass ? 0 : 1;
    }
  } catch (const Error& e) {
    Json diag = {{"error", to_string(e.code())}, {"message", e.what()}};
    if (const auto* nc = dynamic_cast<const NotConverged*>(&e)) {
      diag["bound"] = nc->bound();
      diag["gap"] = nc->gap();
    }
    std::cerr << diag.dump() << '\n';
    return e.code() == ErrorCode::SpecParseError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "Exception"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}
