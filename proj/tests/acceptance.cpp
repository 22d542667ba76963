// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "symcap/capacity.hpp"
#include "symcap/characteristics.hpp"
#include "symcap/girth.hpp"
#include "symcap/report.hpp"
#include "symcap/symmetry.hpp"

#include "test_support.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace symcap;
using namespace symcap::testing;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const std::string kFixtures = SYMCAP_FIXTURES;
const std::string kCli = SYMCAP_CLI;

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " [" << id << "] " << title << ": " << detail << std::endl;
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_1() {
  bool ok = true;
  std::ostringstream d;
  for (Eigen::Index n : {1, 2}) {
    const ConvexBody ball = ConvexBody::ball(2 * n);
    const auto t0 = std::chrono::steady_clock::now();
    const double cj = c_j(ball).value;
    OptimizerConfig cfg;
    cfg.points = 256;
    cfg.restarts = 8;
    const double est = clarke_minimize(ball, cfg).value;
    const double secs = seconds_since(t0);
    const bool this_ok = std::abs(cj - 1.0) <= 1e-6 && std::abs(est - kPi) <= 1e-2 * kPi && secs <= 60.0;
    ok = ok && this_ok;
    d << "n=" << n << " c_j=" << fmt(cj, 10) << " clarke=" << fmt(est) << " (" << fmt(secs, 3) << " s) ";
  }
  report(1, "ball calibration", ok, d.str());
}

void criterion_2() {
  bool ok = true;
  std::ostringstream d;
  for (const Vec& radii : {Vec((Vec(2) << 1.0, 2.0).finished()), Vec((Vec(3) << 1.0, 1.2, 1.5).finished())}) {
    const ConvexBody e = ConvexBody::ellipsoid_complex(radii);
    OptimizerConfig cfg;
    cfg.points = 256;
    cfg.restarts = 8;
    const double est = clarke_minimize(e, cfg).value;
    const double exact = ellipsoid_ehz_exact(e).value;
    const auto spec = ellipsoid_spectrum(e);
    const Vec x0 = boundary_point(e, spec.planes.front().first);
    const OrbitAction orbit = closed_orbit_action(e, integrate_characteristic(e, x0, 4.0 * exact));
    const bool this_ok = std::abs(est - exact) <= 1e-2 * exact && orbit.identity_residual <= 1e-3 * orbit.period &&
                         std::abs(orbit.action - exact) <= 1e-3 * exact;
    ok = ok && this_ok;
    d << "d=" << 2 * radii.size() << " clarke=" << fmt(est) << " exact=" << fmt(exact) << " |A-T/2|/T="
      << fmt(orbit.identity_residual / orbit.period, 2) << " ";
  }
  report(2, "ellipsoid cross-check", ok, d.str());
}

void criterion_3() {
  const fs::path out = fs::temp_directory_path() / "symcap_acceptance_c3";
  fs::remove_all(out);
  VerifyOptions opt;
  opt.seed = 7;
  opt.profile = "full";
  const auto t0 = std::chrono::steady_clock::now();
  const VerifyOutcome o = run_verify(kFixtures + "/suite.json", out.string(), opt);
  const double secs = seconds_since(t0);
  bool ok = o.self_test_failure.empty() && secs <= 600.0 && !o.records.empty();
  bool saw_shifted = false;
  double worst_sym = std::numeric_limits<double>::infinity(), worst_gen = worst_sym;
  for (const auto& r : o.records) {
    if (r.status != "ok") ok = false;
    if (r.symmetric) {
      worst_sym = std::min(worst_sym, r.ratio - (2.0 + 1.0 / double(r.n)));
    } else {
      saw_shifted = true;
      worst_gen = std::min(worst_gen, r.ratio - (1.0 + 1.0 / (2.0 * double(r.n))));
    }
  }
  ok = ok && saw_shifted && worst_sym >= -1e-2 && worst_gen >= -1e-2;
  report(3, "ratio bounds on fixture suite", ok,
         std::to_string(o.records.size()) + " bodies, min symmetric margin " + fmt(worst_sym) +
             ", min general margin " + fmt(worst_gen) + " (" + fmt(secs, 3) + " s)");
}

void criterion_4() {
  Rng rng(2024);
  const LoopNorm norm(ConvexBody::ball(4), LoopNorm::Kind::ClarkeDual);
  double worst_sym = 0.0, worst_add = 0.0, worst_len = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 1000; ++k) {
    const DiscreteLoop loop = fourier_loop(rng, 4, 64, 1 + k % 4, 1.0);
    const auto o = symmetrize_central(loop, norm);
    worst_sym = std::max(worst_sym, symmetry_residual(o.output, 2));
    worst_add = std::max(worst_add, o.additivity_residual);
    worst_len = std::max(worst_len, o.post_normalized_length() - o.pre_normalized_length());
  }
  report(4, "central symmetrization", worst_sym <= 1e-9 && worst_add <= 1e-9 && worst_len <= 1e-9,
         "max symmetry residual " + fmt(worst_sym, 3) + ", max additivity residual " + fmt(worst_add, 3) +
             ", max normalized length increase " + fmt(worst_len, 3));
}

void criterion_5() {
  Rng rng(2025);
  double worst_id = 0.0, worst_margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index d : {2, 4}) {
    const LoopNorm norm(ConvexBody::ball(d), LoopNorm::Kind::ClarkeDual);
    for (int m : {2, 3, 4, 6}) {
      const double alpha = regular_polygon_alpha(m);
      for (int k = 0; k < 1000; ++k) {
        const DiscreteLoop loop = fourier_loop(rng, d, 64, 1 + k % 4, 1.0);
        const auto o = symmetrize_mfold(loop, norm, m);
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& c : o.decomposition) {
          const double rhs = m * c.segment_action + alpha * c.chord.squaredNorm();
          worst_id = std::max(worst_id, std::abs(c.candidate_action - rhs));
          best = std::max(best, c.candidate_action);
        }
        worst_margin = std::min(worst_margin, best - std::abs(action(loop)));
      }
    }
  }
  report(5, "m-fold identities", worst_id <= 1e-8 && worst_margin >= -1e-8,
         "max decomposition residual " + fmt(worst_id, 3) + ", min max-candidate margin " + fmt(worst_margin, 3));
}

void criterion_6() {
  Rng rng(2026);
  int violations = 0, sharp_violations = 0;
  double worst = -std::numeric_limits<double>::infinity(), worst_sharp = worst;
  for (int m = 3; m <= 8; ++m) {
    const double alpha = regular_polygon_alpha(m);
    for (int k = 0; k < 10000; ++k) {
      const Eigen::Index d = k % 2 ? 4 : 2;
      Mat x(d, m);
      if (k % 4 < 2) {
        for (int i = 0; i < m; ++i) x.col(i) = rng.normal_vector(d);
      } else {
        // perturbed regular polygon in the first complex line, where the sharp bound is tight
        const double eps = k % 4 == 2 ? 1e-3 : 1e-1;
        for (int i = 0; i < m; ++i) {
          Vec v = eps * rng.normal_vector(d);
          v(0) += std::cos(2 * kPi * i / m);
          v(d / 2) += std::sin(2 * kPi * i / m);
          x.col(i) = v;
        }
      }
      double perimeter = 0.0;
      for (int i = 0; i < m; ++i) perimeter += (x.col((i + 1) % m) - x.col(i)).norm();
      const double a = std::abs(polygon_action(x));
      const double bound = alpha / m * perimeter * perimeter;
      const double sharp = bound / m;  // equality for the regular m-gon
      worst = std::max(worst, a / bound - 1.0);
      worst_sharp = std::max(worst_sharp, a / sharp - 1.0);
      if (a > bound * (1 + 1e-12)) ++violations;
      if (a > sharp * (1 + 1e-12)) ++sharp_violations;
    }
  }
  report(6, "polygon isoperimetric bound", violations == 0 && sharp_violations == 0,
         std::to_string(violations) + " violations in 60000 polygons (max relative excess " + fmt(worst, 3) +
             "); sharp form alpha_m/m^2: " + std::to_string(sharp_violations) + " violations, max relative excess " +
             fmt(worst_sharp, 3));
}

void criterion_7() {
  Rng rng(2027);
  bool ok = true;
  std::ostringstream d;
  // centrally symmetric boundary loops on symmetric bodies
  const std::vector<ConvexBody> symmetric_bodies{
      ConvexBody::ball(2), ConvexBody::cube(2), ConvexBody::lp_ball(2, 3.0),  ConvexBody::ball(4),
      ConvexBody::cube(4), ConvexBody::cross_polytope(4), ConvexBody::lp_ball(4, 4.0),
      ConvexBody::ellipsoid_complex((Vec(2) << 1.0, 2.0).finished()), ConvexBody::ball(6), ConvexBody::cube(6),
      ConvexBody::ellipsoid_complex((Vec(3) << 1.0, 1.2, 1.5).finished())};
  double worst_sym = std::numeric_limits<double>::infinity();
  int loops = 0;
  for (const ConvexBody& body : symmetric_bodies) {
    for (int k = 0; k < 200; ++k, ++loops) {
      const DiscreteLoop loop = dense_boundary_loop(body, symmetric_fourier_loop(rng, body.dim(), 32, 1 + k % 3), 0.02);
      worst_sym = std::min(worst_sym, check_schaffer_bound(body, loop).margin);
    }
    GirthOptions go;
    go.samples = 1024;
    const GirthResult g = symmetric_girth(body, go);
    worst_sym = std::min(worst_sym, check_schaffer_bound(body, g.loop).margin);
    ++loops;
  }
  ok = ok && worst_sym >= -1e-2;
  d << loops << " symmetric boundary loops, min margin to 4+4/d " << fmt(worst_sym) << "; ";

  // sigma-normalized random loops
  Vec c(4);
  c << 0.3, -0.2, 0.1, 0.4;
  const std::vector<ConvexBody> bodies{ConvexBody::ball(2),          ConvexBody::cube(2),
                                       ConvexBody::ball(4),          ConvexBody::cube(4),
                                       ConvexBody::cross_polytope(4), ConvexBody::lp_ball(4, 4.0),
                                       ConvexBody::ellipsoid(Mat::Identity(4, 4), c), ConvexBody::ball(6)};
  double worst_gen = std::numeric_limits<double>::infinity();
  int count = 0;
  for (const ConvexBody& body : bodies) {
    const double bound = 2.0 + 2.0 / double(body.dim());
    for (int k = 0; k < 125; ++k, ++count) {
      const DiscreteLoop loop = fourier_loop(rng, body.dim(), 32, 1 + k % 4, 1.0);
      const double sigma = containment_score(loop, body).score;
      worst_gen = std::min(worst_gen, gauge_length(loop.scaled(1.0 / sigma), body) - bound);
    }
  }
  ok = ok && worst_gen >= -1e-2;
  d << count << " sigma-normalized loops, min margin to 2+2/d " << fmt(worst_gen) << "; ";

  const DiscreteLoop edge = loop_from_json(read_json_file(kFixtures + "/cube_edge_forth_back.json"));
  const ConvexBody cube = ConvexBody::cube(4);
  const double len = gauge_length(edge, cube);
  const double sigma = containment_score(edge, cube).score;
  ok = ok && len == 4.0 && std::abs(sigma - 1.0) <= 1e-9;
  d << "cube forth-and-back length " << fmt(len, 12) << " sigma " << fmt(sigma, 12);
  report(7, "length bounds", ok, d.str());
}

void criterion_8() {
  Rng rng(2028);
  bool ok = true;
  std::ostringstream d;
  for (int k = 0; k < 5; ++k) {
    const ConvexBody body = k % 2 ? ConvexBody::lp_ball(2, rng.uniform(1.2, 8.0))
                                  : ConvexBody::polytope_v(random_symmetric_vertices(rng, 2, 3 + k));
    GirthOptions go;
    go.seed = std::uint64_t(k);
    const double len = symmetric_girth(body, go).length;
    ok = ok && len >= 6.0 - 1e-2;
    d << fmt(len) << (k < 4 ? ", " : "");
  }
  report(8, "planar girth >= 6", ok, "lengths " + d.str());
}

int run_cli(const std::string& args) {
  const std::string cmd = "'" + kCli + "' " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

void criterion_9() {
  const fs::path a = fs::temp_directory_path() / "symcap_acceptance_c9a";
  const fs::path b = fs::temp_directory_path() / "symcap_acceptance_c9b";
  fs::remove_all(a);
  fs::remove_all(b);
  const std::string suite = "'" + kFixtures + "/suite.json'";
  const int sa = run_cli("--seed 7 --out '" + a.string() + "' verify " + suite);
  const int sb = run_cli("--seed 7 --out '" + b.string() + "' verify --jobs 4 " + suite);
  const bool csv_same = slurp(a / "report.csv") == slurp(b / "report.csv") && !slurp(a / "report.csv").empty();
  const bool json_same = slurp(a / "report.json") == slurp(b / "report.json") && !slurp(a / "report.json").empty();
  report(9, "determinism", sa == 0 && sb == 0 && csv_same && json_same,
         "exit codes " + std::to_string(sa) + "/" + std::to_string(sb) + ", report.csv " +
             (csv_same ? "identical" : "differs") + ", report.json " + (json_same ? "identical" : "differs"));
}

}  // namespace

int main() {
  const std::vector<void (*)()> criteria{criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                         criterion_6, criterion_7, criterion_8, criterion_9};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(int(i) + 1, "exception", false, e.what());
    }
  }
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
