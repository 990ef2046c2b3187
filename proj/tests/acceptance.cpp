// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "ntsurf/classify.hpp"
#include "ntsurf/errors.hpp"
#include "support.hpp"

using namespace ntsurf;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
const ParamMap kVr11{{"lambda", 1.0}, {"mu", 1.0}};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Evaluates [0, 2pi) with n nodes: the last node stops one step short of 2pi.
double half_open_end(int n) { return kTwoPi * (n - 1) / n; }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  const int code = cli::run({"invariants", "--surface", "vranceanu", "--param", "lambda=1", "--param", "mu=1", "--grid",
                             "50x50", "--range", fmt::format("u:0,{:.17g}", half_open_end(50)), "v:0,1"},
                            out, err);
  const double elapsed = seconds_since(t0);
  o.require(code == 0, fmt::format("exit {} {}", code, err.str()));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  const auto header = split(line, ',');
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };
  const std::size_t ck = col("K"), ckn = col("KN");
  double max_k = 0.0, max_kn = 0.0;
  int rows = 0;
  while (std::getline(in, line)) {
    const auto cells = split(line, ',');
    max_k = std::fmax(max_k, std::fabs(std::stod(cells.at(ck))));
    max_kn = std::fmax(max_kn, std::fabs(std::stod(cells.at(ckn))));
    ++rows;
  }
  o.require(rows == 2500, fmt::format("{} rows", rows));
  o.require(max_k <= 1e-8, fmt::format("max|K| = {:.3g}", max_k));
  o.require(max_kn <= 1e-8, fmt::format("max|K_N| = {:.3g}", max_kn));
  o.require(elapsed < 1.0, fmt::format("runtime {:.3f} s", elapsed));
  if (o.pass) o.detail = fmt::format("max|K| = {:.2e}, max|K_N| = {:.2e}, {:.3f} s", max_k, max_kn, elapsed);
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double lambda = 1.0, mu = 1.0;
  const SurfacePatch s = make_catalog_surface("vranceanu", kVr11);
  const FrameProvider frames = default_frame(s);
  const TransportSurface ts(s, frames, evolute_offsets(s, frames));
  const GridSpec g(32, 32, Domain{0, half_open_end(32), 0, 1});
  double dist = 0.0, off = 0.0, ode = 0.0;
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) {
      const double u = g.u(i), v = g.v(j);
      const double a = lambda * mu * std::exp(mu * v);
      const Point4 closed(-std::sin(v) * std::cos(u) * a, -std::sin(v) * std::sin(u) * a, std::cos(v) * std::cos(u) * a,
                          std::cos(v) * std::sin(u) * a);
      dist = std::fmax(dist, max_abs(ts.position(u, v) - closed));

      const double r = lambda * std::exp(mu * v), dr = mu * r;
      const auto f = ts.offsets().values(u, v);
      off = std::fmax(off, std::fmax(std::fabs(f[0] - std::sqrt(r * r + dr * dr)), std::fabs(f[1])));

      // r = |x|; r r'' - r'^2 from the base jet.
      const Jet2 jet = s.jet(u, v);
      const double xx = dot(jet.x, jet.x), xxv = dot(jet.x, jet.xv);
      ode = std::fmax(ode, std::fabs(dot(jet.xv, jet.xv) + dot(jet.x, jet.xvv) - 2 * xxv * xxv / xx));
    }
  const double elapsed = seconds_since(t0);
  o.require(dist <= 1e-8, fmt::format("closed-form distance {:.3g}", dist));
  o.require(off <= 1e-9, fmt::format("offset error {:.3g}", off));
  o.require(ode <= 1e-12, fmt::format("ODE residual {:.3g}", ode));
  o.require(elapsed < 1.0, fmt::format("runtime {:.3f} s", elapsed));
  if (o.pass)
    o.detail = fmt::format("distance {:.2e}, offset error {:.2e}, ODE residual {:.2e}, {:.3f} s", dist, off, ode, elapsed);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const SurfacePatch s = make_catalog_surface("complex_curve");
  int none = 0, sampled = 0;
  for (auto [u, v] : test_support::random_points(s.domain(), 25, 20240601)) {
    if (!s.jet(u, v).regular()) continue;
    ++sampled;
    none += std::holds_alternative<NoSolution>(solve_evolute_offsets(s, u, v));
  }
  o.require(sampled == 25, fmt::format("{} regular samples", sampled));
  o.require(none == sampled, fmt::format("NoSolution at {} of {} points", none, sampled));

  // At (1,0) only the first normal bends, so the diagonal equations read
  // f1 c1^11 = 1 and f1 c1^22 = 1 separately.
  const PointInvariants p = analyze_point(s, 1.0, 0.0);
  const double f_a = 1 / p.weingarten(0, 0, 0), f_b = 1 / p.weingarten(0, 1, 1);
  const double hand = 5 * std::sqrt(5.0) / 2;
  o.require(std::fabs(std::fabs(f_a) - hand) <= 1e-10 && std::fabs(f_a + f_b) <= 1e-10,
            fmt::format("diagonal solutions {:.12g}, {:.12g}", f_a, f_b));
  o.require(std::holds_alternative<NoSolution>(solve_evolute_offsets(s, 1.0, 0.0)), "solver accepted (1,0)");
  if (o.pass) o.detail = fmt::format("NoSolution at {}/{} points; f1 = {:.6f} vs {:.6f} at (1,0)", none, sampled, f_a, f_b);
  return o;
}

Outcome criterion4() {
  Outcome o;
  int solved = 0;
  double worst = 0.0;
  for (const auto& name : catalog_names()) {
    const SurfacePatch s = make_catalog_surface(name);
    const GridSpec g(20, 20, s.domain());
    std::vector<std::pair<double, double>> pts = test_support::random_points(s.domain(), 100, 4);
    for (int i = 0; i < g.nu; ++i)
      for (int j = 0; j < g.nv; ++j) pts.emplace_back(g.u(i), g.v(j));
    for (auto [u, v] : pts) {
      const PointInvariants p = analyze_point(s, u, v);
      if (std::fabs(p.metric.g12) > kOrthogonalMetricTolerance) continue;
      const auto r = solve_evolute_offsets(p);
      if (!std::holds_alternative<EvoluteSolution>(r)) continue;
      const auto& e = std::get<EvoluteSolution>(r);
      const MeanCurvature h = mean_curvature(p.sff, p.metric);
      const double dev = std::fabs(e.f1 * h.h1 + e.f2 * h.h2 - 1);
      worst = std::fmax(worst, dev);
      ++solved;
      if (dev > 1e-8) o.require(false, fmt::format("{} at ({:.4g},{:.4g}): {:.3g}", name, u, v, dev));
    }
  }
  o.require(solved > 0, "solver never succeeded");
  if (o.pass) o.detail = fmt::format("{} solved points, max |f1 H1 + f2 H2 - 1| = {:.2e}", solved, worst);
  return o;
}

Outcome criterion5() {
  Outcome o;
  int passing = 0, scenarios = 0;
  double worst = 0.0;
  for (const auto& name : catalog_names()) {
    const SurfacePatch s = make_catalog_surface(name);
    const GridSpec g(16, 16, s.domain());
    const FrameProvider frames = default_frame(s);
    double max_kn = 0.0;
    for (const CurvatureReport& r : invariant_grid(s, frames, g)) max_kn = std::fmax(max_kn, std::fabs(r.kn));
    for (const char* spec : {"evolute", "constant:1,1", "constant:0.5,-0.25", "htype", "ktype"}) {
      std::optional<ClassificationReport> r;
      try {
        r = check_evolute(TransportSurface(s, frames, parse_offset_spec(spec, s, frames)), g, 1e-5);
      } catch (const GeometryError&) {
        continue;
      }
      ++scenarios;
      if (!r->pass) continue;
      ++passing;
      worst = std::fmax(worst, max_kn);
      if (max_kn > 1e-4) o.require(false, fmt::format("{} {}: max|K_N| = {:.3g}", name, spec, max_kn));
    }
  }
  o.require(passing > 0, "no scenario passed check_evolute");
  if (o.pass) o.detail = fmt::format("{} of {} scenarios pass; their max|K_N| = {:.2e}", passing, scenarios, worst);
  return o;
}

Outcome criterion6() {
  Outcome o;
  double err = 0.0;
  auto near = [&](double got, double want, const char* what) {
    err = std::fmax(err, std::fabs(got - want));
    if (std::fabs(got - want) > 1e-10) o.require(false, fmt::format("{} = {:.15g}, want {:.15g}", what, got, want));
  };
  const SurfacePatch c = make_catalog_surface("clifford_torus");
  for (auto [u, v] : test_support::random_points(c.domain(), 10, 6)) {
    const PointInvariants p = analyze_point(c, u, v);
    near(p.metric.g11, 1, "clifford g11");
    near(p.metric.g12, 0, "clifford g12");
    near(p.metric.g22, 1, "clifford g22");
    near(p.sff(0, 0, 0), 1, "clifford c11^1");
    near(p.sff(1, 1, 1), 1, "clifford c22^2");
    near(p.gauss.k, 0, "clifford K");
    near(p.mean.h1, 0.5, "clifford H1");
    near(p.mean.h2, 0.5, "clifford H2");
    near(p.mean.norm, std::numbers::sqrt2 / 2, "clifford |H|");
    near(p.kn, 0, "clifford K_N");
  }
  const PointInvariants z = analyze_point(make_catalog_surface("complex_curve"), 1.0, 0.0);
  near(z.gauss.k, -8.0 / 125, "complex_curve K");
  near(std::fabs(z.kn), 8.0 / 125, "complex_curve |K_N|");
  near(z.mean.h1, 0, "complex_curve H1");
  near(z.mean.h2, 0, "complex_curve H2");
  if (o.pass) o.detail = fmt::format("max error {:.2e}", err);
  return o;
}

Outcome criterion7() {
  Outcome o;
  double exact = 0.0, fd = 0.0;
  for (const auto& name : catalog_names()) {
    const SurfacePatch s = make_catalog_surface(name);
    const FrameProvider frames = default_frame(s);
    for (auto [u, v] : test_support::random_points(s.domain(), 25, 7)) {
      const PointInvariants p = analyze_point(s, frames, u, v);
      const GaussianCurvature kw = gaussian_curvature(p.weingarten);
      const MeanCurvature hw = mean_curvature(p.weingarten);
      const double e = std::max({std::fabs(kw.k1 - p.gauss.k1), std::fabs(kw.k2 - p.gauss.k2),
                                 std::fabs(kw.k - p.gauss.k), std::fabs(hw.h1 - p.mean.h1), std::fabs(hw.h2 - p.mean.h2)});
      const double d = std::fabs(normal_curvature_fd(s, frames, u, v) - p.kn);
      exact = std::fmax(exact, e);
      fd = std::fmax(fd, d);
      if (e > 1e-10) o.require(false, fmt::format("{} K/H routes differ by {:.3g}", name, e));
      if (d > 1e-3) o.require(false, fmt::format("{} K_N routes differ by {:.3g}", name, d));
    }
  }
  if (o.pass) o.detail = fmt::format("K/H routes {:.2e}, K_N routes {:.2e}", exact, fd);
  return o;
}

Outcome criterion8() {
  Outcome o;
  double worst = 0.0;
  for (const auto& name : catalog_names()) {
    const SurfacePatch s = make_catalog_surface(name);
    const FrameProvider frames = default_frame(s);
    for (auto [u, v] : test_support::random_points(s.domain(), 25, 8)) {
      const PointInvariants p = analyze_point(s, frames, u, v);
      const FrameJet fj = frame_derivatives(frames, u, v);
      const double r = std::max({gauss_residual(p.jet, p.gamma, p.sff, p.frame),
                                 weingarten_residual(p.jet, fj, p.weingarten, torsion_coefficients(fj)),
                                 compatibility_residual(p.jet, p.sff, fj)});
      worst = std::fmax(worst, r);
      if (r > 1e-5) o.require(false, fmt::format("{} at ({:.4g},{:.4g}): {:.3g}", name, u, v, r));
    }
  }
  if (o.pass) o.detail = fmt::format("max residual {:.2e}", worst);
  return o;
}

Outcome criterion9() {
  Outcome o;
  double worst = 0.0, identity = 0.0;
  int pairs = 0;
  for (const auto& name : catalog_names()) {
    const SurfacePatch s = make_catalog_surface(name);
    const FrameProvider frames = default_frame(s);
    for (const char* spec : {"constant:0.3,-0.2", "custom:0.2*sin(u);0.1*cos(v)+u*v/10", "htype", "ktype", "evolute"}) {
      std::optional<TransportSurface> ts;
      try {
        ts.emplace(s, frames, parse_offset_spec(spec, s, frames));
        ts->position(s.domain().u_min + 0.3 * s.domain().u_extent(), s.domain().v_min + 0.6 * s.domain().v_extent());
      } catch (const GeometryError&) {
        continue;  // no evolute offsets on this surface
      }
      ++pairs;
      for (auto [u, v] : test_support::random_points(s.domain(), 25, 9, 0.05)) {
        const TangentPair d = ts->tangents_direct(u, v), e = ts->tangents_expansion(u, v);
        const double r = std::fmax(max_abs(d.xu - e.xu), max_abs(d.xv - e.xv));
        worst = std::fmax(worst, r);
        if (r > 1e-4) o.require(false, fmt::format("{} {} at ({:.4g},{:.4g}): {:.3g}", name, spec, u, v, r));
      }
    }
    const TransportSurface zero(s, frames, constant_offsets(0, 0));
    for (auto [u, v] : test_support::random_points(s.domain(), 25, 10)) {
      const Jet2 j = s.jet(u, v);
      const TangentPair e = zero.tangents_expansion(u, v);
      identity = std::max({identity, max_abs(zero.position(u, v) - j.x), max_abs(e.xu - j.xu), max_abs(e.xv - j.xv)});
    }
  }
  o.require(identity <= 1e-10, fmt::format("zero-offset identity {:.3g}", identity));
  if (o.pass) o.detail = fmt::format("{} surface/offset pairs, max difference {:.2e}; identity {:.2e}", pairs, worst, identity);
  return o;
}

Outcome criterion10() {
  Outcome o;
  int nonminimal = 0;
  double worst = 0.0, clifford = -1.0;
  for (const auto& name : catalog_names()) {
    const SurfacePatch s = make_catalog_surface(name);
    const ClassificationReport r = check_H_parallel(s, default_frame(s), GridSpec(24, 24, s.domain()), 1e-6);
    if (!r.pass || r.flags.at("minimal")) continue;
    ++nonminimal;
    const double dev = r.statistics.at("hnorm2_deviation");
    worst = std::fmax(worst, dev);
    if (dev > 1e-6) o.require(false, fmt::format("{}: deviation {:.3g}", name, dev));
    if (name == "clifford_torus") clifford = r.statistics.at("hnorm2_mean");
  }
  o.require(std::fabs(clifford - 0.5) <= 1e-12, fmt::format("clifford |H|^2 mean {:.17g}", clifford));
  if (o.pass) o.detail = fmt::format("{} H-parallel non-minimal surfaces, max deviation {:.2e}; clifford |H|^2 = {:.17g}",
                                     nonminimal, worst, clifford);
  return o;
}

Outcome criterion11() {
  Outcome o;
  test_support::ExpressionGenerator gen(11);
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  const expr::ParamSet params{"a", "b"};
  int accepted = 0, attempts = 0, bad_derivative = 0, bad_round_trip = 0, ill_conditioned = 0;
  while (accepted < 200 && attempts < 4000) {
    ++attempts;
    const expr::Expression e = expr::parse_expression(gen(6), params);
    const expr::Expression du = expr::differentiate(e, "u");
    const expr::Expression back = expr::parse_expression(expr::to_string(e), params);
    int points = 0;
    for (int tries = 0; tries < 400 && points < 20; ++tries) {
      const expr::Bindings at{{"u", coord(rng)}, {"v", coord(rng)}, {"a", coord(rng)}, {"b", coord(rng)}};
      const auto f0 = test_support::try_eval(e, at), d = test_support::try_eval(du, at, 1e4);
      if (!f0 || !d) continue;
      const auto fd = test_support::central_difference(e, at, "u", 1e-6);
      if (!fd) {
        ++ill_conditioned;
        continue;
      }
      ++points;
      bad_derivative += std::fabs(*d - *fd) > 1e-5 * (1 + std::fabs(*d));
    }
    for (int k = 0; k < 100; ++k) {
      const expr::Bindings b{{"u", coord(rng)}, {"v", coord(rng)}, {"a", coord(rng)}, {"b", coord(rng)}};
      const auto x = test_support::try_eval(e, b, HUGE_VAL), y = test_support::try_eval(back, b, HUGE_VAL);
      bad_round_trip += x.has_value() != y.has_value() || (x && *x != *y);
    }
    if (points == 20) ++accepted;
  }
  o.require(accepted == 200, fmt::format("only {} expressions with 20 valid points", accepted));
  o.require(bad_derivative == 0, fmt::format("{} derivative mismatches", bad_derivative));
  o.require(bad_round_trip == 0, fmt::format("{} round-trip mismatches", bad_round_trip));
  if (o.pass) o.detail = fmt::format("200 expressions x 20 points ({} drawn, {} ill-conditioned samples skipped), round trip x 100 points",
                                     attempts, ill_conditioned);
  return o;
}

Outcome criterion12() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "ntsurf_acceptance_12";
  fs::create_directories(dir);
  const std::string mesh = (dir / "clifford_evolute.obj").string();
  std::ostringstream out, err;
  const int code = cli::run({"transport", "--surface", "clifford_torus", "--offsets", "evolute", "--grid", "16x16",
                             "--out", mesh},
                            out, err);
  o.require(code == 3, fmt::format("exit code {}", code));
  std::ifstream report_file(mesh + ".regularity.json");
  const nlohmann::json report = nlohmann::json::parse(report_file);
  const int degenerate = report.at("degenerate_count").get<int>();
  o.require(degenerate == 256, fmt::format("{} of 256 nodes degenerate", degenerate));
  std::ifstream obj(mesh);
  std::string tag;
  int vertices = 0;
  double spread = 0.0;
  std::array<double, 3> first{};
  while (obj >> tag) {
    if (tag != "v") {
      std::getline(obj, tag);
      continue;
    }
    std::array<double, 3> p{};
    obj >> p[0] >> p[1] >> p[2];
    if (vertices++ == 0) first = p;
    for (int k = 0; k < 3; ++k) spread = std::fmax(spread, std::fabs(p[k] - first[k]));
  }
  o.require(vertices == 256, fmt::format("{} vertices", vertices));
  o.require(spread <= 1e-12, fmt::format("vertex spread {:.3g}", spread));
  fs::remove_all(dir);
  if (o.pass) o.detail = fmt::format("exit 3, {}/256 degenerate, vertex spread {:.1e}", degenerate, spread);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"flat Vranceanu invariants", criterion1},
      {"Vranceanu evolute closed form", criterion2},
      {"no evolutes on complex_curve", criterion3},
      {"evolute mean-curvature condition", criterion4},
      {"evolute implies flat normal bundle", criterion5},
      {"hand-oracle invariants", criterion6},
      {"formula cross-validation", criterion7},
      {"Gauss and Weingarten residuals", criterion8},
      {"transport tangent expansion", criterion9},
      {"H-parallel norm constancy", criterion10},
      {"expression parser suite", criterion11},
      {"degeneracy detection", criterion12},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = fmt::format("exception: {}", e.what());
    }
    failures += !o.pass;
    std::cout << fmt::format("{} {:>2} {}: {}\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail);
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
