#include "ntsurf/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "ntsurf/errors.hpp"

namespace ntsurf {

void ClassificationReport::add_node(double u, double v, std::vector<double> values) {
  NodeResiduals n;
  n.u = u;
  n.v = v;
  n.max = 0.0;
  for (double x : values) n.max = std::fmax(n.max, std::isnan(x) ? HUGE_VAL : std::fabs(x));
  n.values = std::move(values);
  nodes.push_back(std::move(n));
}

void ClassificationReport::finalize() {
  residual_max = 0.0;
  double sum = 0.0;
  for (const auto& n : nodes) {
    residual_max = std::fmax(residual_max, n.max);
    sum += n.max;
  }
  residual_mean = nodes.empty() ? 0.0 : sum / static_cast<double>(nodes.size());
  pass = residual_max <= tolerance;
  verdict = pass ? "pass" : "fail";
}

bool ClassificationReport::add_check(std::string name, double value, double tol) {
  const bool ok = value <= tol;
  checks.push_back({std::move(name), value, tol, ok});
  return ok;
}

std::vector<NodeResiduals> ClassificationReport::worst_nodes(std::size_t limit) const {
  std::vector<NodeResiduals> failed;
  for (const auto& n : nodes)
    if (!(n.max <= tolerance)) failed.push_back(n);
  std::stable_sort(failed.begin(), failed.end(),
                   [](const NodeResiduals& a, const NodeResiduals& b) { return a.max > b.max; });
  if (failed.size() > limit) failed.resize(limit);
  return failed;
}

nlohmann::json to_json(const ClassificationReport& r) {
  nlohmann::json failed = nlohmann::json::array();
  for (const auto& n : r.worst_nodes()) {
    nlohmann::json res = nlohmann::json::object();
    for (std::size_t k = 0; k < n.values.size() && k < r.residual_names.size(); ++k)
      res[r.residual_names[k]] = n.values[k];
    failed.push_back({{"u", n.u}, {"v", n.v}, {"residuals", res}});
  }
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  nlohmann::json tolerances = {{"residual", r.tolerance}};
  for (const auto& c : r.checks) tolerances[c.name] = c.tolerance;
  return {
      {"scenario", r.scenario},
      {"surface", r.surface},
      {"frame", r.frame},
      {"offsets", r.offsets},
      {"grid", {{"nu", r.grid.nu}, {"nv", r.grid.nv},
                {"u", {r.grid.box.u_min, r.grid.box.u_max}}, {"v", {r.grid.box.v_min, r.grid.box.v_max}}}},
      {"tolerances", tolerances},
      {"residual_names", r.residual_names},
      {"residual_max", r.residual_max},
      {"residual_mean", r.residual_mean},
      {"pass", r.pass},
      {"verdict", r.verdict},
      {"statistics", r.statistics},
      {"flags", r.flags},
      {"checks", checks},
      {"notes", r.notes},
      {"nodes_failed", failed},
  };
}

namespace {

ClassificationReport make_report(std::string scenario, const TransportSurface& ts, const GridSpec& grid,
                                 double tol) {
  grid.validate();
  if (!(tol >= 0.0)) throw ConfigError("tolerance must be non-negative");
  ClassificationReport r;
  r.scenario = std::move(scenario);
  r.surface = ts.base().name();
  r.frame = ts.frames().kind();
  r.offsets = ts.offsets().description();
  r.grid = grid;
  r.tolerance = tol;
  return r;
}

double max_deviation_from_mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double worst = 0.0;
  for (double x : xs) worst = std::fmax(worst, std::fabs(x - mean));
  return worst;
}

}  // namespace

ClassificationReport check_parallel(const TransportSurface& ts, const GridSpec& grid, double tol) {
  ClassificationReport r = make_report("parallel", ts, grid, tol);
  r.residual_names = {"f1_u-f2*T1", "f1_v-f2*T2", "f2_u+f1*T1", "f2_v+f1*T2"};
  std::vector<double> squared;
  squared.reserve(grid.size());
  for (int i = 0; i < grid.nu; ++i)
    for (int j = 0; j < grid.nv; ++j) {
      const double u = grid.u(i), v = grid.v(j);
      const OffsetSample f = ts.offsets().sample(u, v);
      const Torsion t = torsion_at(ts.frames(), u, v);
      r.add_node(u, v,
                 {f.f1_u - f.f2 * t.t1, f.f1_v - f.f2 * t.t2, f.f2_u + f.f1 * t.t1, f.f2_v + f.f1 * t.t2});
      squared.push_back(f.f1 * f.f1 + f.f2 * f.f2);
    }
  r.finalize();
  r.statistics["squared_sum_deviation"] = max_deviation_from_mean(squared);
  return r;
}

ClassificationReport check_evolute(const TransportSurface& ts, const GridSpec& grid, double tol) {
  ClassificationReport r = make_report("evolute", ts, grid, tol);
  r.residual_names = {"<xt_u,x_u>", "<xt_u,x_v>", "<xt_v,x_u>", "<xt_v,x_v>"};
  double mean_condition = 0.0;
  std::size_t orthogonal_nodes = 0;
  for (int i = 0; i < grid.nu; ++i)
    for (int j = 0; j < grid.nv; ++j) {
      const double u = grid.u(i), v = grid.v(j);
      const TangentPair t = ts.tangents_direct(u, v);
      const PointInvariants p = analyze_point(ts.base(), ts.frames(), u, v);
      r.add_node(u, v,
                 {dot(t.xu, p.jet.xu), dot(t.xu, p.jet.xv), dot(t.xv, p.jet.xu), dot(t.xv, p.jet.xv)});
      if (std::fabs(p.metric.g12) <= kOrthogonalMetricTolerance) {
        const auto f = ts.offsets().values(u, v);
        mean_condition = std::fmax(mean_condition, std::fabs(f[0] * p.mean.h1 + f[1] * p.mean.h2 - 1.0));
        ++orthogonal_nodes;
      }
    }
  r.finalize();
  if (orthogonal_nodes > 0)
    r.statistics["mean_condition"] = mean_condition;
  else
    r.notes.push_back("g12 != 0 at every node; mean-curvature condition not evaluated");
  r.statistics["orthogonal_metric_nodes"] = static_cast<double>(orthogonal_nodes);
  return r;
}

EvoluteResult solve_evolute_offsets(const PointInvariants& p) {
  if (std::fabs(p.metric.g12) > kOrthogonalMetricTolerance)
    throw GeometryError(fmt::format("evolute system needs g12 = 0; |g12| = {:.3g} at ({:.6g}, {:.6g})",
                                    std::fabs(p.metric.g12), p.u, p.v));
  const Mat2& c1 = p.weingarten.c[0];
  const Mat2& c2 = p.weingarten.c[1];

  // Rows: (1,1), (2,2), (1,2), (2,1) entries of f1 C1 + f2 C2 = I.
  Eigen::Matrix<double, 4, 2> a;
  a << c1(0, 0), c2(0, 0), c1(1, 1), c2(1, 1), c1(0, 1), c2(0, 1), c1(1, 0), c2(1, 0);
  Eigen::Vector4d b(1.0, 1.0, 0.0, 0.0);

  const Eigen::Matrix2d square = a.topRows<2>();
  const double scale = square.row(0).norm() * square.row(1).norm();
  EvoluteSolution s;
  Eigen::Vector2d f;
  if (scale > 0.0 && std::fabs(square.determinant()) > 1e-10 * scale) {
    f = square.partialPivLu().solve(b.head<2>());
  } else {
    s.degenerate = true;
    f = a.completeOrthogonalDecomposition().solve(b);
  }
  s.f1 = f(0);
  s.f2 = f(1);
  s.equation_residual = (a * f - b).cwiseAbs().maxCoeff();
  s.mean_residual = std::fabs(s.f1 * p.mean.h1 + s.f2 * p.mean.h2 - 1.0);
  if (!std::isfinite(s.f1) || !std::isfinite(s.f2))
    return NoSolution{"the evolute system has no finite solution"};
  if (s.equation_residual > kEvoluteEquationTolerance)
    return NoSolution{fmt::format("{} equations are inconsistent (residual {:.3g})",
                                  s.degenerate ? "singular diagonal" : "off-diagonal", s.equation_residual)};
  if (s.mean_residual > kEvoluteEquationTolerance)
    return NoSolution{fmt::format("f1 H1 + f2 H2 = 1 fails (residual {:.3g})", s.mean_residual)};
  return s;
}

EvoluteResult solve_evolute_offsets(const SurfacePatch& s, const FrameProvider& frames, double u, double v) {
  return solve_evolute_offsets(analyze_point(s, frames, u, v));
}

EvoluteResult solve_evolute_offsets(const SurfacePatch& s, double u, double v) {
  return solve_evolute_offsets(s, default_frame(s), u, v);
}

ClassificationReport check_H_parallel(const SurfacePatch& s, const FrameProvider& frames, const GridSpec& grid,
                                      double tol) {
  grid.validate();
  ClassificationReport r;
  r.scenario = "hparallel";
  r.surface = s.name();
  r.frame = frames.kind();
  r.offsets = "none";
  r.grid = grid;
  r.tolerance = tol;
  r.residual_names = {"H1_u-H2*T1", "H1_v-H2*T2", "H2_u+H1*T1", "H2_v+H1*T2"};
  const double h = kMeanCurvatureStep;
  auto mean = [&](double u, double v) { return analyze_point(s, frames, u, v).mean; };
  std::vector<double> hnorm2;
  hnorm2.reserve(grid.size());
  bool minimal = true;
  for (int i = 0; i < grid.nu; ++i)
    for (int j = 0; j < grid.nv; ++j) {
      const double u = grid.u(i), v = grid.v(j);
      const MeanCurvature c = mean(u, v);
      const MeanCurvature pu = mean(u + h, v), mu = mean(u - h, v);
      const MeanCurvature pv = mean(u, v + h), mv = mean(u, v - h);
      const Torsion t = torsion_at(frames, u, v);
      const double h1_u = (pu.h1 - mu.h1) / (2 * h), h1_v = (pv.h1 - mv.h1) / (2 * h);
      const double h2_u = (pu.h2 - mu.h2) / (2 * h), h2_v = (pv.h2 - mv.h2) / (2 * h);
      r.add_node(u, v, {h1_u - c.h2 * t.t1, h1_v - c.h2 * t.t2, h2_u + c.h1 * t.t1, h2_v + c.h1 * t.t2});
      hnorm2.push_back(c.h1 * c.h1 + c.h2 * c.h2);
      if (c.norm > tol) minimal = false;
    }
  r.finalize();
  r.statistics["hnorm2_deviation"] = max_deviation_from_mean(hnorm2);
  r.statistics["hnorm2_mean"] =
      std::accumulate(hnorm2.begin(), hnorm2.end(), 0.0) / static_cast<double>(hnorm2.size());
  r.flags["minimal"] = minimal;
  if (minimal) r.notes.push_back("H vanishes on the grid: the surface is minimal");
  return r;
}

HypersphereFit fit_hypersphere(const std::vector<Point4>& points) {
  if (points.size() < 5) throw ConfigError("hypersphere fit needs at least five points");
  // |x|^2 = 2 <x, c> + k, with k = r^2 - |c|^2.
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd a(n, 5);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point4& x = points[static_cast<std::size_t>(i)];
    for (int k = 0; k < 4; ++k) a(i, k) = 2.0 * x.c[static_cast<std::size_t>(k)];
    a(i, 4) = 1.0;
    b(i) = dot(x, x);
  }
  const Eigen::VectorXd sol = a.completeOrthogonalDecomposition().solve(b);
  HypersphereFit fit;
  for (int k = 0; k < 4; ++k) fit.center.c[static_cast<std::size_t>(k)] = sol(k);
  std::vector<double> d2;
  d2.reserve(points.size());
  for (const auto& x : points) {
    const Vec4 e = x - fit.center;
    d2.push_back(dot(e, e));
  }
  fit.mean = std::accumulate(d2.begin(), d2.end(), 0.0) / static_cast<double>(d2.size());
  double var = 0.0;
  for (double x : d2) var += (x - fit.mean) * (x - fit.mean);
  fit.stddev = std::sqrt(var / static_cast<double>(d2.size()));
  fit.radius = std::sqrt(std::fmax(fit.mean, 0.0));
  return fit;
}

ClassificationReport chen_dichotomy(const SurfacePatch& s, const FrameProvider& frames, const GridSpec& grid,
                                    double tol) {
  ClassificationReport r = check_H_parallel(s, frames, grid, tol);
  r.scenario = "chen";
  if (!r.pass) {
    r.verdict = std::string(kNotHParallel);
    r.pass = true;
    r.notes.push_back("H is not parallel in the normal bundle; the dichotomy does not apply");
    return r;
  }
  if (r.flags["minimal"]) {
    r.verdict = std::string(kHZero);
    r.notes.push_back("H vanishes; the dichotomy needs H != 0");
    return r;
  }

  std::vector<Point4> points;
  points.reserve(grid.size());
  double kn_max = 0.0;
  for (int i = 0; i < grid.nu; ++i)
    for (int j = 0; j < grid.nv; ++j) {
      const PointInvariants p = analyze_point(s, frames, grid.u(i), grid.v(j));
      points.push_back(p.jet.x);
      kn_max = std::fmax(kn_max, std::fabs(p.kn));
    }
  const HypersphereFit fit = fit_hypersphere(points);
  const bool sphere = fit.mean > 0.0 && fit.stddev <= tol * fit.mean;
  const bool flat = kn_max <= tol;
  r.flags["hypersphere"] = sphere;
  r.flags["flat"] = flat;
  r.statistics["kn_max"] = kn_max;
  r.statistics["sphere_radius"] = fit.radius;
  r.statistics["sphere_stddev"] = fit.stddev;
  if (flat) {
    r.verdict = std::string(kFlatNormalBundle);
  } else if (sphere) {
    r.verdict = std::string(kMinimalInHypersphere);
  } else {
    r.verdict = std::string(kCounterexample);
    r.pass = false;
    r.notes.push_back(fmt::format(
        "neither branch holds: max |K_N| = {:.6g}, hypersphere spread {:.6g}; indicates a numerical fault",
        kn_max, fit.stddev));
  }
  return r;
}

}  // namespace ntsurf
