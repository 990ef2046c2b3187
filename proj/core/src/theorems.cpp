#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "ntsurf/classify.hpp"
#include "ntsurf/errors.hpp"

namespace ntsurf {

namespace {

constexpr int kDefaultGrid = 32;
constexpr double kFlatTolerance = 1e-4;
constexpr double kOffsetMatchTolerance = 1e-9;
constexpr double kOdeTolerance = 1e-12;

// Parallel offsets for the analytic Vranceanu frame with mu = 1, where
// T1 = -1/sqrt(2) and T2 = 0.
constexpr const char* kRotatingOffsets = "custom:2*cos(0.70710678118654752*u);2*sin(0.70710678118654752*u)";

struct Scenario {
  SurfacePatch surface;
  GridSpec grid;
  double tol;
};

Scenario setup(const TheoremConfig& c, std::string_view default_surface, double default_tol,
               std::optional<Domain> default_domain = std::nullopt) {
  SurfacePatch s = c.surface ? *c.surface : make_catalog_surface(default_surface);
  if (c.domain)
    s = s.with_domain(*c.domain);
  else if (default_domain && s.name() == default_surface)
    s = s.with_domain(*default_domain);
  GridSpec g{c.nu.value_or(kDefaultGrid), c.nv.value_or(kDefaultGrid), s.domain()};
  g.validate();
  const double tol = c.tolerance.value_or(default_tol);
  if (!(tol >= 0.0)) throw ConfigError("tolerance must be non-negative");
  return {s, g, tol};
}

OffsetField offsets_or(const TheoremConfig& c, std::string_view fallback, const SurfacePatch& s,
                       const FrameProvider& frames) {
  return parse_offset_spec(c.offsets ? std::string_view(*c.offsets) : fallback, s, frames, c.offset_params);
}

void fixed_offsets_note(ClassificationReport& r, const TheoremConfig& c, std::string_view kind) {
  if (c.offsets) r.notes.push_back(fmt::format("scenario uses {} offsets; --offsets ignored", kind));
}

// Overall outcome from the recorded checks.
void conclude(ClassificationReport& r) {
  r.pass = std::all_of(r.checks.begin(), r.checks.end(), [](const Check& k) { return k.pass; });
  r.verdict = r.pass ? "pass" : "fail";
}

void vacuous(ClassificationReport& r, std::string why) {
  r.pass = true;
  r.verdict = "vacuous";
  r.notes.push_back(std::move(why));
}

double equivalence(bool a, bool b) { return a == b ? 0.0 : 1.0; }

struct GridScan {
  double kn_max = 0.0, kn_u = 0.0, kn_v = 0.0;
  double g12_max = 0.0;
  double hnorm_min = HUGE_VAL, hnorm_max = 0.0;
};

GridScan scan(const SurfacePatch& s, const FrameProvider& frames, const GridSpec& g) {
  GridScan out;
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) {
      const PointInvariants p = analyze_point(s, frames, g.u(i), g.v(j));
      if (std::fabs(p.kn) > out.kn_max) {
        out.kn_max = std::fabs(p.kn);
        out.kn_u = p.u;
        out.kn_v = p.v;
      }
      out.g12_max = std::fmax(out.g12_max, std::fabs(p.metric.g12));
      out.hnorm_min = std::fmin(out.hnorm_min, p.mean.norm);
      out.hnorm_max = std::fmax(out.hnorm_max, p.mean.norm);
    }
  return out;
}

double grid_diameter(const GridSpec& g) { return std::hypot(g.box.u_extent(), g.box.v_extent()); }

ClassificationReport relabel(ClassificationReport r, std::string_view id) {
  r.scenario = std::string(id);
  return r;
}

ClassificationReport theorem_parallel_flat(const TheoremConfig& c) {
  const Scenario sc = setup(c, "vranceanu", 1e-3);
  const FrameProvider base = default_frame(sc.surface);
  const GridScan gs = scan(sc.surface, base, sc.grid);
  if (gs.kn_max > kFlatNormalTolerance) {
    ClassificationReport r;
    r.scenario = "T3";
    r.surface = sc.surface.name();
    r.frame = base.kind();
    r.offsets = c.offsets.value_or("constant:1,0.5");
    r.grid = sc.grid;
    r.tolerance = sc.tol;
    r.statistics["kn_max"] = gs.kn_max;
    r.add_check("flat_normal_bundle", gs.kn_max, kFlatNormalTolerance);
    r.notes.push_back(fmt::format("normal bundle is not flat: K_N = {:.6g} at ({:.6g}, {:.6g}); "
                                  "no torsion-free frame, so no parallel transport exists",
                                  gs.kn_max, gs.kn_u, gs.kn_v));
    r.residual_max = gs.kn_max;
    r.residual_mean = gs.kn_max;
    conclude(r);
    return r;
  }
  const ParallelFrameField pf = parallelize_frame(sc.surface, base, sc.grid);
  const FrameProvider frames = pf.provider();
  const TransportSurface ts(sc.surface, frames, offsets_or(c, "constant:1,0.5", sc.surface, frames));
  ClassificationReport r = relabel(check_parallel(ts, sc.grid, sc.tol), "T3");
  r.statistics["kn_max"] = gs.kn_max;
  r.add_check("flat_normal_bundle", gs.kn_max, kFlatNormalTolerance);
  r.add_check("parallel_system", r.residual_max, sc.tol);
  conclude(r);
  return r;
}

ClassificationReport theorem_htype_parallel(const TheoremConfig& c) {
  const Scenario sc = setup(c, "clifford_torus", 1e-5);
  const FrameProvider frames = default_frame(sc.surface);
  const ClassificationReport hp = check_H_parallel(sc.surface, frames, sc.grid, sc.tol);
  const TransportSurface ts(sc.surface, frames, htype_offsets(sc.surface, frames));
  ClassificationReport r = relabel(check_parallel(ts, sc.grid, sc.tol), "T4");
  fixed_offsets_note(r, c, "H-type");
  r.statistics["hnorm2_deviation"] = hp.statistics.at("hnorm2_deviation");
  r.statistics["H_parallel_residual"] = hp.residual_max;
  if (hp.flags.at("minimal")) {
    vacuous(r, "surface is minimal; the statement needs a non-minimal surface");
    return r;
  }
  const bool parallel = r.residual_max <= sc.tol;
  r.statistics["htype_parallel_residual"] = r.residual_max;
  r.add_check("equivalence", equivalence(parallel, hp.pass), 0.0);
  conclude(r);
  return r;
}

ClassificationReport theorem_ktype_parallel(const TheoremConfig& c) {
  const Scenario sc = setup(c, "sphere", 1e-5);
  const FrameProvider frames = default_frame(sc.surface);
  const TransportSurface ts(sc.surface, frames, ktype_offsets(sc.surface, frames));
  ClassificationReport r = relabel(check_parallel(ts, sc.grid, sc.tol), "T5");
  fixed_offsets_note(r, c, "K-type");
  std::vector<double> sumsq, sum;
  double k_min = HUGE_VAL;
  for (int i = 0; i < sc.grid.nu; ++i)
    for (int j = 0; j < sc.grid.nv; ++j) {
      const GaussianCurvature k = analyze_point(sc.surface, frames, sc.grid.u(i), sc.grid.v(j)).gauss;
      sumsq.push_back(k.k1 * k.k1 + k.k2 * k.k2);
      sum.push_back(k.k);
      k_min = std::fmin(k_min, std::fabs(k.k));
    }
  auto spread = [](const std::vector<double>& xs) {
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    return *hi - *lo;
  };
  const double sumsq_spread = spread(sumsq);
  r.statistics["sum_K_squared_spread"] = sumsq_spread;
  r.statistics["sum_K_spread"] = spread(sum);
  r.statistics["sum_K_squared"] = sumsq.front();
  if (k_min <= sc.tol) {
    vacuous(r, "Gaussian curvature vanishes somewhere on the grid; the statement needs a non-flat surface");
    return r;
  }
  const bool parallel = r.residual_max <= sc.tol;
  r.statistics["ktype_parallel_residual"] = r.residual_max;
  r.add_check("equivalence", equivalence(parallel, sumsq_spread <= sc.tol), 0.0);
  conclude(r);
  return r;
}

ClassificationReport theorem_evolute_mean(const TheoremConfig& c) {
  const Scenario sc = setup(c, "vranceanu", 1e-5);
  const FrameProvider frames = default_frame(sc.surface);
  const TransportSurface ts(sc.surface, frames, offsets_or(c, "evolute", sc.surface, frames));
  const GridScan gs = scan(sc.surface, frames, sc.grid);
  ClassificationReport r = relabel(check_evolute(ts, sc.grid, sc.tol), "T7");
  if (!r.add_check("orthogonal_metric", gs.g12_max, kOrthogonalMetricTolerance)) {
    r.pass = false;
    r.verdict = "fail";
    r.notes.push_back("g12 != 0 on the grid; the statement assumes an orthogonal parametrisation");
    return r;
  }
  // The solver's own solutions satisfy the mean-curvature condition.
  double solver_worst = 0.0;
  std::size_t solved = 0;
  for (int i = 0; i < sc.grid.nu; ++i)
    for (int j = 0; j < sc.grid.nv; ++j) {
      const EvoluteResult e = solve_evolute_offsets(sc.surface, frames, sc.grid.u(i), sc.grid.v(j));
      if (const auto* s = std::get_if<EvoluteSolution>(&e)) {
        solver_worst = std::fmax(solver_worst, s->mean_residual);
        ++solved;
      }
    }
  r.statistics["solved_nodes"] = static_cast<double>(solved);
  if (solved > 0) r.add_check("solver_mean_condition", solver_worst, kEvoluteEquationTolerance);
  if (r.residual_max > sc.tol) {
    r.notes.push_back("transport is not an evolute on this grid; forward direction not exercised");
    conclude(r);
    if (r.pass) r.verdict = "vacuous";
    return r;
  }
  r.add_check("evolute", r.residual_max, sc.tol);
  r.add_check("mean_condition", r.statistics.at("mean_condition"), sc.tol);
  r.notes.push_back("only the forward direction (evolute implies f1 H1 + f2 H2 = 1) is asserted");
  conclude(r);
  return r;
}

ClassificationReport theorem_evolute_flat(const TheoremConfig& c) {
  const Scenario sc = setup(c, "vranceanu", 1e-5);
  const FrameProvider frames = default_frame(sc.surface);
  const TransportSurface ts(sc.surface, frames, offsets_or(c, "evolute", sc.surface, frames));
  ClassificationReport r = relabel(check_evolute(ts, sc.grid, sc.tol), "T8");
  const GridScan gs = scan(sc.surface, frames, sc.grid);
  r.statistics["kn_max"] = gs.kn_max;
  if (r.residual_max > sc.tol) {
    vacuous(r, "transport is not an evolute on this grid; nothing to assert");
    return r;
  }
  r.add_check("evolute", r.residual_max, sc.tol);
  r.add_check("flat_normal_bundle", gs.kn_max, kFlatTolerance);
  conclude(r);
  return r;
}

ClassificationReport theorem_minimal_no_evolute(const TheoremConfig& c) {
  const Scenario sc = setup(c, "complex_curve", 1e-8);
  const FrameProvider frames = default_frame(sc.surface);
  ClassificationReport r;
  r.scenario = "T9";
  r.surface = sc.surface.name();
  r.frame = frames.kind();
  r.offsets = "evolute";
  r.grid = sc.grid;
  r.tolerance = 0.0;
  r.residual_names = {"solved"};
  if (c.samples < 1) throw ConfigError("sample count must be positive");
  std::mt19937_64 rng(c.seed);
  const Domain& d = sc.surface.domain();
  std::uniform_real_distribution<double> du(d.u_min, d.u_max), dv(d.v_min, d.v_max);
  double hnorm_max = 0.0;
  std::size_t skipped = 0;
  for (int k = 0; k < c.samples; ++k) {
    const double u = du(rng), v = dv(rng);
    const PointInvariants p = analyze_point(sc.surface, frames, u, v);
    hnorm_max = std::fmax(hnorm_max, p.mean.norm);
    try {
      const EvoluteResult e = solve_evolute_offsets(p);
      r.add_node(u, v, {std::holds_alternative<EvoluteSolution>(e) ? 1.0 : 0.0});
    } catch (const GeometryError&) {
      ++skipped;
    }
  }
  r.finalize();
  r.statistics["hnorm_max"] = hnorm_max;
  r.statistics["samples"] = static_cast<double>(c.samples);
  r.statistics["skipped_g12"] = static_cast<double>(skipped);
  if (skipped > 0) r.notes.push_back(fmt::format("{} sample points skipped: g12 != 0", skipped));
  if (hnorm_max > sc.tol) {
    vacuous(r, fmt::format("surface is not minimal (max |H| = {:.6g})", hnorm_max));
    return r;
  }
  r.add_check("minimal", hnorm_max, sc.tol);
  r.add_check("evolute_solutions", r.residual_max, 0.0);
  conclude(r);
  return r;
}

ClassificationReport theorem_vranceanu_evolute(const TheoremConfig& c) {
  const Scenario sc = setup(c, "vranceanu", 1e-8, Domain{0.0, 2.0 * std::numbers::pi, 0.0, 1.0});
  if (sc.surface.name() != "vranceanu")
    throw ConfigError("T10 needs the vranceanu catalog surface");
  const double lambda = sc.surface.params().at("lambda");
  const double mu = sc.surface.params().at("mu");
  const FrameProvider frames = default_frame(sc.surface);
  const TransportSurface ts(sc.surface, frames, evolute_offsets(sc.surface, frames));

  ClassificationReport r;
  r.scenario = "T10";
  r.surface = sc.surface.name();
  r.frame = frames.kind();
  r.offsets = "evolute";
  r.grid = sc.grid;
  r.tolerance = sc.tol;
  r.residual_names = {"closed_form_distance"};
  fixed_offsets_note(r, c, "evolute-solved");
  double offset_err = 0.0, ode = 0.0;
  for (int i = 0; i < sc.grid.nu; ++i)
    for (int j = 0; j < sc.grid.nv; ++j) {
      const double u = sc.grid.u(i), v = sc.grid.v(j);
      const double rp = lambda * mu * std::exp(mu * v);
      const Point4 expected(-std::sin(v) * std::cos(u), -std::sin(v) * std::sin(u), std::cos(v) * std::cos(u),
                            std::cos(v) * std::sin(u));
      r.add_node(u, v, {max_abs(ts.position(u, v) - rp * expected)});

      const double rv = lambda * std::exp(mu * v);
      const auto f = ts.offsets().values(u, v);
      offset_err = std::fmax(offset_err, std::fmax(std::fabs(f[0] - std::hypot(rv, rp)), std::fabs(f[1])));

      // r r'' - r'^2 from the jet alone, with r = |x|.
      const Jet2 jt = sc.surface.jet(u, v);
      const double xx = dot(jt.x, jt.x), xxv = dot(jt.x, jt.xv);
      ode = std::fmax(ode, std::fabs(dot(jt.xv, jt.xv) + dot(jt.x, jt.xvv) - 2.0 * xxv * xxv / xx));
    }
  r.finalize();
  r.checks.clear();
  r.add_check("closed_form_distance", r.residual_max, sc.tol);
  r.add_check("offset_error", offset_err, kOffsetMatchTolerance);
  r.add_check("ode_residual", ode, kOdeTolerance);

  const Domain& box = sc.surface.domain();
  const GridSpec reg{sc.grid.nu, sc.grid.nv, {box.u_min, box.u_max, std::fmax(box.v_min, 0.1), box.v_max}};
  const RegularityReport rr = regularity_report(ts, reg);
  r.statistics["degenerate_nodes"] = static_cast<double>(rr.degenerate_count);
  r.add_check("regular_transport", static_cast<double>(rr.degenerate_count), 0.0);
  conclude(r);
  return r;
}

ClassificationReport corollary_squared_sum(const TheoremConfig& c) {
  const Scenario sc = setup(c, "vranceanu", 1e-5);
  const FrameProvider frames = default_frame(sc.surface);
  const TransportSurface ts(sc.surface, frames, offsets_or(c, kRotatingOffsets, sc.surface, frames));
  ClassificationReport r = relabel(check_parallel(ts, sc.grid, sc.tol), "C1");
  r.notes.push_back("only necessity (parallel implies constant f1^2 + f2^2) is asserted");
  if (r.residual_max > sc.tol) {
    vacuous(r, "transport is not parallel in this frame; nothing to assert");
    return r;
  }
  r.add_check("parallel_system", r.residual_max, sc.tol);
  r.add_check("squared_sum_constant", r.statistics.at("squared_sum_deviation"),
              10.0 * sc.tol * grid_diameter(sc.grid));
  conclude(r);
  return r;
}

ClassificationReport corollary_unit_mean(const TheoremConfig& c) {
  const Scenario sc = setup(c, "clifford_torus", 1e-5);
  const FrameProvider frames = default_frame(sc.surface);
  const TransportSurface ts(sc.surface, frames, htype_offsets(sc.surface, frames));
  ClassificationReport r = relabel(check_evolute(ts, sc.grid, sc.tol), "C2");
  fixed_offsets_note(r, c, "H-type");
  const GridScan gs = scan(sc.surface, frames, sc.grid);
  if (!r.add_check("orthogonal_metric", gs.g12_max, kOrthogonalMetricTolerance)) {
    r.pass = false;
    r.verdict = "fail";
    r.notes.push_back("g12 != 0 on the grid; the statement assumes an orthogonal parametrisation");
    return r;
  }
  const double unit = std::fmax(std::fabs(gs.hnorm_max - 1.0), std::fabs(gs.hnorm_min - 1.0));
  r.statistics["hnorm_min"] = gs.hnorm_min;
  r.statistics["hnorm_max"] = gs.hnorm_max;
  const bool evolute = r.residual_max <= sc.tol;
  r.statistics["htype_evolute_residual"] = r.residual_max;
  r.statistics["unit_mean_deviation"] = unit;
  r.add_check("equivalence", equivalence(evolute, unit <= sc.tol), 0.0);
  conclude(r);
  return r;
}

ClassificationReport proposition_h_parallel(const TheoremConfig& c) {
  const Scenario sc = setup(c, "clifford_torus", 1e-5);
  const FrameProvider frames = default_frame(sc.surface);
  ClassificationReport r = relabel(check_H_parallel(sc.surface, frames, sc.grid, sc.tol), "P1");
  const double dev = r.statistics.at("hnorm2_deviation");
  const bool parallel = r.residual_max <= sc.tol;
  r.add_check("equivalence", equivalence(parallel, dev <= sc.tol), 0.0);
  conclude(r);
  return r;
}

}  // namespace

std::vector<std::string> theorem_ids() { return {"T3", "T4", "T5", "T7", "T8", "T9", "T10", "C1", "C2", "P1"}; }

std::string theorem_default_surface(std::string_view id) {
  if (id == "T3" || id == "T7" || id == "T8" || id == "T10" || id == "C1") return "vranceanu";
  if (id == "T4" || id == "C2" || id == "P1") return "clifford_torus";
  if (id == "T5") return "sphere";
  if (id == "T9") return "complex_curve";
  throw ConfigError(fmt::format("unknown theorem id '{}'", id));
}

std::string theorem_summary(std::string_view id) {
  if (id == "T3") return "a parallel normal transport exists iff the normal bundle is flat";
  if (id == "T4") return "H-type transport of a non-minimal surface is parallel iff H is parallel";
  if (id == "T5") return "K-type transport of a non-flat surface is parallel iff K1^2 + K2^2 is constant";
  if (id == "T7") return "with g12 = 0, an evolute transport satisfies f1 H1 + f2 H2 = 1";
  if (id == "T8") return "a surface with an evolute has flat normal bundle";
  if (id == "T9") return "minimal surfaces have no evolutes";
  if (id == "T10") return "evolute of the Vranceanu surface r = lambda e^(mu v) in closed form";
  if (id == "C1") return "parallel transports have constant f1^2 + f2^2";
  if (id == "C2") return "with g12 = 0, H-type transport is an evolute iff |H| = 1";
  if (id == "P1") return "H is parallel in the normal bundle iff |H|^2 is constant";
  throw ConfigError(fmt::format("unknown theorem id '{}'", id));
}

ClassificationReport verify_theorem(std::string_view id, const TheoremConfig& config) {
  if (id == "T3") return theorem_parallel_flat(config);
  if (id == "T4") return theorem_htype_parallel(config);
  if (id == "T5") return theorem_ktype_parallel(config);
  if (id == "T7") return theorem_evolute_mean(config);
  if (id == "T8") return theorem_evolute_flat(config);
  if (id == "T9") return theorem_minimal_no_evolute(config);
  if (id == "T10") return theorem_vranceanu_evolute(config);
  if (id == "C1") return corollary_squared_sum(config);
  if (id == "C2") return corollary_unit_mean(config);
  if (id == "P1") return proposition_h_parallel(config);
  throw ConfigError(fmt::format("unknown theorem id '{}' (expected one of T3 T4 T5 T7 T8 T9 T10 C1 C2 P1)", id));
}

}  // namespace ntsurf
