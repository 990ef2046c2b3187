#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ntsurf/frame.hpp"
#include "ntsurf/grid.hpp"
#include "ntsurf/invariants.hpp"
#include "ntsurf/patch.hpp"
#include "ntsurf/transport.hpp"

namespace ntsurf {

/// |g12| above which the evolute system is not set up.
inline constexpr double kOrthogonalMetricTolerance = 1e-8;
/// Residual allowed on the over-determined equations of the evolute system.
inline constexpr double kEvoluteEquationTolerance = 1e-8;
/// Step for finite differences of the mean curvature field.
inline constexpr double kMeanCurvatureStep = 1e-4;

struct NodeResiduals {
  double u = 0.0, v = 0.0;
  std::vector<double> values;
  double max = 0.0;
};

/// A named sub-result of a scenario: pass <=> value <= tolerance.
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ClassificationReport {
  std::string scenario;
  std::string surface;
  std::string frame;
  std::string offsets;
  GridSpec grid;
  double tolerance = 0.0;

  std::vector<std::string> residual_names;
  std::vector<NodeResiduals> nodes;
  double residual_max = 0.0;
  double residual_mean = 0.0;

  bool pass = false;
  std::string verdict;

  std::map<std::string, double> statistics;
  std::map<std::string, bool> flags;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  /// Adds a node and folds its values into the running maximum.
  void add_node(double u, double v, std::vector<double> values);
  /// Sets residual_max/mean, pass = residual_max <= tolerance and the
  /// verdict "pass" or "fail".
  void finalize();
  /// Appends a check and returns its outcome.
  bool add_check(std::string name, double value, double tolerance);
  /// Nodes whose largest residual exceeds the tolerance, worst first.
  std::vector<NodeResiduals> worst_nodes(std::size_t limit = 100) const;
};

nlohmann::json to_json(const ClassificationReport& r);

/// System: (f1)_u - f2 T1, (f1)_v - f2 T2, (f2)_u + f1 T1, (f2)_v + f1 T2.
/// Statistic "squared_sum_deviation": max |f1^2 + f2^2 - grid mean|.
ClassificationReport check_parallel(const TransportSurface& ts, const GridSpec& grid, double tol);

/// Residuals |<x~_{u^i}, x_{u^j}>| with direct tangents. Statistic
/// "mean_condition": max |f1 H1 + f2 H2 - 1| over nodes with |g12| <= 1e-8.
ClassificationReport check_evolute(const TransportSurface& ts, const GridSpec& grid, double tol);

struct EvoluteSolution {
  double f1 = 0.0, f2 = 0.0;
  /// The two diagonal equations were singular; the solution is the
  /// minimum-norm solution of the full consistent system.
  bool degenerate = false;
  /// Largest residual over the four equations f1 C1 + f2 C2 = I.
  double equation_residual = 0.0;
  /// |f1 H1 + f2 H2 - 1|.
  double mean_residual = 0.0;
};

struct NoSolution {
  std::string reason;
};

using EvoluteResult = std::variant<EvoluteSolution, NoSolution>;

/// Solves f1 c1^11 + f2 c2^11 = 1, f1 c1^22 + f2 c2^22 = 1 and checks the
/// off-diagonal equations f1 c1^12 + f2 c2^12 = 0 (and the c^21 analogue)
/// plus f1 H1 + f2 H2 = 1 within 1e-8. Throws GeometryError when
/// |g12| > 1e-8 at the point.
EvoluteResult solve_evolute_offsets(const PointInvariants& p);
EvoluteResult solve_evolute_offsets(const SurfacePatch& s, const FrameProvider& frames, double u, double v);
EvoluteResult solve_evolute_offsets(const SurfacePatch& s, double u, double v);

/// Residuals |(H1)_{u^i} - H2 T_i| and |(H2)_{u^i} + H1 T_i| with H
/// differentiated centrally (step 1e-4). Statistic "hnorm2_deviation": max
/// deviation of H1^2 + H2^2 from its grid mean. Flag "minimal" when
/// |H| <= tol at every node.
ClassificationReport check_H_parallel(const SurfacePatch& s, const FrameProvider& frames,
                                      const GridSpec& grid, double tol);

/// Verdict labels of chen_dichotomy.
inline constexpr std::string_view kMinimalInHypersphere = "minimal-in-hypersphere";
inline constexpr std::string_view kFlatNormalBundle = "flat-normal-bundle";
inline constexpr std::string_view kNotHParallel = "not-H-parallel";
inline constexpr std::string_view kHZero = "H-zero";
inline constexpr std::string_view kCounterexample = "counterexample";

struct HypersphereFit {
  Point4 center;
  double radius = 0.0;
  /// Standard deviation of |x - c|^2 over the sample points.
  double stddev = 0.0;
  double mean = 0.0;
};

/// Least-squares centre minimising the variance of |x - c|^2.
HypersphereFit fit_hypersphere(const std::vector<Point4>& points);

/// H-parallel surfaces with H != 0 either lie minimally in a hypersphere or
/// have flat normal bundle. Verdict is one of the labels above; pass is
/// false only for a counterexample node. Flags "hypersphere" and "flat".
ClassificationReport chen_dichotomy(const SurfacePatch& s, const FrameProvider& frames, const GridSpec& grid,
                                    double tol);

/// Scenario inputs; unset fields take per-scenario defaults.
struct TheoremConfig {
  std::optional<SurfacePatch> surface;
  std::optional<std::string> offsets;
  ParamMap offset_params;
  std::optional<int> nu, nv;
  std::optional<Domain> domain;
  std::optional<double> tolerance;
  std::uint64_t seed = 20240601;
  int samples = 25;
};

/// T3, T4, T5, T7, T8, T9, T10, C1, C2, P1.
std::vector<std::string> theorem_ids();

/// Catalog surface a scenario runs on when none is given.
std::string theorem_default_surface(std::string_view id);

/// One-line statement of what a scenario checks.
std::string theorem_summary(std::string_view id);

/// Runs a scripted scenario; throws ConfigError for an unknown id.
ClassificationReport verify_theorem(std::string_view id, const TheoremConfig& config = {});

}  // namespace ntsurf
