#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ntsurf/expr.hpp"
#include "ntsurf/grid.hpp"
#include "ntsurf/vec4.hpp"

namespace ntsurf {

/// Gram determinant below which a point counts as irregular.
inline constexpr double kRegularityThreshold = 1e-12;

/// Default finite-difference step for position jets.
inline constexpr double kJetStep = 1e-5;

using ParamMap = std::map<std::string, double, std::less<>>;

/// Position plus first and second partials at one parameter point.
struct Jet2 {
  Point4 x;
  Vec4 xu, xv;
  Vec4 xuu, xuv, xvv;

  /// g11*g22 - g12^2 of the tangent partials.
  double gram() const {
    const double g11 = dot(xu, xu), g12 = dot(xu, xv), g22 = dot(xv, xv);
    return g11 * g22 - g12 * g12;
  }
  bool regular() const { return gram() > kRegularityThreshold; }

  /// Tangent partial x_{u^i}, i in {0, 1}.
  const Vec4& tangent(int i) const { return i == 0 ? xu : xv; }
  /// Second partial x_{u^i u^j}.
  const Vec4& second(int i, int j) const {
    if (i == 0 && j == 0) return xuu;
    if (i == 1 && j == 1) return xvv;
    return xuv;
  }
};

/// Two orthonormal vectors spanning the normal plane at a point.
struct NormalFrame {
  Vec4 n1, n2;
  const Vec4& operator[](int alpha) const { return alpha == 0 ? n1 : n2; }
};

/// Closed-form (or symbolic) evaluator behind a SurfacePatch.
class SurfaceModel {
 public:
  virtual ~SurfaceModel() = default;
  virtual Jet2 jet(double u, double v) const = 0;
  virtual Point4 position(double u, double v) const { return jet(u, v).x; }
  /// Analytic normal frame, when the model knows one.
  virtual std::optional<NormalFrame> frame(double, double) const { return std::nullopt; }
};

/// A parametric surface (u, v) -> E^4 over a domain box.
///
/// Evaluation accepts points within a small slack outside the box (a
/// thousandth of its extent) so finite-difference stencils centred on edge
/// nodes stay valid.
class SurfacePatch {
 public:
  SurfacePatch(std::string name, ParamMap params, Domain domain,
               std::shared_ptr<const SurfaceModel> model);

  const std::string& name() const { return name_; }
  const ParamMap& params() const { return params_; }
  const Domain& domain() const { return domain_; }

  /// Exact jet. Throws ConfigError out of domain, DomainError on non-finite
  /// values.
  Jet2 jet(double u, double v) const;
  Point4 position(double u, double v) const;

  bool has_analytic_frame() const;
  std::optional<NormalFrame> analytic_frame(double u, double v) const;

  /// Same surface over another box.
  SurfacePatch with_domain(const Domain& domain) const;

  /// Slack allowed outside the box.
  double slack() const;
  void check_in_domain(double u, double v) const;

 private:
  std::string name_;
  ParamMap params_;
  Domain domain_;
  std::shared_ptr<const SurfaceModel> model_;
  bool has_frame_ = false;
};

/// Catalog ids: vranceanu, translation_parabola, clifford_torus,
/// complex_curve, plane, sphere.
std::vector<std::string> catalog_names();

/// Parameter names a catalog surface accepts.
std::vector<std::string> catalog_param_names(std::string_view name);

/// Default domain box of a catalog surface (depends on mu for vranceanu).
Domain catalog_domain(std::string_view name, const ParamMap& params = {});

/// Built-in surface with closed-form jets.
///
/// vranceanu takes lambda (non-zero, default 1) and mu (default 1), giving
/// r(v) = lambda*exp(mu*v). The others accept an optional `scale` (for the
/// sphere, its radius).
SurfacePatch make_catalog_surface(std::string_view name, const ParamMap& params = {});

/// Surface from four component expressions in u, v and the given parameters;
/// jets come from symbolic differentiation.
SurfacePatch make_expression_surface(const std::array<std::string, 4>& components,
                                     const ParamMap& params, const Domain& domain,
                                     std::string name = "expression");

/// Surface given only by a position evaluator; jets by central differences.
SurfacePatch make_function_surface(std::string name, std::function<Point4(double, double)> f,
                                   const Domain& domain, double h = kJetStep);

/// Parses a surface definition:
///   { "name": s, "components": [s,s,s,s], "params": {id: x},
///     "domain": {"u": [a,b], "v": [a,b]} }
SurfacePatch parse_surface_json(std::string_view json_text);
SurfacePatch load_surface_file(const std::string& path);

/// Central-difference jet. First partials use step h; second partials use
/// step 10*h (3-point and 4-point cross stencils), which keeps their
/// roundoff near 1e-8 at the default h.
Jet2 jet_fd(const SurfacePatch& s, double u, double v, double h = kJetStep);

}  // namespace ntsurf
