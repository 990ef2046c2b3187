#include "ntsurf/patch.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <utility>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ntsurf/errors.hpp"

namespace ntsurf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Jet2 scaled(Jet2 j, double s) {
  j.x *= s;
  j.xu *= s;
  j.xv *= s;
  j.xuu *= s;
  j.xuv *= s;
  j.xvv *= s;
  return j;
}

double param_or(const ParamMap& p, std::string_view key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void require_known_params(std::string_view surface, const ParamMap& p,
                          std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : p) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(fmt::format("surface '{}' has no parameter '{}'", surface, key));
    if (!std::isfinite(value))
      throw ConfigError(fmt::format("parameter '{}' must be finite", key));
  }
}

// x(u,v) = r(v) (cos v cos u, cos v sin u, sin v cos u, sin v sin u), r = lambda e^{mu v}.
class VranceanuModel final : public SurfaceModel {
 public:
  VranceanuModel(double lambda, double mu) : lambda_(lambda), mu_(mu) {}

  Jet2 jet(double u, double v) const override {
    const Radial q = radial(v);
    const double cu = std::cos(u), su = std::sin(u);
    Jet2 j;
    j.x = {q.a * cu, q.a * su, q.b * cu, q.b * su};
    j.xu = {-q.a * su, q.a * cu, -q.b * su, q.b * cu};
    j.xv = {q.da * cu, q.da * su, q.db * cu, q.db * su};
    j.xuu = -j.x;
    j.xuv = {-q.da * su, q.da * cu, -q.db * su, q.db * cu};
    j.xvv = {q.dda * cu, q.dda * su, q.ddb * cu, q.ddb * su};
    return j;
  }

  std::optional<NormalFrame> frame(double u, double v) const override {
    const Radial q = radial(v);
    const double cu = std::cos(u), su = std::sin(u);
    const double cv = std::cos(v), sv = std::sin(v);
    // B = a', C = b'; A = sqrt(r^2 + r'^2) = sqrt(B^2 + C^2).
    const double A = std::hypot(q.r, q.dr);
    NormalFrame f;
    f.n1 = Vec4{-q.db * cu, -q.db * su, q.da * cu, q.da * su} / A;
    f.n2 = {-sv * su, sv * cu, cv * su, -cv * cu};
    return f;
  }

 private:
  struct Radial {
    double r, dr;
    double a, b, da, db, dda, ddb;
  };

  Radial radial(double v) const {
    const double r = lambda_ * std::exp(mu_ * v);
    const double dr = mu_ * r;
    const double ddr = mu_ * mu_ * r;
    const double cv = std::cos(v), sv = std::sin(v);
    return {r,
            dr,
            r * cv,
            r * sv,
            dr * cv - r * sv,
            dr * sv + r * cv,
            ddr * cv - 2.0 * dr * sv - r * cv,
            ddr * sv + 2.0 * dr * cv - r * sv};
  }

  double lambda_, mu_;
};

// x(u,v) = s (u, u^2/2, v, v^2/2): translation surface of two parabolas in
// orthogonal coordinate planes.
class TranslationParabolaModel final : public SurfaceModel {
 public:
  explicit TranslationParabolaModel(double s) : s_(s) {}

  Jet2 jet(double u, double v) const override {
    Jet2 j;
    j.x = {u, 0.5 * u * u, v, 0.5 * v * v};
    j.xu = {1.0, u, 0.0, 0.0};
    j.xv = {0.0, 0.0, 1.0, v};
    j.xuu = {0.0, 1.0, 0.0, 0.0};
    j.xvv = {0.0, 0.0, 0.0, 1.0};
    return scaled(j, s_);
  }

  // Principal normals of the two profile curves, pointing to their centres
  // of curvature.
  std::optional<NormalFrame> frame(double u, double v) const override {
    const double sg = s_ > 0.0 ? 1.0 : -1.0;
    NormalFrame f;
    f.n1 = Vec4{-u, 1.0, 0.0, 0.0} * (sg / std::sqrt(1.0 + u * u));
    f.n2 = Vec4{0.0, 0.0, -v, 1.0} * (sg / std::sqrt(1.0 + v * v));
    return f;
  }

 private:
  double s_;
};

class CliffordTorusModel final : public SurfaceModel {
 public:
  explicit CliffordTorusModel(double s) : s_(s) {}

  Jet2 jet(double u, double v) const override {
    const double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
    Jet2 j;
    j.x = {cu, su, cv, sv};
    j.xu = {-su, cu, 0.0, 0.0};
    j.xv = {0.0, 0.0, -sv, cv};
    j.xuu = {-cu, -su, 0.0, 0.0};
    j.xvv = {0.0, 0.0, -cv, -sv};
    return scaled(j, s_);
  }

  // Inward normals of the two circle factors.
  std::optional<NormalFrame> frame(double u, double v) const override {
    const double sg = s_ > 0.0 ? 1.0 : -1.0;
    NormalFrame f;
    f.n1 = Vec4{-std::cos(u), -std::sin(u), 0.0, 0.0} * sg;
    f.n2 = Vec4{0.0, 0.0, -std::cos(v), -std::sin(v)} * sg;
    return f;
  }

 private:
  double s_;
};

// Graph of the holomorphic map z -> z^2: x(u,v) = s (u, v, u^2 - v^2, 2uv).
class ComplexCurveModel final : public SurfaceModel {
 public:
  explicit ComplexCurveModel(double s) : s_(s) {}

  Jet2 jet(double u, double v) const override {
    Jet2 j;
    j.x = {u, v, u * u - v * v, 2.0 * u * v};
    j.xu = {1.0, 0.0, 2.0 * u, 2.0 * v};
    j.xv = {0.0, 1.0, -2.0 * v, 2.0 * u};
    j.xuu = {0.0, 0.0, 2.0, 0.0};
    j.xuv = {0.0, 0.0, 0.0, 2.0};
    j.xvv = {0.0, 0.0, -2.0, 0.0};
    return scaled(j, s_);
  }

  std::optional<NormalFrame> frame(double u, double v) const override {
    const double w = std::sqrt(1.0 + 4.0 * u * u + 4.0 * v * v);
    NormalFrame f;
    f.n1 = Vec4{-2.0 * u, 2.0 * v, 1.0, 0.0} / w;
    f.n2 = Vec4{-2.0 * v, -2.0 * u, 0.0, 1.0} / w;
    return f;
  }

 private:
  double s_;
};

class PlaneModel final : public SurfaceModel {
 public:
  explicit PlaneModel(double s) : s_(s) {}

  Jet2 jet(double u, double v) const override {
    Jet2 j;
    j.x = {u, v, 0.0, 0.0};
    j.xu = {1.0, 0.0, 0.0, 0.0};
    j.xv = {0.0, 1.0, 0.0, 0.0};
    return scaled(j, s_);
  }

 private:
  double s_;
};

// Round sphere of radius R in the coordinate 3-plane x4 = 0; u longitude,
// v latitude.
class SphereModel final : public SurfaceModel {
 public:
  explicit SphereModel(double radius) : R_(radius) {}

  Jet2 jet(double u, double v) const override {
    const double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
    Jet2 j;
    j.x = {cv * cu, cv * su, sv, 0.0};
    j.xu = {-cv * su, cv * cu, 0.0, 0.0};
    j.xv = {-sv * cu, -sv * su, cv, 0.0};
    j.xuu = {-cv * cu, -cv * su, 0.0, 0.0};
    j.xuv = {sv * su, -sv * cu, 0.0, 0.0};
    j.xvv = {-cv * cu, -cv * su, -sv, 0.0};
    return scaled(j, R_);
  }

  std::optional<NormalFrame> frame(double u, double v) const override {
    const double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
    NormalFrame f;
    f.n1 = Vec4{-cv * cu, -cv * su, -sv, 0.0};
    f.n2 = {0.0, 0.0, 0.0, 1.0};
    return f;
  }

 private:
  double R_;
};

class ExpressionModel final : public SurfaceModel {
 public:
  ExpressionModel(const std::array<expr::Expression, 4>& components, ParamMap params)
      : params_(std::move(params)) {
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& e = components[k];
      const auto eu = expr::differentiate(e, "u");
      const auto ev = expr::differentiate(e, "v");
      terms_[k] = {e, eu, ev, expr::differentiate(eu, "u"), expr::differentiate(eu, "v"),
                   expr::differentiate(ev, "v")};
    }
  }

  Jet2 jet(double u, double v) const override {
    expr::Bindings b(params_.begin(), params_.end());
    b["u"] = u;
    b["v"] = v;
    Jet2 j;
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& t = terms_[k];
      j.x[k] = expr::evaluate(t[0], b);
      j.xu[k] = expr::evaluate(t[1], b);
      j.xv[k] = expr::evaluate(t[2], b);
      j.xuu[k] = expr::evaluate(t[3], b);
      j.xuv[k] = expr::evaluate(t[4], b);
      j.xvv[k] = expr::evaluate(t[5], b);
    }
    return j;
  }

  Point4 position(double u, double v) const override {
    expr::Bindings b(params_.begin(), params_.end());
    b["u"] = u;
    b["v"] = v;
    Point4 p;
    for (std::size_t k = 0; k < 4; ++k) p[k] = expr::evaluate(terms_[k][0], b);
    return p;
  }

 private:
  ParamMap params_;
  // Per component: f, f_u, f_v, f_uu, f_uv, f_vv.
  std::array<std::array<expr::Expression, 6>, 4> terms_;
};

Jet2 central_jet(const std::function<Point4(double, double)>& f, double u, double v, double h) {
  const double h2 = 10.0 * h;
  Jet2 j;
  j.x = f(u, v);
  j.xu = (f(u + h, v) - f(u - h, v)) / (2.0 * h);
  j.xv = (f(u, v + h) - f(u, v - h)) / (2.0 * h);
  j.xuu = (f(u + h2, v) - 2.0 * j.x + f(u - h2, v)) / (h2 * h2);
  j.xvv = (f(u, v + h2) - 2.0 * j.x + f(u, v - h2)) / (h2 * h2);
  j.xuv = (f(u + h2, v + h2) - f(u + h2, v - h2) - f(u - h2, v + h2) + f(u - h2, v - h2)) /
          (4.0 * h2 * h2);
  return j;
}

class FunctionModel final : public SurfaceModel {
 public:
  FunctionModel(std::function<Point4(double, double)> f, double h) : f_(std::move(f)), h_(h) {}
  Jet2 jet(double u, double v) const override { return central_jet(f_, u, v, h_); }
  Point4 position(double u, double v) const override { return f_(u, v); }

 private:
  std::function<Point4(double, double)> f_;
  double h_;
};

void check_finite(const Jet2& j, const std::string& name, double u, double v) {
  for (const Vec4* p : {&j.x, &j.xu, &j.xv, &j.xuu, &j.xuv, &j.xvv}) {
    if (!is_finite(*p))
      throw DomainError(fmt::format("non-finite jet of '{}' at ({}, {})", name, u, v));
  }
}

}  // namespace

SurfacePatch::SurfacePatch(std::string name, ParamMap params, Domain domain,
                           std::shared_ptr<const SurfaceModel> model)
    : name_(std::move(name)), params_(std::move(params)), domain_(domain), model_(std::move(model)) {
  domain_.validate();
  const double uc = 0.5 * (domain_.u_min + domain_.u_max);
  const double vc = 0.5 * (domain_.v_min + domain_.v_max);
  has_frame_ = model_->frame(uc, vc).has_value();
}

double SurfacePatch::slack() const {
  return 1e-3 * std::max(domain_.u_extent(), domain_.v_extent());
}

void SurfacePatch::check_in_domain(double u, double v) const {
  if (!domain_.contains(u, v, slack()))
    throw ConfigError(fmt::format("({}, {}) lies outside the domain of '{}'", u, v, name_));
}

Jet2 SurfacePatch::jet(double u, double v) const {
  check_in_domain(u, v);
  Jet2 j = model_->jet(u, v);
  check_finite(j, name_, u, v);
  return j;
}

Point4 SurfacePatch::position(double u, double v) const {
  check_in_domain(u, v);
  Point4 p = model_->position(u, v);
  if (!is_finite(p))
    throw DomainError(fmt::format("non-finite point of '{}' at ({}, {})", name_, u, v));
  return p;
}

bool SurfacePatch::has_analytic_frame() const { return has_frame_; }

std::optional<NormalFrame> SurfacePatch::analytic_frame(double u, double v) const {
  if (!has_frame_) return std::nullopt;
  check_in_domain(u, v);
  return model_->frame(u, v);
}

SurfacePatch SurfacePatch::with_domain(const Domain& domain) const {
  return SurfacePatch(name_, params_, domain, model_);
}

std::vector<std::string> catalog_names() {
  return {"vranceanu", "translation_parabola", "clifford_torus", "complex_curve", "plane", "sphere"};
}

std::vector<std::string> catalog_param_names(std::string_view name) {
  if (name == "vranceanu") return {"lambda", "mu"};
  const auto names = catalog_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw ConfigError(fmt::format("unknown catalog surface '{}'", name));
  return {"scale"};
}

Domain catalog_domain(std::string_view name, const ParamMap& params) {
  if (name == "vranceanu") {
    // Keep e^{mu v} below ~10 over the default box.
    const double mu = param_or(params, "mu", 1.0);
    const double v_max = std::fabs(mu) * kTwoPi <= std::log(10.0) ? kTwoPi : std::numbers::pi / 2;
    return {0.0, kTwoPi, 0.0, v_max};
  }
  if (name == "clifford_torus") return {0.0, kTwoPi, 0.0, kTwoPi};
  if (name == "sphere") return {0.0, kTwoPi, -1.2, 1.2};
  if (name == "translation_parabola" || name == "complex_curve" || name == "plane")
    return {-1.0, 1.0, -1.0, 1.0};
  throw ConfigError(fmt::format("unknown catalog surface '{}'", name));
}

SurfacePatch make_catalog_surface(std::string_view name, const ParamMap& params) {
  const Domain domain = catalog_domain(name, params);
  std::shared_ptr<const SurfaceModel> model;
  ParamMap resolved = params;
  if (name == "vranceanu") {
    require_known_params(name, params, {"lambda", "mu"});
    const double lambda = param_or(params, "lambda", 1.0);
    const double mu = param_or(params, "mu", 1.0);
    if (lambda == 0.0) throw ConfigError("vranceanu requires a non-zero lambda (r(v) must not vanish)");
    resolved["lambda"] = lambda;
    resolved["mu"] = mu;
    model = std::make_shared<VranceanuModel>(lambda, mu);
  } else {
    require_known_params(name, params, {"scale"});
    const double s = param_or(params, "scale", 1.0);
    if (s == 0.0) throw ConfigError("scale must be non-zero");
    if (name == "translation_parabola")
      model = std::make_shared<TranslationParabolaModel>(s);
    else if (name == "clifford_torus")
      model = std::make_shared<CliffordTorusModel>(s);
    else if (name == "complex_curve")
      model = std::make_shared<ComplexCurveModel>(s);
    else if (name == "plane")
      model = std::make_shared<PlaneModel>(s);
    else if (name == "sphere") {
      if (s < 0.0) throw ConfigError("sphere radius (scale) must be positive");
      model = std::make_shared<SphereModel>(s);
    }
  }
  return SurfacePatch(std::string(name), std::move(resolved), domain, std::move(model));
}

SurfacePatch make_expression_surface(const std::array<std::string, 4>& components,
                                     const ParamMap& params, const Domain& domain,
                                     std::string name) {
  expr::ParamSet names;
  for (const auto& [key, value] : params) names.insert(key);
  std::array<expr::Expression, 4> parsed;
  for (std::size_t k = 0; k < 4; ++k) parsed[k] = expr::parse_expression(components[k], names);
  return SurfacePatch(std::move(name), params, domain,
                      std::make_shared<ExpressionModel>(parsed, params));
}

SurfacePatch make_function_surface(std::string name, std::function<Point4(double, double)> f,
                                   const Domain& domain, double h) {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");
  return SurfacePatch(std::move(name), {}, domain, std::make_shared<FunctionModel>(std::move(f), h));
}

SurfacePatch parse_surface_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("surface file is not valid JSON: {}", e.what()));
  }
  try {
    const auto& comps = doc.at("components");
    if (!comps.is_array() || comps.size() != 4)
      throw ConfigError("surface file needs exactly four components");
    std::array<std::string, 4> components;
    for (std::size_t k = 0; k < 4; ++k) components[k] = comps[k].get<std::string>();

    ParamMap params;
    if (doc.contains("params"))
      for (const auto& [key, value] : doc["params"].items()) params[key] = value.get<double>();

    Domain domain{-1.0, 1.0, -1.0, 1.0};
    if (doc.contains("domain")) {
      const auto& d = doc["domain"];
      const auto u = d.at("u").get<std::array<double, 2>>();
      const auto v = d.at("v").get<std::array<double, 2>>();
      domain = {u[0], u[1], v[0], v[1]};
    }
    return make_expression_surface(components, params, domain,
                                   doc.value("name", std::string("expression")));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("malformed surface file: {}", e.what()));
  }
}

SurfacePatch load_surface_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open surface file '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_surface_json(ss.str());
}

Jet2 jet_fd(const SurfacePatch& s, double u, double v, double h) {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");
  const double reach = 10.0 * h;
  if (!s.domain().contains(u - reach, v - reach, s.slack()) ||
      !s.domain().contains(u + reach, v + reach, s.slack()))
    throw ConfigError(fmt::format("finite-difference stencil at ({}, {}) leaves the domain", u, v));
  return central_jet([&s](double a, double b) { return s.position(a, b); }, u, v, h);
}

}  // namespace ntsurf
