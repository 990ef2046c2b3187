#include "ntsurf/transport.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <variant>

#include <fmt/format.h>

#include "ntsurf/classify.hpp"
#include "ntsurf/errors.hpp"
#include "ntsurf/expr.hpp"

namespace ntsurf {

std::string_view offset_kind_name(OffsetKind k) {
  switch (k) {
    case OffsetKind::Constant: return "constant";
    case OffsetKind::HType: return "htype";
    case OffsetKind::KType: return "ktype";
    case OffsetKind::Evolute: return "evolute";
    case OffsetKind::Custom: return "custom";
  }
  return "unknown";
}

OffsetField::OffsetField(OffsetKind kind, std::string description, ValueFn values, GradientFn gradient)
    : kind_(kind), description_(std::move(description)), values_(std::move(values)),
      gradient_(std::move(gradient)) {
  if (!values_) throw ConfigError("offset field needs a value evaluator");
}

OffsetSample OffsetField::sample(double u, double v) const {
  const auto f = values_(u, v);
  OffsetSample s;
  s.f1 = f[0];
  s.f2 = f[1];
  if (gradient_) {
    const auto g = gradient_(u, v);
    s.f1_u = g[0];
    s.f1_v = g[1];
    s.f2_u = g[2];
    s.f2_v = g[3];
    return s;
  }
  const double h = kOffsetStep;
  const auto pu = values_(u + h, v), mu = values_(u - h, v);
  const auto pv = values_(u, v + h), mv = values_(u, v - h);
  s.f1_u = (pu[0] - mu[0]) / (2.0 * h);
  s.f2_u = (pu[1] - mu[1]) / (2.0 * h);
  s.f1_v = (pv[0] - mv[0]) / (2.0 * h);
  s.f2_v = (pv[1] - mv[1]) / (2.0 * h);
  return s;
}

OffsetField constant_offsets(double f1, double f2) {
  if (!std::isfinite(f1) || !std::isfinite(f2)) throw ConfigError("constant offsets must be finite");
  return OffsetField(
      OffsetKind::Constant, fmt::format("constant:{:.17g},{:.17g}", f1, f2),
      [f1, f2](double, double) { return std::array<double, 2>{f1, f2}; },
      [](double, double) { return std::array<double, 4>{0.0, 0.0, 0.0, 0.0}; });
}

OffsetField custom_offsets(std::string_view f1, std::string_view f2, const ParamMap& params) {
  expr::ParamSet names;
  for (const auto& [k, _] : params) names.insert(k);
  const expr::Expression e1 = expr::parse_expression(f1, names);
  const expr::Expression e2 = expr::parse_expression(f2, names);
  const std::array<expr::Expression, 4> d{expr::differentiate(e1, "u"), expr::differentiate(e1, "v"),
                                          expr::differentiate(e2, "u"), expr::differentiate(e2, "v")};
  expr::Bindings base;
  for (const auto& [k, x] : params) base.emplace(k, x);
  auto bind = [base](double u, double v) {
    expr::Bindings b = base;
    b["u"] = u;
    b["v"] = v;
    return b;
  };
  return OffsetField(
      OffsetKind::Custom, fmt::format("custom:{};{}", f1, f2),
      [e1, e2, bind](double u, double v) {
        const auto b = bind(u, v);
        return std::array<double, 2>{expr::evaluate(e1, b), expr::evaluate(e2, b)};
      },
      [d, bind](double u, double v) {
        const auto b = bind(u, v);
        return std::array<double, 4>{expr::evaluate(d[0], b), expr::evaluate(d[1], b),
                                     expr::evaluate(d[2], b), expr::evaluate(d[3], b)};
      });
}

OffsetField htype_offsets(const SurfacePatch& base, const FrameProvider& frames) {
  return OffsetField(OffsetKind::HType, "htype", [base, frames](double u, double v) {
    const PointInvariants p = analyze_point(base, frames, u, v);
    return std::array<double, 2>{p.mean.h1, p.mean.h2};
  });
}

OffsetField ktype_offsets(const SurfacePatch& base, const FrameProvider& frames) {
  return OffsetField(OffsetKind::KType, "ktype", [base, frames](double u, double v) {
    const PointInvariants p = analyze_point(base, frames, u, v);
    return std::array<double, 2>{p.gauss.k1, p.gauss.k2};
  });
}

OffsetField evolute_offsets(const SurfacePatch& base, const FrameProvider& frames) {
  return OffsetField(OffsetKind::Evolute, "evolute", [base, frames](double u, double v) {
    const EvoluteResult r = solve_evolute_offsets(base, frames, u, v);
    if (const auto* none = std::get_if<NoSolution>(&r))
      throw GeometryError(fmt::format("no evolute offset at ({:.6g}, {:.6g}): {}", u, v, none->reason));
    const auto& s = std::get<EvoluteSolution>(r);
    return std::array<double, 2>{s.f1, s.f2};
  });
}

namespace {

double parse_real(std::string_view text, std::string_view what) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(fmt::format("invalid {} '{}'", what, text));
  return x;
}

}  // namespace

OffsetField parse_offset_spec(std::string_view spec, const SurfacePatch& base, const FrameProvider& frames,
                              const ParamMap& params) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  auto no_args = [&](std::string_view kind) {
    if (colon != std::string_view::npos)
      throw ConfigError(fmt::format("offset kind '{}' takes no arguments", kind));
  };
  if (head == "constant") {
    const auto comma = rest.find(',');
    if (colon == std::string_view::npos || comma == std::string_view::npos)
      throw ConfigError("constant offsets need the form constant:f1,f2");
    return constant_offsets(parse_real(rest.substr(0, comma), "offset value"),
                            parse_real(rest.substr(comma + 1), "offset value"));
  }
  if (head == "custom") {
    const auto semi = rest.find(';');
    if (colon == std::string_view::npos || semi == std::string_view::npos)
      throw ConfigError("custom offsets need the form custom:<expr1>;<expr2>");
    return custom_offsets(rest.substr(0, semi), rest.substr(semi + 1), params);
  }
  if (head == "htype") {
    no_args(head);
    return htype_offsets(base, frames);
  }
  if (head == "ktype") {
    no_args(head);
    return ktype_offsets(base, frames);
  }
  if (head == "evolute") {
    no_args(head);
    return evolute_offsets(base, frames);
  }
  throw ConfigError(fmt::format("unknown offset kind '{}' (expected constant, htype, ktype, evolute or custom)",
                                head));
}

TangentPair transport_tangents(const Jet2& j, const NormalFrame& f, const WeingartenForms& w, const Torsion& t,
                               const OffsetSample& off) {
  const double f1 = off.f1, f2 = off.f2;
  auto c = [&](int alpha, int i, int k) { return w(alpha, i, k); };
  TangentPair out;
  out.xu = (1.0 - f1 * c(0, 0, 0) - f2 * c(1, 0, 0)) * j.xu - (f1 * c(0, 0, 1) + f2 * c(1, 0, 1)) * j.xv +
           (off.f1_u - f2 * t.t1) * f.n1 + (off.f2_u + f1 * t.t1) * f.n2;
  out.xv = -(f1 * c(0, 1, 0) + f2 * c(1, 1, 0)) * j.xu + (1.0 - f1 * c(0, 1, 1) - f2 * c(1, 1, 1)) * j.xv +
           (off.f1_v - f2 * t.t2) * f.n1 + (off.f2_v + f1 * t.t2) * f.n2;
  return out;
}

TransportSurface::TransportSurface(SurfacePatch base, FrameProvider frames, OffsetField offsets)
    : base_(std::move(base)), frames_(std::move(frames)), offsets_(std::move(offsets)) {}

Point4 TransportSurface::position(double u, double v) const {
  const Point4 x = base_.position(u, v);
  const NormalFrame f = frames_(u, v);
  const auto off = offsets_.values(u, v);
  return x + off[0] * f.n1 + off[1] * f.n2;
}

TangentPair TransportSurface::tangents_direct(double u, double v, double h) const {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");
  TangentPair t;
  t.xu = (position(u + h, v) - position(u - h, v)) / (2.0 * h);
  t.xv = (position(u, v + h) - position(u, v - h)) / (2.0 * h);
  return t;
}

TangentPair TransportSurface::tangents_expansion(double u, double v) const {
  const PointInvariants p = analyze_point(base_, frames_, u, v);
  const Torsion t = torsion_at(frames_, u, v);
  return transport_tangents(p.jet, p.frame, p.weingarten, t, offsets_.sample(u, v));
}

SurfacePatch TransportSurface::as_patch() const {
  const TransportSurface self = *this;
  return make_function_surface(
      fmt::format("{}+{}", base_.name(), offsets_.description()),
      [self](double u, double v) { return self.position(u, v); }, base_.domain());
}

TransportSurface transport_surface(const SurfacePatch& base, const OffsetField& offsets) {
  return TransportSurface(base, default_frame(base), offsets);
}

RegularityReport regularity_report(const TransportSurface& ts, const GridSpec& grid) {
  grid.validate();
  RegularityReport r;
  r.surface = ts.base().name();
  r.offsets = ts.offsets().description();
  r.frame = ts.frames().kind();
  r.grid = grid;
  r.nodes.reserve(grid.size());
  r.min_gram = std::numeric_limits<double>::infinity();
  r.max_gram = 0.0;
  for (int i = 0; i < grid.nu; ++i)
    for (int j = 0; j < grid.nv; ++j) {
      RegularityNode n;
      n.u = grid.u(i);
      n.v = grid.v(j);
      const TangentPair t = ts.tangents_direct(n.u, n.v);
      const double g11 = dot(t.xu, t.xu), g12 = dot(t.xu, t.xv), g22 = dot(t.xv, t.xv);
      n.gram = g11 * g22 - g12 * g12;
      n.degenerate = !(n.gram > kDegenerateGram);
      if (n.degenerate) ++r.degenerate_count;
      r.min_gram = std::min(r.min_gram, n.gram);
      r.max_gram = std::max(r.max_gram, n.gram);
      r.nodes.push_back(n);
    }
  return r;
}

nlohmann::json to_json(const RegularityReport& r) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : r.nodes)
    if (n.degenerate) nodes.push_back({{"u", n.u}, {"v", n.v}, {"gram", n.gram}});
  if (nodes.size() > 100) nodes.erase(nodes.begin() + 100, nodes.end());
  return {
      {"surface", r.surface},
      {"offsets", r.offsets},
      {"frame", r.frame},
      {"grid", {{"nu", r.grid.nu}, {"nv", r.grid.nv},
                {"u", {r.grid.box.u_min, r.grid.box.u_max}}, {"v", {r.grid.box.v_min, r.grid.box.v_max}}}},
      {"threshold", kDegenerateGram},
      {"nodes", r.nodes.size()},
      {"degenerate_count", r.degenerate_count},
      {"degenerate_fraction", r.degenerate_fraction()},
      {"min_gram", r.min_gram},
      {"max_gram", r.max_gram},
      {"degenerate_nodes", nodes},
  };
}

}  // namespace ntsurf
