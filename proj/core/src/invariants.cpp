#include "ntsurf/invariants.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ntsurf/errors.hpp"

namespace ntsurf {

Metric first_fundamental_form(const Jet2& j) {
  Metric m;
  m.g11 = dot(j.xu, j.xu);
  m.g12 = dot(j.xu, j.xv);
  m.g22 = dot(j.xv, j.xv);
  m.g = m.g11 * m.g22 - m.g12 * m.g12;
  if (!(m.g > kRegularityThreshold))
    throw GeometryError(fmt::format("irregular point: Gram determinant {:.3g}", m.g));
  m.inv11 = m.g22 / m.g;
  m.inv12 = -m.g12 / m.g;
  m.inv22 = m.g11 / m.g;
  return m;
}

Christoffel christoffel(const Jet2& j, const Metric& m) {
  // dg[k](a, b) = d_k g_ab = <x_ak, x_b> + <x_a, x_bk>
  std::array<Mat2, 2> dg;
  for (int k = 0; k < 2; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        dg[static_cast<std::size_t>(k)](a, b) =
            dot(j.second(a, k), j.tangent(b)) + dot(j.tangent(a), j.second(b, k));

  auto d = [&](int k, int a, int b) { return dg[static_cast<std::size_t>(k)](a, b); };
  Christoffel out;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int jj = 0; jj < 2; ++jj) {
        double sum = 0.0;
        for (int l = 0; l < 2; ++l)
          sum += m.upper(l, k) * (d(i, jj, l) + d(jj, l, i) - d(l, i, jj));
        out(k, i, jj) = 0.5 * sum;
      }
  return out;
}

SecondFundamentalForm second_fundamental_form(const Jet2& j, const NormalFrame& f) {
  SecondFundamentalForm s;
  for (int alpha = 0; alpha < 2; ++alpha)
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k)
        s.c[static_cast<std::size_t>(alpha)](i, k) = dot(j.second(i, k), f[alpha]);
  return s;
}

WeingartenForms weingarten_forms(const SecondFundamentalForm& sff, const Metric& m) {
  WeingartenForms w;
  for (int alpha = 0; alpha < 2; ++alpha)
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        double sum = 0.0;
        for (int jj = 0; jj < 2; ++jj) sum += sff(alpha, i, jj) * m.upper(jj, k);
        w.c[static_cast<std::size_t>(alpha)](i, k) = sum;
      }
  return w;
}

GaussianCurvature gaussian_curvature(const SecondFundamentalForm& sff, const Metric& m) {
  GaussianCurvature k;
  k.k1 = sff.c[0].det() / m.g;
  k.k2 = sff.c[1].det() / m.g;
  k.k = k.k1 + k.k2;
  return k;
}

GaussianCurvature gaussian_curvature(const WeingartenForms& w) {
  GaussianCurvature k;
  k.k1 = w.c[0].det();
  k.k2 = w.c[1].det();
  k.k = k.k1 + k.k2;
  return k;
}

MeanCurvature mean_curvature(const SecondFundamentalForm& sff, const Metric& m) {
  MeanCurvature h;
  auto component = [&](const Mat2& c) {
    return (m.g22 * c(0, 0) + m.g11 * c(1, 1) - 2.0 * m.g12 * c(0, 1)) / (2.0 * m.g);
  };
  h.h1 = component(sff.c[0]);
  h.h2 = component(sff.c[1]);
  h.norm = std::hypot(h.h1, h.h2);
  return h;
}

MeanCurvature mean_curvature(const WeingartenForms& w) {
  MeanCurvature h;
  h.h1 = 0.5 * w.c[0].trace();
  h.h2 = 0.5 * w.c[1].trace();
  h.norm = std::hypot(h.h1, h.h2);
  return h;
}

double normal_curvature(const SecondFundamentalForm& sff, const Metric& m) {
  const Mat2& c1 = sff.c[0];
  const Mat2& c2 = sff.c[1];
  double s = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      s += (c1(0, a) * c2(b, 1) - c1(1, a) * c2(b, 0)) * m.upper(a, b);
  return s / std::sqrt(m.g);
}

double normal_curvature_fd(const SurfacePatch& s, const FrameProvider& frames, double u, double v,
                           double h) {
  const Metric m = first_fundamental_form(s.jet(u, v));
  const double t1_v = (torsion_at(frames, u, v + h, h).t1 - torsion_at(frames, u, v - h, h).t1) / (2.0 * h);
  const double t2_u = (torsion_at(frames, u + h, v, h).t2 - torsion_at(frames, u - h, v, h).t2) / (2.0 * h);
  return (t1_v - t2_u) / std::sqrt(m.g);
}

double normal_curvature_fd(const SurfacePatch& s, double u, double v, double h) {
  return normal_curvature_fd(s, default_frame(s), u, v, h);
}

double gauss_residual(const Jet2& j, const Christoffel& gamma, const SecondFundamentalForm& sff,
                      const NormalFrame& f) {
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int k = i; k < 2; ++k) {
      Vec4 r = j.second(i, k);
      for (int l = 0; l < 2; ++l) r -= gamma(l, i, k) * j.tangent(l);
      for (int alpha = 0; alpha < 2; ++alpha) r -= sff(alpha, i, k) * f[alpha];
      worst = std::fmax(worst, max_abs(r));
    }
  return worst;
}

double weingarten_residual(const Jet2& j, const FrameJet& fj, const WeingartenForms& w,
                           const Torsion& t) {
  double worst = 0.0;
  for (int alpha = 0; alpha < 2; ++alpha)
    for (int i = 0; i < 2; ++i) {
      Vec4 r = fj.d(alpha, i);
      for (int k = 0; k < 2; ++k) r += w(alpha, i, k) * j.tangent(k);
      // T_i^{12} N2 for alpha = 1, T_i^{21} N1 = -T_i^{12} N1 for alpha = 2.
      if (alpha == 0)
        r -= t[i] * fj.frame.n2;
      else
        r += t[i] * fj.frame.n1;
      worst = std::fmax(worst, max_abs(r));
    }
  return worst;
}

double compatibility_residual(const Jet2& j, const SecondFundamentalForm& sff, const FrameJet& fj) {
  double worst = 0.0;
  for (int alpha = 0; alpha < 2; ++alpha)
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k)
        worst = std::fmax(worst, std::fabs(sff(alpha, i, k) + dot(j.tangent(i), fj.d(alpha, k))));
  return worst;
}

CurvatureReport PointInvariants::report() const {
  CurvatureReport r;
  r.u = u;
  r.v = v;
  r.g11 = metric.g11;
  r.g12 = metric.g12;
  r.g22 = metric.g22;
  r.k1 = gauss.k1;
  r.k2 = gauss.k2;
  r.k = gauss.k;
  r.h1 = mean.h1;
  r.h2 = mean.h2;
  r.hnorm = mean.norm;
  r.kn = kn;
  return r;
}

PointInvariants analyze_point(const SurfacePatch& s, const FrameProvider& frames, double u, double v) {
  PointInvariants p;
  p.u = u;
  p.v = v;
  p.jet = s.jet(u, v);
  p.metric = first_fundamental_form(p.jet);
  p.frame = frames(u, v);
  p.gamma = christoffel(p.jet, p.metric);
  p.sff = second_fundamental_form(p.jet, p.frame);
  p.weingarten = weingarten_forms(p.sff, p.metric);
  p.gauss = gaussian_curvature(p.sff, p.metric);
  p.mean = mean_curvature(p.sff, p.metric);
  p.kn = normal_curvature(p.sff, p.metric);
  return p;
}

PointInvariants analyze_point(const SurfacePatch& s, double u, double v) {
  return analyze_point(s, default_frame(s), u, v);
}

std::vector<CurvatureReport> invariant_grid(const SurfacePatch& s, const FrameProvider& frames,
                                            const GridSpec& grid) {
  grid.validate();
  std::vector<CurvatureReport> rows;
  rows.reserve(grid.size());
  for (int i = 0; i < grid.nu; ++i)
    for (int j = 0; j < grid.nv; ++j) rows.push_back(analyze_point(s, frames, grid.u(i), grid.v(j)).report());
  return rows;
}

std::vector<CurvatureReport> invariant_grid(const SurfacePatch& s, const GridSpec& grid) {
  return invariant_grid(s, default_frame(s), grid);
}

void write_invariants_csv(std::ostream& out, const std::vector<CurvatureReport>& rows) {
  out << "u,v,g11,g12,g22,K1,K2,K,H1,H2,Hnorm,KN\n";
  // Adding 0.0 turns -0 into +0 so equal values print identically.
  for (const auto& r : rows) {
    out << fmt::format("{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                       r.u + 0.0, r.v + 0.0, r.g11 + 0.0, r.g12 + 0.0, r.g22 + 0.0, r.k1 + 0.0, r.k2 + 0.0,
                       r.k + 0.0, r.h1 + 0.0, r.h2 + 0.0, r.hnorm + 0.0, r.kn + 0.0);
  }
}

}  // namespace ntsurf
