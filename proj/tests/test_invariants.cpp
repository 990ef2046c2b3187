#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "ntsurf/errors.hpp"
#include "ntsurf/invariants.hpp"
#include "support.hpp"

using namespace ntsurf;

TEST(Metric, Examples) {
  const Metric c = first_fundamental_form(make_catalog_surface("clifford_torus").jet(0.4, 1.1));
  EXPECT_NEAR(c.g11, 1, 1e-15);
  EXPECT_NEAR(c.g12, 0, 1e-15);
  EXPECT_NEAR(c.g22, 1, 1e-15);
  EXPECT_NEAR(c.g, 1, 1e-15);

  const Metric v = first_fundamental_form(make_catalog_surface("vranceanu", {{"lambda", 1.0}, {"mu", 1.0}}).jet(0, 0));
  EXPECT_NEAR(v.g11, 1, 1e-15);
  EXPECT_NEAR(v.g12, 0, 1e-15);
  EXPECT_NEAR(v.g22, 2, 1e-15);

  const Metric z = first_fundamental_form(make_catalog_surface("complex_curve").jet(1, 0));
  EXPECT_NEAR(z.g11, 5, 1e-15);
  EXPECT_NEAR(z.g12, 0, 1e-15);
  EXPECT_NEAR(z.g22, 5, 1e-15);
  EXPECT_NEAR(z.g, 25, 1e-13);
  EXPECT_NEAR(z.inv11, 0.2, 1e-16);

  Jet2 bad;
  bad.xu = Vec4(1, 0, 0, 0);
  bad.xv = Vec4(1, 0, 0, 0);
  EXPECT_THROW(first_fundamental_form(bad), GeometryError);
}

TEST(Christoffel, FlatChartsVanish) {
  for (const char* name : {"clifford_torus", "plane"}) {
    const Jet2 j = make_catalog_surface(name).jet(0.3, 0.2);
    const Christoffel g = christoffel(j, first_fundamental_form(j));
    for (double x : g.gamma) EXPECT_EQ(x, 0.0) << name;
  }
}

TEST(Christoffel, VranceanuHalfConvention) {
  const Jet2 j = make_catalog_surface("vranceanu", {{"lambda", 1.0}, {"mu", 1.0}}).jet(0, 0);
  const Christoffel g = christoffel(j, first_fundamental_form(j));
  // g11 = r^2, g22 = 2 r^2 with r = e^v: Gamma^1_12 = r'/r, Gamma^2_11 = -r r' / g22.
  EXPECT_NEAR(g(0, 0, 1), 1.0, 1e-14);
  EXPECT_NEAR(g(0, 1, 0), 1.0, 1e-14);
  EXPECT_NEAR(g(1, 0, 0), -0.5, 1e-14);
  EXPECT_NEAR(g(1, 1, 1), 1.0, 1e-14);
}

TEST(SecondFundamentalForm, Clifford) {
  const SurfacePatch s = make_catalog_surface("clifford_torus");
  const PointInvariants p = analyze_point(s, 0.8, 2.1);
  EXPECT_NEAR(p.sff(0, 0, 0), 1, 1e-14);
  EXPECT_NEAR(p.sff(1, 1, 1), 1, 1e-14);
  for (auto [a, i, j] : {std::tuple{0, 0, 1}, {0, 1, 1}, {1, 0, 0}, {1, 0, 1}}) EXPECT_NEAR(p.sff(a, i, j), 0, 1e-14);
  EXPECT_NEAR(p.weingarten(0, 0, 0), 1, 1e-14);
  EXPECT_NEAR(p.weingarten(1, 1, 1), 1, 1e-14);
  EXPECT_NEAR(p.weingarten(0, 1, 1), 0, 1e-14);
  EXPECT_NEAR(p.gauss.k1, 0, 1e-14);
  EXPECT_NEAR(p.gauss.k2, 0, 1e-14);
  EXPECT_NEAR(p.gauss.k, 0, 1e-14);
  EXPECT_NEAR(p.mean.h1, 0.5, 1e-14);
  EXPECT_NEAR(p.mean.h2, 0.5, 1e-14);
  EXPECT_NEAR(p.mean.norm, std::numbers::sqrt2 / 2, 1e-14);
  EXPECT_NEAR(p.kn, 0, 1e-14);
  EXPECT_LE(gauss_residual(p.jet, p.gamma, p.sff, p.frame), 1e-12);
}

TEST(SecondFundamentalForm, ComplexCurve) {
  const SurfacePatch s = make_catalog_surface("complex_curve");
  const PointInvariants p = analyze_point(s, 1.0, 0.0);
  // Hand frame N1 = (-2,0,1,0)/sqrt5, N2 = (0,-2,0,1)/sqrt5; the computed
  // frame may differ by orientation, so compare up to a sign per normal.
  const double c = 2 / std::sqrt(5.0);
  EXPECT_NEAR(std::fabs(p.sff(0, 0, 0)), c, 1e-14);
  EXPECT_NEAR(p.sff(0, 1, 1), -p.sff(0, 0, 0), 1e-14);
  EXPECT_NEAR(std::fabs(p.sff(1, 0, 1)), c, 1e-14);
  EXPECT_NEAR(p.sff(0, 0, 1), 0, 1e-14);
  EXPECT_NEAR(p.sff(1, 0, 0), 0, 1e-14);
  EXPECT_NEAR(std::fabs(p.weingarten(0, 0, 0)), c / 5, 1e-14);
  EXPECT_NEAR(p.weingarten(0, 1, 1), -p.weingarten(0, 0, 0), 1e-14);
  EXPECT_NEAR(std::fabs(p.weingarten(1, 0, 1)), c / 5, 1e-14);
  EXPECT_NEAR(p.gauss.k1, -4.0 / 125, 1e-14);
  EXPECT_NEAR(p.gauss.k2, -4.0 / 125, 1e-14);
  EXPECT_NEAR(p.gauss.k, -0.064, 1e-14);
  EXPECT_NEAR(p.mean.h1, 0, 1e-14);
  EXPECT_NEAR(p.mean.h2, 0, 1e-14);
  EXPECT_NEAR(std::fabs(p.kn), 0.064, 1e-14);
}

TEST(SecondFundamentalForm, PlaneIsZero) {
  const PointInvariants p = analyze_point(make_catalog_surface("plane"), 0.1, 0.9);
  for (const Mat2& m : p.sff.c)
    for (double x : m.a) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(p.mean.norm, 0.0);
  EXPECT_EQ(p.kn, 0.0);
  EXPECT_EQ(gauss_residual(p.jet, p.gamma, p.sff, p.frame), 0.0);
}

TEST(WeingartenForms, DiagonalMetricKeepsZeros) {
  SecondFundamentalForm sff;
  sff.c[0](0, 0) = 1.3;
  sff.c[0](1, 1) = -0.4;
  sff.c[1](0, 0) = 2.0;
  Metric m;
  m.g11 = 2.0;
  m.g22 = 5.0;
  m.g = 10.0;
  m.inv11 = 0.5;
  m.inv22 = 0.2;
  const WeingartenForms w = weingarten_forms(sff, m);
  for (int a = 0; a < 2; ++a) {
    EXPECT_EQ(w(a, 0, 1), 0.0);
    EXPECT_EQ(w(a, 1, 0), 0.0);
  }
  EXPECT_DOUBLE_EQ(w(0, 0, 0), 0.65);
  EXPECT_DOUBLE_EQ(w(0, 1, 1), -0.08);
}

TEST(Invariants, VranceanuFlatWithFlatNormalBundle) {
  const SurfacePatch s = make_catalog_surface("vranceanu", {{"lambda", 1.0}, {"mu", 1.0}});
  const GridSpec g(50, 50, Domain{0, 2 * std::numbers::pi, 0, 1});
  for (const CurvatureReport& r : invariant_grid(s, g)) {
    EXPECT_LE(std::fabs(r.k), 1e-8);
    EXPECT_LE(std::fabs(r.kn), 1e-8);
  }
  EXPECT_NEAR(normal_curvature_fd(s, 0.5, 0.5), 0.0, 1e-4);
}

TEST(Invariants, ComplexCurveIsMinimal) {
  const SurfacePatch s = make_catalog_surface("complex_curve");
  for (const CurvatureReport& r : invariant_grid(s, GridSpec(50, 50, s.domain()))) {
    EXPECT_LE(std::fabs(r.h1), 1e-10);
    EXPECT_LE(std::fabs(r.h2), 1e-10);
  }
}

TEST(Invariants, CliffordNormalCurvatureRoutes) {
  const SurfacePatch s = make_catalog_surface("clifford_torus");
  EXPECT_NEAR(normal_curvature_fd(s, 0.3, 0.4), 0.0, 1e-6);
}

TEST(Invariants, RouteCrossValidation) {
  for (const auto& name : catalog_names()) {
    const SurfacePatch s = make_catalog_surface(name);
    const FrameProvider frames = default_frame(s);
    for (auto [u, v] : test_support::random_points(s.domain(), 25, 31)) {
      const PointInvariants p = analyze_point(s, frames, u, v);
      const GaussianCurvature kw = gaussian_curvature(p.weingarten);
      const MeanCurvature hw = mean_curvature(p.weingarten);
      EXPECT_NEAR(kw.k1, p.gauss.k1, 1e-10) << name;
      EXPECT_NEAR(kw.k2, p.gauss.k2, 1e-10) << name;
      EXPECT_NEAR(hw.h1, p.mean.h1, 1e-10) << name;
      EXPECT_NEAR(hw.h2, p.mean.h2, 1e-10) << name;
      EXPECT_NEAR(normal_curvature_fd(s, frames, u, v), p.kn, 1e-3) << name << " at " << u << "," << v;
      EXPECT_LE(gauss_residual(p.jet, p.gamma, p.sff, p.frame), 1e-8) << name;
    }
  }
}

TEST(Invariants, FrameIndependence) {
  for (const auto& name : catalog_names()) {
    const SurfacePatch s = make_catalog_surface(name);
    const FrameProvider a = default_frame(s), b = gram_schmidt_provider(s);
    for (auto [u, v] : test_support::random_points(s.domain(), 25, 32)) {
      const PointInvariants p = analyze_point(s, a, u, v), q = analyze_point(s, b, u, v);
      EXPECT_NEAR(p.gauss.k, q.gauss.k, 1e-8) << name;
      EXPECT_NEAR(p.mean.norm, q.mean.norm, 1e-8) << name;
      EXPECT_NEAR(std::fabs(p.kn), std::fabs(q.kn), 1e-8) << name;
    }
  }
}

TEST(Invariants, GaussResidualOnVranceanu) {
  const SurfacePatch s = make_catalog_surface("vranceanu", {{"lambda", 1.0}, {"mu", 1.0}});
  for (auto [u, v] : test_support::random_points(s.domain(), 25, 33)) {
    const PointInvariants p = analyze_point(s, u, v);
    EXPECT_LE(gauss_residual(p.jet, p.gamma, p.sff, p.frame), 1e-9);
  }
}

TEST(InvariantsCsv, Format) {
  const SurfacePatch s = make_catalog_surface("plane");
  std::ostringstream a, b;
  const auto rows = invariant_grid(s, GridSpec(4, 4, s.domain()));
  ASSERT_EQ(rows.size(), 16u);
  write_invariants_csv(a, rows);
  write_invariants_csv(b, invariant_grid(s, GridSpec(4, 4, s.domain())));
  EXPECT_EQ(a.str(), b.str());
  std::istringstream in(a.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "u,v,g11,g12,g22,K1,K2,K,H1,H2,Hnorm,KN");
  int count = 0;
  while (std::getline(in, line)) {
    ++count;
    std::stringstream fields(line);
    std::string cell;
    int column = 0;
    while (std::getline(fields, cell, ',')) {
      if (column >= 5) EXPECT_EQ(std::stod(cell), 0.0) << line;
      if (column == 0) EXPECT_NE(cell.find('e'), std::string::npos) << cell;
      ++column;
    }
    EXPECT_EQ(column, 12);
  }
  EXPECT_EQ(count, 16);
  EXPECT_EQ(a.str().find('\r'), std::string::npos);
}

TEST(InvariantsCsv, CliffordRows) {
  const SurfacePatch s = make_catalog_surface("clifford_torus");
  for (const CurvatureReport& r : invariant_grid(s, GridSpec(10, 10, s.domain()))) {
    EXPECT_NEAR(r.k, 0, 1e-14);
    EXPECT_NEAR(r.h1, 0.5, 1e-14);
    EXPECT_NEAR(r.h2, 0.5, 1e-14);
    EXPECT_NEAR(r.hnorm, 0.70710678118654752, 1e-14);
    EXPECT_NEAR(r.kn, 0, 1e-14);
  }
}
