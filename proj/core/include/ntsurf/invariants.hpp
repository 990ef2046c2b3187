#pragma once

#include <array>
#include <ostream>
#include <vector>

#include "ntsurf/frame.hpp"
#include "ntsurf/grid.hpp"
#include "ntsurf/patch.hpp"

namespace ntsurf {

/// 2x2 matrix indexed (i, j) with i, j in {0, 1}.
struct Mat2 {
  std::array<double, 4> a{0.0, 0.0, 0.0, 0.0};
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(2 * i + j)]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(2 * i + j)]; }
  double det() const { return a[0] * a[3] - a[1] * a[2]; }
  double trace() const { return a[0] + a[3]; }
};

/// First fundamental form and its inverse.
struct Metric {
  double g11 = 0.0, g12 = 0.0, g22 = 0.0;
  double g = 0.0;  // determinant
  double inv11 = 0.0, inv12 = 0.0, inv22 = 0.0;

  double lower(int i, int j) const { return i == 0 && j == 0 ? g11 : (i == 1 && j == 1 ? g22 : g12); }
  double upper(int i, int j) const {
    return i == 0 && j == 0 ? inv11 : (i == 1 && j == 1 ? inv22 : inv12);
  }
};

/// Gamma^k_{ij}, stored for all (k, i, j); symmetric in (i, j).
struct Christoffel {
  std::array<double, 8> gamma{};
  double& operator()(int k, int i, int j) { return gamma[static_cast<std::size_t>(4 * k + 2 * i + j)]; }
  double operator()(int k, int i, int j) const {
    return gamma[static_cast<std::size_t>(4 * k + 2 * i + j)];
  }
};

/// c_ij^alpha = <x_{u^i u^j}, N_alpha>, one symmetric matrix per normal.
struct SecondFundamentalForm {
  std::array<Mat2, 2> c;
  double operator()(int alpha, int i, int j) const { return c[static_cast<std::size_t>(alpha)](i, j); }
};

/// c_alpha^{ik} = sum_j c_ij^alpha g^{jk}. Not symmetric in (i, k) unless the
/// metric is conformal, so all four entries are kept.
struct WeingartenForms {
  std::array<Mat2, 2> c;
  double operator()(int alpha, int i, int k) const { return c[static_cast<std::size_t>(alpha)](i, k); }
};

struct GaussianCurvature {
  double k1 = 0.0, k2 = 0.0, k = 0.0;
};

struct MeanCurvature {
  double h1 = 0.0, h2 = 0.0, norm = 0.0;
};

/// One row of the invariants CSV.
struct CurvatureReport {
  double u = 0.0, v = 0.0;
  double g11 = 0.0, g12 = 0.0, g22 = 0.0;
  double k1 = 0.0, k2 = 0.0, k = 0.0;
  double h1 = 0.0, h2 = 0.0, hnorm = 0.0;
  double kn = 0.0;
};

/// Throws GeometryError when the Gram determinant is <= kRegularityThreshold.
Metric first_fundamental_form(const Jet2& j);

/// Gamma^k_ij = 1/2 sum_l g^{lk} (d_i g_jl + d_j g_li - d_l g_ij) with the
/// metric derivatives taken exactly from the jet.
Christoffel christoffel(const Jet2& j, const Metric& m);

SecondFundamentalForm second_fundamental_form(const Jet2& j, const NormalFrame& f);
WeingartenForms weingarten_forms(const SecondFundamentalForm& sff, const Metric& m);

/// K_alpha = (c11 c22 - c12^2) / g per normal; K = K1 + K2.
GaussianCurvature gaussian_curvature(const SecondFundamentalForm& sff, const Metric& m);
/// Same quantity as det(c_alpha^{ik}).
GaussianCurvature gaussian_curvature(const WeingartenForms& w);

/// H_alpha = (g22 c11 + g11 c22 - 2 g12 c12) / (2g); norm = |H|.
MeanCurvature mean_curvature(const SecondFundamentalForm& sff, const Metric& m);
/// Same quantity as trace(c_alpha^{ik}) / 2.
MeanCurvature mean_curvature(const WeingartenForms& w);

/// K_N = S_12^12 / sqrt(g) with
/// S_12^12 = sum_{m,n} (c_1m^1 c_n2^2 - c_2m^1 c_n1^2) g^{mn}.
double normal_curvature(const SecondFundamentalForm& sff, const Metric& m);

/// K_N from the normal connection: ((T1)_v - (T2)_u) / sqrt(g), torsion
/// from frame_derivatives at the four neighbours, centrally differenced.
double normal_curvature_fd(const SurfacePatch& s, const FrameProvider& frames, double u, double v,
                           double h = kFrameStep);
double normal_curvature_fd(const SurfacePatch& s, double u, double v, double h = kFrameStep);

/// max over (i,j) of the max-norm of x_ij - Gamma^k_ij x_k - c_ij^alpha N_alpha.
double gauss_residual(const Jet2& j, const Christoffel& gamma, const SecondFundamentalForm& sff,
                      const NormalFrame& f);

/// max-norm over (alpha, i) of (N_alpha)_i + c_alpha^{ik} x_k - T_i^{alpha beta} N_beta.
double weingarten_residual(const Jet2& j, const FrameJet& fj, const WeingartenForms& w,
                           const Torsion& t);

/// max over (alpha, i, j) of |c_ij^alpha + <x_i, (N_alpha)_j>|.
double compatibility_residual(const Jet2& j, const SecondFundamentalForm& sff, const FrameJet& fj);

/// The whole invariant stack at one point.
struct PointInvariants {
  double u = 0.0, v = 0.0;
  Jet2 jet;
  NormalFrame frame;
  Metric metric;
  Christoffel gamma;
  SecondFundamentalForm sff;
  WeingartenForms weingarten;
  GaussianCurvature gauss;
  MeanCurvature mean;
  double kn = 0.0;

  CurvatureReport report() const;
};

PointInvariants analyze_point(const SurfacePatch& s, const FrameProvider& frames, double u, double v);
PointInvariants analyze_point(const SurfacePatch& s, double u, double v);

/// Pointwise reports over the grid, row-major in u.
std::vector<CurvatureReport> invariant_grid(const SurfacePatch& s, const FrameProvider& frames,
                                            const GridSpec& grid);
std::vector<CurvatureReport> invariant_grid(const SurfacePatch& s, const GridSpec& grid);

/// Header: u,v,g11,g12,g22,K1,K2,K,H1,H2,Hnorm,KN. Numbers in scientific
/// notation with 17 significant digits, '\n' line endings.
void write_invariants_csv(std::ostream& out, const std::vector<CurvatureReport>& rows);

}  // namespace ntsurf
