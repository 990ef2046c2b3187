#include "ntsurf/frame.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ntsurf/errors.hpp"
#include "ntsurf/invariants.hpp"

namespace ntsurf {

namespace {

constexpr double kSeedResidualFloor = 1e-8;
constexpr double kAlignmentFloor = 0.9;

// Orthogonalise r against q[0..n) twice (modified Gram-Schmidt with one
// reorthogonalisation pass).
Vec4 project_out(Vec4 r, const std::vector<Vec4>& q) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : q) r -= dot(r, b) * b;
  return r;
}

Vec4 aligned(const Vec4& n, const Vec4& reference, double u, double v) {
  const double d = dot(n, reference);
  if (std::fabs(d) < kAlignmentFloor)
    throw GeometryError(
        fmt::format("normal frame jumps branch near ({}, {}) (alignment {:.3f})", u, v, d));
  return d < 0.0 ? -n : n;
}

}  // namespace

NormalFrame gram_schmidt_frame(const Jet2& j) {
  if (j.gram() <= kRegularityThreshold)
    throw GeometryError("degenerate tangent plane: cannot build a normal frame");
  std::vector<Vec4> q;
  q.reserve(4);
  for (const Vec4* t : {&j.xu, &j.xv}) {
    Vec4 r = project_out(*t, q);
    q.push_back(r / norm(r));
  }
  for (std::size_t k = 0; k < 4 && q.size() < 4; ++k) {
    Vec4 r = project_out(basis(k), q);
    const double len = norm(r);
    if (len < kSeedResidualFloor) continue;
    q.push_back(r / len);
  }
  if (q.size() < 4) throw GeometryError("Gram-Schmidt produced fewer than two normals");
  return {q[2], q[3]};
}

NormalFrame normal_frame(const SurfacePatch& s, double u, double v) {
  if (auto f = s.analytic_frame(u, v)) return *f;
  return gram_schmidt_frame(s.jet(u, v));
}

FrameProvider default_frame(const SurfacePatch& s) {
  return FrameProvider(s.has_analytic_frame() ? "analytic" : "gram-schmidt",
                       [s](double u, double v) { return normal_frame(s, u, v); });
}

FrameProvider gram_schmidt_provider(const SurfacePatch& s) {
  return FrameProvider("gram-schmidt",
                       [s](double u, double v) { return gram_schmidt_frame(s.jet(u, v)); });
}

FrameJet frame_derivatives(const FrameProvider& frames, double u, double v, double h) {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");
  FrameJet fj;
  fj.frame = frames(u, v);
  auto diff = [&](double du, double dv, int alpha) {
    const Vec4& centre = fj.frame[alpha];
    const Vec4 plus = aligned(frames(u + du, v + dv)[alpha], centre, u, v);
    const Vec4 minus = aligned(frames(u - du, v - dv)[alpha], centre, u, v);
    return (plus - minus) / (2.0 * h);
  };
  fj.n1_u = diff(h, 0.0, 0);
  fj.n1_v = diff(0.0, h, 0);
  fj.n2_u = diff(h, 0.0, 1);
  fj.n2_v = diff(0.0, h, 1);
  return fj;
}

FrameJet frame_derivatives(const SurfacePatch& s, double u, double v, double h) {
  return frame_derivatives(default_frame(s), u, v, h);
}

Torsion torsion_coefficients(const FrameJet& fj) {
  return {dot(fj.n1_u, fj.frame.n2), dot(fj.n1_v, fj.frame.n2)};
}

Torsion torsion_at(const FrameProvider& frames, double u, double v, double h) {
  return torsion_coefficients(frame_derivatives(frames, u, v, h));
}

NormalFrame rotate(const NormalFrame& f, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * f.n1 + s * f.n2, -s * f.n1 + c * f.n2};
}

ParallelFrameField::ParallelFrameField(GridSpec grid, FrameProvider base, std::vector<double> theta)
    : grid_(grid), base_(std::move(base)), theta_(std::move(theta)) {
  if (theta_.size() != grid_.size()) throw ConfigError("theta field does not match the grid");
}

NormalFrame ParallelFrameField::at_node(int i, int j) const {
  return rotate(base_(grid_.u(i), grid_.v(j)), theta(i, j));
}

double ParallelFrameField::interpolate(double u, double v) const {
  const double su = (u - grid_.box.u_min) / grid_.du();
  const double sv = (v - grid_.box.v_min) / grid_.dv();
  const int i = std::clamp(static_cast<int>(std::floor(su)), 0, grid_.nu - 2);
  const int j = std::clamp(static_cast<int>(std::floor(sv)), 0, grid_.nv - 2);
  const double a = su - i, b = sv - j;
  return (1 - a) * (1 - b) * theta(i, j) + a * (1 - b) * theta(i + 1, j) +
         (1 - a) * b * theta(i, j + 1) + a * b * theta(i + 1, j + 1);
}

NormalFrame ParallelFrameField::operator()(double u, double v) const {
  return rotate(base_(u, v), interpolate(u, v));
}

FrameProvider ParallelFrameField::provider() const {
  return FrameProvider("parallelized", [self = *this](double u, double v) { return self(u, v); });
}

ParallelFrameField parallelize_frame(const SurfacePatch& s, const FrameProvider& frames,
                                     const GridSpec& grid) {
  grid.validate();
  std::vector<Torsion> torsion(grid.size());
  double kn_max = 0.0;
  double kn_u = 0.0, kn_v = 0.0;
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const double u = grid.u(i), v = grid.v(j);
      const PointInvariants pi = analyze_point(s, frames, u, v);
      if (std::fabs(pi.kn) > kn_max) {
        kn_max = std::fabs(pi.kn);
        kn_u = u;
        kn_v = v;
      }
      torsion[grid.index(i, j)] = torsion_at(frames, u, v);
    }
  }
  if (kn_max > kFlatNormalTolerance)
    throw GeometryError(fmt::format(
        "normal bundle is not flat: |K_N| = {:.6g} at ({:.6g}, {:.6g}); no torsion-free frame exists",
        kn_max, kn_u, kn_v));

  std::vector<double> theta(grid.size(), 0.0);
  const double du = grid.du(), dv = grid.dv();
  for (int i = 1; i < grid.nu; ++i)
    theta[grid.index(i, 0)] = theta[grid.index(i - 1, 0)] -
                              0.5 * du * (torsion[grid.index(i - 1, 0)].t1 + torsion[grid.index(i, 0)].t1);
  for (int i = 0; i < grid.nu; ++i)
    for (int j = 1; j < grid.nv; ++j)
      theta[grid.index(i, j)] = theta[grid.index(i, j - 1)] -
                                0.5 * dv * (torsion[grid.index(i, j - 1)].t2 + torsion[grid.index(i, j)].t2);
  return ParallelFrameField(grid, frames, std::move(theta));
}

ParallelFrameField parallelize_frame(const SurfacePatch& s, const GridSpec& grid) {
  return parallelize_frame(s, default_frame(s), grid);
}

}  // namespace ntsurf
