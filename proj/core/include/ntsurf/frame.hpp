#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ntsurf/grid.hpp"
#include "ntsurf/patch.hpp"

namespace ntsurf {

/// Default step for frame derivatives.
inline constexpr double kFrameStep = 1e-4;

/// A normal frame field (u, v) -> {N1, N2} with a label for reports.
class FrameProvider {
 public:
  using Fn = std::function<NormalFrame(double, double)>;

  FrameProvider(std::string kind, Fn fn) : kind_(std::move(kind)), fn_(std::move(fn)) {}

  NormalFrame operator()(double u, double v) const { return fn_(u, v); }
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
  Fn fn_;
};

/// Modified Gram-Schmidt over (x_u, x_v, e1, e2, e3, e4), skipping seeds whose
/// residual norm is below 1e-8; N1, N2 are the last two unit vectors
/// produced. Each normal has a positive component along its seed axis.
/// Throws GeometryError at a degenerate tangent plane.
NormalFrame gram_schmidt_frame(const Jet2& j);

/// The patch's analytic frame when it has one, Gram-Schmidt otherwise.
NormalFrame normal_frame(const SurfacePatch& s, double u, double v);

/// Provider backed by normal_frame (kind "analytic" or "gram-schmidt").
FrameProvider default_frame(const SurfacePatch& s);
/// Provider that always uses Gram-Schmidt, even for catalog surfaces.
FrameProvider gram_schmidt_provider(const SurfacePatch& s);

/// A frame and its first partials.
struct FrameJet {
  NormalFrame frame;
  Vec4 n1_u, n1_v, n2_u, n2_v;

  const Vec4& d(int alpha, int i) const {
    if (alpha == 0) return i == 0 ? n1_u : n1_v;
    return i == 0 ? n2_u : n2_v;
  }
};

/// Central differences of the frame field. Stencil frames are sign-aligned
/// with the centre frame; an alignment below 0.9 is a branch jump and
/// throws GeometryError.
FrameJet frame_derivatives(const FrameProvider& frames, double u, double v,
                           double h = kFrameStep);
FrameJet frame_derivatives(const SurfacePatch& s, double u, double v, double h = kFrameStep);

/// Normal connection coefficients T_i^{12} = <(N1)_{u^i}, N2>; T_i^{21} = -T_i^{12}.
struct Torsion {
  double t1 = 0.0;  // along u
  double t2 = 0.0;  // along v
  double operator[](int i) const { return i == 0 ? t1 : t2; }
};

Torsion torsion_coefficients(const FrameJet& fj);

/// Torsion of a frame field at a point (frame_derivatives then torsion).
Torsion torsion_at(const FrameProvider& frames, double u, double v, double h = kFrameStep);

/// Rotate a frame by angle theta within the normal plane.
NormalFrame rotate(const NormalFrame& f, double theta);

/// Torsion-free frame field over a grid, obtained by rotating a base frame
/// by an angle theta with d(theta) = -(T1 du + T2 dv), integrated with the
/// trapezoidal rule along the first row and then up each column,
/// theta = 0 at node (0, 0).
class ParallelFrameField {
 public:
  ParallelFrameField(GridSpec grid, FrameProvider base, std::vector<double> theta);

  const GridSpec& grid() const { return grid_; }
  double theta(int i, int j) const { return theta_[grid_.index(i, j)]; }
  NormalFrame at_node(int i, int j) const;

  /// Frame at any point of the grid box; theta is bilinearly interpolated
  /// between nodes.
  NormalFrame operator()(double u, double v) const;
  FrameProvider provider() const;

 private:
  double interpolate(double u, double v) const;

  GridSpec grid_;
  FrameProvider base_;
  std::vector<double> theta_;
};

/// Flatness threshold on max |K_N| for parallelize_frame.
inline constexpr double kFlatNormalTolerance = 1e-6;

/// Builds the torsion-free frame field. Throws GeometryError when
/// max |K_N| over the grid exceeds kFlatNormalTolerance (the normal bundle
/// is not flat, so no torsion-free frame exists).
ParallelFrameField parallelize_frame(const SurfacePatch& s, const FrameProvider& frames,
                                     const GridSpec& grid);
ParallelFrameField parallelize_frame(const SurfacePatch& s, const GridSpec& grid);

}  // namespace ntsurf
