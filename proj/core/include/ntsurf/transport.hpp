#pragma once

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ntsurf/frame.hpp"
#include "ntsurf/invariants.hpp"
#include "ntsurf/patch.hpp"

namespace ntsurf {

/// Step for finite-difference derivatives of curvature-driven offsets.
inline constexpr double kOffsetStep = 1e-4;

/// Gram determinant at or below which a transport node is degenerate.
inline constexpr double kDegenerateGram = 1e-10;

enum class OffsetKind { Constant, HType, KType, Evolute, Custom };

std::string_view offset_kind_name(OffsetKind k);

/// Offset values and first partials at one point.
struct OffsetSample {
  double f1 = 0.0, f2 = 0.0;
  double f1_u = 0.0, f1_v = 0.0;
  double f2_u = 0.0, f2_v = 0.0;
};

/// A pair of offset functions (f1, f2) over the base domain. The transport
/// moves each point by w = f1 N1 + f2 N2.
class OffsetField {
 public:
  using ValueFn = std::function<std::array<double, 2>(double, double)>;
  /// Returns (f1_u, f1_v, f2_u, f2_v).
  using GradientFn = std::function<std::array<double, 4>(double, double)>;

  /// With an empty `gradient`, partials come from central differences of
  /// `values` with step kOffsetStep.
  OffsetField(OffsetKind kind, std::string description, ValueFn values, GradientFn gradient = {});

  OffsetKind kind() const { return kind_; }
  const std::string& description() const { return description_; }
  bool exact_derivatives() const { return static_cast<bool>(gradient_); }

  std::array<double, 2> values(double u, double v) const { return values_(u, v); }
  OffsetSample sample(double u, double v) const;

 private:
  OffsetKind kind_;
  std::string description_;
  ValueFn values_;
  GradientFn gradient_;
};

OffsetField constant_offsets(double f1, double f2);

/// f1, f2 given as expressions in u, v and `params`; exact derivatives.
OffsetField custom_offsets(std::string_view f1, std::string_view f2, const ParamMap& params = {});

/// f_alpha = H_alpha of the base in the given frame.
OffsetField htype_offsets(const SurfacePatch& base, const FrameProvider& frames);
/// f_alpha = K_alpha of the base in the given frame.
OffsetField ktype_offsets(const SurfacePatch& base, const FrameProvider& frames);
/// Pointwise solution of the evolute system; throws GeometryError at points
/// where no evolute offset exists.
OffsetField evolute_offsets(const SurfacePatch& base, const FrameProvider& frames);

/// Offset spec as used on the command line:
///   constant:f1,f2 | htype | ktype | evolute | custom:<expr1>;<expr2>
OffsetField parse_offset_spec(std::string_view spec, const SurfacePatch& base,
                              const FrameProvider& frames, const ParamMap& params = {});

struct TangentPair {
  Vec4 xu, xv;
};

/// Tangents of the transport from base data at one point:
///   x~_u = (1 - f1 c1^11 - f2 c2^11) x_u - (f1 c1^12 + f2 c2^12) x_v
///          + ((f1)_u - f2 T1) N1 + ((f2)_u + f1 T1) N2
/// and the analogue for x~_v with c^21, c^22 and T2.
TangentPair transport_tangents(const Jet2& j, const NormalFrame& f, const WeingartenForms& w,
                               const Torsion& t, const OffsetSample& off);

/// x~(u,v) = x(u,v) + f1 N1 + f2 N2.
class TransportSurface {
 public:
  TransportSurface(SurfacePatch base, FrameProvider frames, OffsetField offsets);

  const SurfacePatch& base() const { return base_; }
  const FrameProvider& frames() const { return frames_; }
  const OffsetField& offsets() const { return offsets_; }

  Point4 position(double u, double v) const;

  /// Central differences of the composed map.
  TangentPair tangents_direct(double u, double v, double h = kJetStep) const;
  /// Expansion through the base invariants and torsion (transport_tangents).
  TangentPair tangents_expansion(double u, double v) const;

  /// The transport as a patch with finite-difference jets, for analysing it
  /// as a surface in its own right.
  SurfacePatch as_patch() const;

 private:
  SurfacePatch base_;
  FrameProvider frames_;
  OffsetField offsets_;
};

TransportSurface transport_surface(const SurfacePatch& base, const OffsetField& offsets);

struct RegularityNode {
  double u = 0.0, v = 0.0;
  double gram = 0.0;
  bool degenerate = false;
};

struct RegularityReport {
  std::string surface;
  std::string offsets;
  std::string frame;
  GridSpec grid;
  std::vector<RegularityNode> nodes;
  std::size_t degenerate_count = 0;
  double min_gram = 0.0;
  double max_gram = 0.0;

  double degenerate_fraction() const {
    return nodes.empty() ? 0.0 : static_cast<double>(degenerate_count) / static_cast<double>(nodes.size());
  }
  bool any_degenerate() const { return degenerate_count > 0; }
};

/// Gram determinant of the direct tangents at every node; nodes with
/// gram <= kDegenerateGram are flagged.
RegularityReport regularity_report(const TransportSurface& ts, const GridSpec& grid);

nlohmann::json to_json(const RegularityReport& r);

}  // namespace ntsurf
