#pragma once

#include <cstddef>
#include <string>

#include "ntsurf/errors.hpp"

namespace ntsurf {

/// Closed parameter box [u_min, u_max] x [v_min, v_max].
struct Domain {
  double u_min = 0.0;
  double u_max = 1.0;
  double v_min = 0.0;
  double v_max = 1.0;

  double u_extent() const { return u_max - u_min; }
  double v_extent() const { return v_max - v_min; }

  /// True when (u, v) lies in the box grown by `slack` on every side.
  bool contains(double u, double v, double slack = 0.0) const {
    return u >= u_min - slack && u <= u_max + slack && v >= v_min - slack &&
           v <= v_max + slack;
  }

  void validate() const {
    if (!(u_min < u_max) || !(v_min < v_max))
      throw ConfigError("degenerate domain box");
  }
};

/// Rectangular sampling grid over a parameter box. Nodes include both box
/// edges; node (i, j) has u = u_min + i*du, v = v_min + j*dv.
struct GridSpec {
  int nu = 2;
  int nv = 2;
  Domain box;

  GridSpec() = default;
  GridSpec(int nu_, int nv_, Domain box_) : nu(nu_), nv(nv_), box(box_) { validate(); }

  void validate() const {
    if (nu < 2 || nv < 2) throw ConfigError("grid must be at least 2x2");
    box.validate();
  }

  double du() const { return box.u_extent() / (nu - 1); }
  double dv() const { return box.v_extent() / (nv - 1); }
  double u(int i) const { return i == nu - 1 ? box.u_max : box.u_min + i * du(); }
  double v(int j) const { return j == nv - 1 ? box.v_max : box.v_min + j * dv(); }
  std::size_t size() const { return static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv); }
  /// Row-major in u: u is the outer index.
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(nv) + static_cast<std::size_t>(j);
  }
  bool interior(int i, int j) const { return i > 0 && j > 0 && i < nu - 1 && j < nv - 1; }

  std::string to_string() const {
    return std::to_string(nu) + "x" + std::to_string(nv);
  }
};

}  // namespace ntsurf
