#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace ntsurf {

/// A vector (or point) of Euclidean 4-space.
struct Vec4 {
  std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

  constexpr Vec4() = default;
  constexpr Vec4(double x0, double x1, double x2, double x3) : c{x0, x1, x2, x3} {}

  constexpr double& operator[](std::size_t i) { return c[i]; }
  constexpr double operator[](std::size_t i) const { return c[i]; }

  constexpr Vec4& operator+=(const Vec4& o) {
    for (std::size_t i = 0; i < 4; ++i) c[i] += o.c[i];
    return *this;
  }
  constexpr Vec4& operator-=(const Vec4& o) {
    for (std::size_t i = 0; i < 4; ++i) c[i] -= o.c[i];
    return *this;
  }
  constexpr Vec4& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }
  constexpr Vec4& operator/=(double s) {
    for (auto& x : c) x /= s;
    return *this;
  }

  friend constexpr bool operator==(const Vec4&, const Vec4&) = default;
};

using Point4 = Vec4;

constexpr Vec4 operator+(Vec4 a, const Vec4& b) { return a += b; }
constexpr Vec4 operator-(Vec4 a, const Vec4& b) { return a -= b; }
constexpr Vec4 operator-(Vec4 a) { return a *= -1.0; }
constexpr Vec4 operator*(Vec4 a, double s) { return a *= s; }
constexpr Vec4 operator*(double s, Vec4 a) { return a *= s; }
constexpr Vec4 operator/(Vec4 a, double s) { return a /= s; }

constexpr double dot(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}
inline double norm(const Vec4& a) { return std::sqrt(dot(a, a)); }

/// Largest absolute component.
inline double max_abs(const Vec4& a) {
  double m = 0.0;
  for (double x : a.c) m = std::fmax(m, std::fabs(x));
  return m;
}

inline bool is_finite(const Vec4& a) {
  for (double x : a.c)
    if (!std::isfinite(x)) return false;
  return true;
}

/// Unit basis vector e_k, k in [0, 4).
constexpr Vec4 basis(std::size_t k) {
  Vec4 e;
  e[k] = 1.0;
  return e;
}

inline std::ostream& operator<<(std::ostream& os, const Vec4& a) {
  return os << '(' << a[0] << ", " << a[1] << ", " << a[2] << ", " << a[3] << ')';
}

}  // namespace ntsurf
