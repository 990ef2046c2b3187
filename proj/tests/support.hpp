#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ntsurf/errors.hpp"
#include "ntsurf/expr.hpp"
#include "ntsurf/patch.hpp"

namespace ntsurf::test_support {

/// Uniform points in the domain shrunk by `margin` of its extent on each
/// side, so finite-difference stencils stay inside.
inline std::vector<std::pair<double, double>> random_points(const Domain& d, int n, std::uint64_t seed,
                                                           double margin = 0.02) {
  std::mt19937_64 rng(seed);
  const double mu = margin * d.u_extent(), mv = margin * d.v_extent();
  std::uniform_real_distribution<double> du(d.u_min + mu, d.u_max - mu), dv(d.v_min + mv, d.v_max - mv);
  std::vector<std::pair<double, double>> out;
  for (int k = 0; k < n; ++k) {
    const double u = du(rng);
    out.emplace_back(u, dv(rng));
  }
  return out;
}

/// Random expression text over u, v and the parameters a, b.
class ExpressionGenerator {
 public:
  explicit ExpressionGenerator(std::uint64_t seed) : rng_(seed) {}

  std::string operator()(int depth) { return node(depth); }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string leaf() {
    switch (pick(5)) {
      case 0: return "u";
      case 1: return "v";
      case 2: return "a";
      case 3: return "b";
      default: {
        const double x = std::round(std::uniform_real_distribution<double>(0.1, 3.0)(rng_) * 100.0) / 100.0;
        return std::to_string(x).substr(0, 4);
      }
    }
  }

  std::string node(int depth) {
    if (depth <= 0 || pick(4) == 0) return leaf();
    static const char* kFuncs[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh"};
    switch (pick(8)) {
      case 0: return "(" + node(depth - 1) + "+" + node(depth - 1) + ")";
      case 1: return "(" + node(depth - 1) + "-" + node(depth - 1) + ")";
      case 2:
      case 3: return "(" + node(depth - 1) + "*" + node(depth - 1) + ")";
      case 4: return "(" + node(depth - 1) + "/" + node(depth - 1) + ")";
      case 5: return "(" + node(depth - 1) + ")^" + (pick(2) ? std::to_string(1 + pick(3)) : leaf());
      case 6: return "-" + node(depth - 1);
      default: return std::string(kFuncs[pick(8)]) + "(" + node(depth - 1) + ")";
    }
  }

  std::mt19937_64 rng_;
};

/// Evaluates, returning nullopt on a domain error or a value whose magnitude
/// makes finite differences meaningless.
inline std::optional<double> try_eval(const expr::Expression& e, const expr::Bindings& b, double cap = 1e3) {
  try {
    const double x = expr::evaluate(e, b);
    if (!(std::fabs(x) <= cap)) return std::nullopt;
    return x;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}


/// Central difference of `e` in `var` at step h. Returns nullopt when the
/// stencil leaves the domain or when the h and 2h stencils differ by more
/// than `consistency` relative: the function then varies on the scale of h
/// and the difference quotient cannot serve as an oracle.
inline std::optional<double> central_difference(const expr::Expression& e, expr::Bindings b, const std::string& var,
                                                double h, double consistency = 1e-6) {
  const double x = b.at(var);
  std::array<std::optional<double>, 4> f;
  const std::array<double, 4> at{x + h, x - h, x + 2 * h, x - 2 * h};
  for (std::size_t k = 0; k < 4; ++k) {
    b[var] = at[k];
    f[k] = try_eval(e, b);
    if (!f[k]) return std::nullopt;
  }
  const double d1 = (*f[0] - *f[1]) / (2 * h), d2 = (*f[2] - *f[3]) / (4 * h);
  if (std::fabs(d1 - d2) > consistency * (1 + std::fabs(d1))) return std::nullopt;
  return d1;
}

inline double jet_distance(const Jet2& a, const Jet2& b) {
  return std::max({max_abs(a.x - b.x), max_abs(a.xu - b.xu), max_abs(a.xv - b.xv), max_abs(a.xuu - b.xuu),
                   max_abs(a.xuv - b.xuv), max_abs(a.xvv - b.xvv)});
}

}  // namespace ntsurf::test_support
