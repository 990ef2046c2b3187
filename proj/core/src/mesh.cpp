#include "ntsurf/mesh.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "ntsurf/errors.hpp"

namespace ntsurf {

Projection Projection::drop(int k) {
  if (k < 1 || k > 4) throw ConfigError(fmt::format("drop projection needs a coordinate 1..4, got {}", k));
  const auto skip = static_cast<std::size_t>(k - 1);
  return Projection(fmt::format("drop:{}", k), [skip](const Point4& p) {
    std::array<double, 3> out{};
    std::size_t n = 0;
    for (std::size_t i = 0; i < 4; ++i)
      if (i != skip) out[n++] = p.c[i];
    return out;
  });
}

Projection Projection::stereographic() {
  return Projection("stereo", [](const Point4& p) {
    const double len = norm(p);
    if (!(len > 0.0)) return std::array<double, 3>{0.0, 0.0, 0.0};
    const Vec4 q = p / len;
    const double denom = 1.0 - q.c[3];
    if (std::fabs(denom) < 1e-12) {
      constexpr double inf = HUGE_VAL;
      return std::array<double, 3>{inf, inf, inf};
    }
    return std::array<double, 3>{q.c[0] / denom, q.c[1] / denom, q.c[2] / denom};
  });
}

Projection Projection::parse(std::string_view spec) {
  if (spec == "stereo") return stereographic();
  if (spec.substr(0, 5) == "drop:") {
    const std::string_view digits = spec.substr(5);
    int k = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) return drop(k);
  }
  throw ConfigError(fmt::format("unknown projection '{}' (expected drop:k or stereo)", spec));
}

std::array<double, 3> Projection::operator()(const Point4& p) const { return fn_(p); }

TriangleMesh grid_mesh(const GridSpec& grid, const std::function<Point4(double, double)>& f,
                       const Projection& proj) {
  grid.validate();
  TriangleMesh m;
  m.vertices.reserve(grid.size());
  for (int i = 0; i < grid.nu; ++i)
    for (int j = 0; j < grid.nv; ++j) m.vertices.push_back(proj(f(grid.u(i), grid.v(j))));
  m.faces.reserve(2 * static_cast<std::size_t>(grid.nu - 1) * static_cast<std::size_t>(grid.nv - 1));
  for (int i = 0; i + 1 < grid.nu; ++i)
    for (int j = 0; j + 1 < grid.nv; ++j) {
      const std::size_t a = grid.index(i, j), b = grid.index(i + 1, j);
      const std::size_t c = grid.index(i + 1, j + 1), d = grid.index(i, j + 1);
      m.faces.push_back({a, b, c});
      m.faces.push_back({a, c, d});
    }
  return m;
}

void write_obj(std::ostream& out, const TriangleMesh& mesh) {
  for (const auto& v : mesh.vertices) out << fmt::format("v {:.12g} {:.12g} {:.12g}\n", v[0], v[1], v[2]);
  for (const auto& f : mesh.faces) out << fmt::format("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1);
}

}  // namespace ntsurf
