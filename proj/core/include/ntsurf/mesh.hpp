#pragma once

#include <array>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ntsurf/grid.hpp"
#include "ntsurf/vec4.hpp"

namespace ntsurf {

/// Map from E^4 to E^3 for viewing.
class Projection {
 public:
  /// "drop:k" removes coordinate k (1-based); "stereo" normalises to the
  /// unit 3-sphere and projects stereographically from e4.
  static Projection parse(std::string_view spec);
  static Projection drop(int k);
  static Projection stereographic();

  std::array<double, 3> operator()(const Point4& p) const;
  const std::string& name() const { return name_; }

 private:
  Projection(std::string name, std::function<std::array<double, 3>(const Point4&)> fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}

  std::string name_;
  std::function<std::array<double, 3>(const Point4&)> fn_;
};

/// Vertices row-major over the grid (u outer) and two triangles per cell.
struct TriangleMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<std::size_t, 3>> faces;  // 0-based
};

TriangleMesh grid_mesh(const GridSpec& grid, const std::function<Point4(double, double)>& f,
                       const Projection& proj);

/// Wavefront OBJ: "v x y z" lines then "f i j k" with 1-based indices.
void write_obj(std::ostream& out, const TriangleMesh& mesh);

}  // namespace ntsurf
