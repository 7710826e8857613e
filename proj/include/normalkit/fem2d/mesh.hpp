#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "normalkit/core.hpp"

namespace normalkit::fem2d {

/// Uniform mx × my grid on the unit square, every cell split along the
/// diagonal from (i, j) to (i+1, j+1). Vertex (i, j) has global index
/// j·(mx+1) + i; interior vertices are numbered x-fastest from 0.
class StructuredMesh {
 public:
  StructuredMesh(Index mx, Index my);
  /// Square mesh with m cells per side.
  explicit StructuredMesh(Index m) : StructuredMesh(m, m) {}

  Index mx() const noexcept { return mx_; }
  Index my() const noexcept { return my_; }
  double hx() const noexcept { return 1.0 / static_cast<double>(mx_); }
  double hy() const noexcept { return 1.0 / static_cast<double>(my_); }

  Index num_nodes() const noexcept { return (mx_ + 1) * (my_ + 1); }
  Index num_interior() const noexcept { return (mx_ - 1) * (my_ - 1); }
  Index num_triangles() const noexcept { return 2 * mx_ * my_; }

  Index node(Index i, Index j) const noexcept { return j * (mx_ + 1) + i; }
  std::array<double, 2> coords(Index node) const;
  /// Interior index of a vertex, or −1 on the boundary.
  Index interior_index(Index node) const;
  /// Global vertex index of interior unknown k.
  Index interior_node(Index k) const;
  /// Counterclockwise vertex triples, two per cell.
  std::array<Index, 3> triangle(Index t) const;

 private:
  Index mx_;
  Index my_;
};

using Field2D = std::function<double(double, double)>;

/// Writes `x,y,u` for every vertex; boundary vertices take `boundary` (zero
/// when empty) and interior vertices the entries of `u`.
void write_solution_csv(std::ostream& out, const StructuredMesh& mesh, ConstSpan u,
                        const Field2D& boundary = {});
void write_solution_csv(const std::string& path, const StructuredMesh& mesh, ConstSpan u,
                        const Field2D& boundary = {});

}  // namespace normalkit::fem2d
