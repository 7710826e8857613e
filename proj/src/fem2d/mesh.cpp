#include "normalkit/fem2d/mesh.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace normalkit::fem2d {

StructuredMesh::StructuredMesh(Index mx, Index my) : mx_(mx), my_(my) {
  if (mx < 1 || my < 1) throw ConfigError("StructuredMesh: at least one cell per side required");
}

std::array<double, 2> StructuredMesh::coords(Index node) const {
  const Index i = node % (mx_ + 1);
  const Index j = node / (mx_ + 1);
  return {static_cast<double>(i) * hx(), static_cast<double>(j) * hy()};
}

Index StructuredMesh::interior_index(Index node) const {
  const Index i = node % (mx_ + 1);
  const Index j = node / (mx_ + 1);
  if (i == 0 || j == 0 || i == mx_ || j == my_) return -1;
  return (j - 1) * (mx_ - 1) + (i - 1);
}

Index StructuredMesh::interior_node(Index k) const {
  const Index i = k % (mx_ - 1) + 1;
  const Index j = k / (mx_ - 1) + 1;
  return node(i, j);
}

std::array<Index, 3> StructuredMesh::triangle(Index t) const {
  const Index cell = t / 2;
  const Index i = cell % mx_;
  const Index j = cell / mx_;
  if (t % 2 == 0) return {node(i, j), node(i + 1, j), node(i + 1, j + 1)};
  return {node(i, j), node(i + 1, j + 1), node(i, j + 1)};
}

void write_solution_csv(std::ostream& out, const StructuredMesh& mesh, ConstSpan u,
                        const Field2D& boundary) {
  require_size(u.size(), static_cast<std::size_t>(mesh.num_interior()), "write_solution_csv");
  out << "x,y,u\n";
  char buf[96];
  for (Index v = 0; v < mesh.num_nodes(); ++v) {
    const auto [x, y] = mesh.coords(v);
    const Index k = mesh.interior_index(v);
    const double val = k >= 0 ? u[static_cast<std::size_t>(k)] : (boundary ? boundary(x, y) : 0.0);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x, y, val);
    out << buf;
  }
}

void write_solution_csv(const std::string& path, const StructuredMesh& mesh, ConstSpan u,
                        const Field2D& boundary) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_solution_csv(out, mesh, u, boundary);
}

}  // namespace normalkit::fem2d
