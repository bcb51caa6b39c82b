#include "drumhead/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "drumhead/io.hpp"

namespace drumhead {

int TriMesh::node_index(int ring, int sector) const {
  return 1 + (ring - 1) * n_sectors + ((sector % n_sectors) + n_sectors) % n_sectors;
}

double TriMesh::signed_area(Eigen::Index t) const {
  const Eigen::Vector2d a = nodes.col(triangles(0, t));
  const Eigen::Vector2d e1 = nodes.col(triangles(1, t)) - a;
  const Eigen::Vector2d e2 = nodes.col(triangles(2, t)) - a;
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

TriMesh build_polar_mesh(const Shape& shape, int n_rings, int n_sectors) {
  if (n_rings < 1) throw std::invalid_argument("build_polar_mesh: n_rings must be >= 1");
  if (n_sectors < 3) throw std::invalid_argument("build_polar_mesh: n_sectors must be >= 3");

  TriMesh mesh;
  mesh.n_rings = n_rings;
  mesh.n_sectors = n_sectors;
  const Eigen::Index n_nodes = 1 + Eigen::Index(n_rings) * n_sectors;
  mesh.nodes.resize(2, n_nodes);
  mesh.nodes.col(0).setZero();
  mesh.boundary.assign(std::size_t(n_nodes), false);

  for (int j = 0; j < n_sectors; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / n_sectors;
    const double r = radius(shape, phi);
    const double cx = std::cos(phi), cy = std::sin(phi);
    for (int i = 1; i <= n_rings; ++i) {
      const double f = double(i) / n_rings;
      const int idx = mesh.node_index(i, j);
      mesh.nodes(0, idx) = f * r * cx;
      mesh.nodes(1, idx) = f * r * cy;
    }
    mesh.boundary[std::size_t(mesh.node_index(n_rings, j))] = true;
  }

  mesh.triangles.resize(3, Eigen::Index(n_sectors) * (2 * n_rings - 1));
  Eigen::Index t = 0;
  for (int j = 0; j < n_sectors; ++j)
    mesh.triangles.col(t++) << 0, mesh.node_index(1, j), mesh.node_index(1, j + 1);
  for (int i = 1; i < n_rings; ++i) {
    for (int j = 0; j < n_sectors; ++j) {
      const int p00 = mesh.node_index(i, j), p01 = mesh.node_index(i, j + 1);
      const int p10 = mesh.node_index(i + 1, j), p11 = mesh.node_index(i + 1, j + 1);
      mesh.triangles.col(t++) << p00, p10, p11;
      mesh.triangles.col(t++) << p00, p11, p01;
    }
  }
  return mesh;
}

MeshQuality mesh_quality(const TriMesh& mesh) {
  MeshQuality q{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
    q.min_area = std::min(q.min_area, mesh.signed_area(t));
    for (int c = 0; c < 3; ++c) {
      const Eigen::Vector2d p = mesh.nodes.col(mesh.triangles(c, t));
      const Eigen::Vector2d u = mesh.nodes.col(mesh.triangles((c + 1) % 3, t)) - p;
      const Eigen::Vector2d v = mesh.nodes.col(mesh.triangles((c + 2) % 3, t)) - p;
      const double cross = std::abs(u.x() * v.y() - u.y() * v.x());
      q.min_angle = std::min(q.min_angle, std::atan2(cross, u.dot(v)));
    }
  }
  return q;
}

Eigen::Index edge_count(const TriMesh& mesh) {
  std::vector<std::uint64_t> keys;
  keys.reserve(std::size_t(mesh.triangle_count()) * 3);
  for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
    for (int c = 0; c < 3; ++c) {
      const auto a = std::uint64_t(mesh.triangles(c, t));
      const auto b = std::uint64_t(mesh.triangles((c + 1) % 3, t));
      keys.push_back(std::min(a, b) << 32 | std::max(a, b));
    }
  }
  std::sort(keys.begin(), keys.end());
  return std::unique(keys.begin(), keys.end()) - keys.begin();
}

void write_mesh(std::ostream& os, const TriMesh& mesh) {
  os << mesh.node_count() << ' ' << mesh.triangle_count() << '\n';
  for (Eigen::Index i = 0; i < mesh.node_count(); ++i)
    os << format_double(mesh.nodes(0, i)) << ' ' << format_double(mesh.nodes(1, i)) << '\n';
  for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t)
    os << mesh.triangles(0, t) << ' ' << mesh.triangles(1, t) << ' ' << mesh.triangles(2, t) << '\n';
}

}  // namespace drumhead
