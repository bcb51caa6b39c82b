#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "drumhead/shape.hpp"

namespace drumhead {

using Triangles = Eigen::Matrix<int, 3, Eigen::Dynamic>;

/// Structured polar triangulation: node 0 at the origin, then n_rings rings of
/// n_sectors nodes each; ring i, sector j sits at (i / n_rings) r(phi_j) (cos phi_j, sin phi_j).
struct TriMesh {
  Points nodes;
  Triangles triangles;  // counterclockwise
  std::vector<bool> boundary;
  int n_rings = 0;
  int n_sectors = 0;

  Eigen::Index node_count() const { return nodes.cols(); }
  Eigen::Index triangle_count() const { return triangles.cols(); }
  int node_index(int ring, int sector) const;  // ring >= 1
  double signed_area(Eigen::Index t) const;
};

TriMesh build_polar_mesh(const Shape& shape, int n_rings, int n_sectors);

struct MeshQuality {
  double min_area;
  double min_angle;  // radians
};

MeshQuality mesh_quality(const TriMesh& mesh);

/// Number of distinct undirected edges.
Eigen::Index edge_count(const TriMesh& mesh);

/// Text dump: "<nodes> <triangles>" header, one "x y" line per node, one "i j k" line per triangle.
void write_mesh(std::ostream& os, const TriMesh& mesh);

}  // namespace drumhead
