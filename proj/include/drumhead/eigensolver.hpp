#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "drumhead/mesh.hpp"

namespace drumhead {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Green's-operator eigenvalues mu_i = 1 / lambda_i, ordered by ascending lambda.
using Spectrum = Eigen::VectorXd;

/// P1 stiffness and mass matrices restricted to the unknowns of the system.
struct FemSystem {
  SparseMatrix stiffness;
  SparseMatrix mass;
  std::vector<int> unknown_to_node;
  std::vector<int> node_to_unknown;  // -1 for eliminated (Dirichlet) nodes

  Eigen::Index size() const { return stiffness.rows(); }
};

/// Element matrices of the linear triangle (p0, p1, p2).
Eigen::Matrix3d element_stiffness(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                                  const Eigen::Vector2d& p2);
Eigen::Matrix3d element_mass(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                             const Eigen::Vector2d& p2);

/// Assembles over all nodes, or over interior nodes only when `dirichlet` is set
/// (homogeneous Dirichlet data imposed by deleting boundary rows and columns).
FemSystem assemble_p1(const TriMesh& mesh, bool dirichlet = true);

enum class EigenMethod {
  automatic,  // dense below EigenOptions::dense_limit unknowns, Krylov above
  dense,      // Cholesky reduction of the mass matrix + dense symmetric eigensolver
  krylov,     // block Krylov on K^{-1} M with a sparse LDL^T factorization
};

struct EigenOptions {
  EigenMethod method = EigenMethod::automatic;
  Eigen::Index dense_limit = 300;
  int block_size = 4;
  double tolerance = 1e-11;  // relative M-norm residual of each Ritz pair
};

/// The n_eigs smallest generalized eigenvalues of K u = lambda M u, ascending.
Eigen::VectorXd dirichlet_eigenvalues(const FemSystem& sys, int n_eigs, const EigenOptions& opts = {});

/// Reciprocals 1/lambda in the same index order; rejects non-positive input.
Spectrum green_spectrum(const Eigen::VectorXd& lambdas);

}  // namespace drumhead
