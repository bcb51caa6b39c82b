#pragma once

#include <Eigen/Core>

#include "drumhead/eigensolver.hpp"
#include "drumhead/shape.hpp"

namespace drumhead {

/// Ring count of the default resolution ladder: max(48, 4 ceil(8 sqrt N)).
int ladder_rings(int n_eigs);

/// Discretization of the spectral map sigma: R^M -> R^N.
struct SpectralMapConfig {
  int n_eigs = 10;
  int mesh_rings = 0;    // 0: take the ladder value for n_eigs
  int mesh_sectors = 0;  // 0: 2 * mesh_rings
  double fd_step = 1e-4;
  EigenOptions eigen;

  /// n_eigs with the ladder resolution (n_sectors = 2 n_rings).
  static SpectralMapConfig with_ladder(int n_eigs);

  /// Copy with zero mesh fields replaced by their ladder values.
  SpectralMapConfig resolved() const;

  void validate() const;
};

Spectrum sigma(const Shape& shape, const SpectralMapConfig& cfg);

/// Euclidean distance in spectral space.
double spectral_distance(const Spectrum& u, const Spectrum& v);

/// N x M matrix of d mu_i / d coefficient_j, with the point it was evaluated at.
struct Jacobian {
  Eigen::MatrixXd values;
  Eigen::VectorXd evaluated_at;
};

/// Central differences, one coefficient at a time; 2M spectrum solves, optionally
/// spread over `workers` threads. Columns are assembled by index, so the result
/// does not depend on the worker count.
Jacobian jacobian_fd(const Shape& shape, const SpectralMapConfig& cfg, int workers = 1);

}  // namespace drumhead
