#include "drumhead/spectral_map.hpp"

#include <cmath>
#include <stdexcept>

#include "drumhead/parallel.hpp"

namespace drumhead {

int ladder_rings(int n_eigs) {
  return std::max(48, 4 * int(std::ceil(8.0 * std::sqrt(double(n_eigs)))));
}

SpectralMapConfig SpectralMapConfig::with_ladder(int n_eigs) {
  SpectralMapConfig cfg;
  cfg.n_eigs = n_eigs;
  cfg.mesh_rings = ladder_rings(n_eigs);
  cfg.mesh_sectors = 2 * cfg.mesh_rings;
  return cfg;
}

SpectralMapConfig SpectralMapConfig::resolved() const {
  SpectralMapConfig r = *this;
  if (r.mesh_rings == 0) r.mesh_rings = ladder_rings(n_eigs);
  if (r.mesh_sectors == 0) r.mesh_sectors = 2 * r.mesh_rings;
  return r;
}

void SpectralMapConfig::validate() const {
  if (n_eigs < 1) throw std::invalid_argument("SpectralMapConfig: n_eigs must be >= 1");
  if (mesh_rings < 0 || mesh_sectors < 0) throw std::invalid_argument("SpectralMapConfig: negative mesh size");
  const SpectralMapConfig r = resolved();
  if (r.mesh_rings < 1 || r.mesh_sectors < 3)
    throw std::invalid_argument("SpectralMapConfig: mesh needs >= 1 ring and >= 3 sectors");
  const long interior = 1L + long(r.mesh_rings - 1) * r.mesh_sectors;
  if (interior < n_eigs)
    throw std::invalid_argument("SpectralMapConfig: mesh has fewer interior nodes than n_eigs");
  if (!(fd_step > 0.0)) throw std::invalid_argument("SpectralMapConfig: fd_step must be positive");
}

Spectrum sigma(const Shape& shape, const SpectralMapConfig& cfg) {
  cfg.validate();
  const SpectralMapConfig r = cfg.resolved();
  const TriMesh mesh = build_polar_mesh(shape, r.mesh_rings, r.mesh_sectors);
  return green_spectrum(dirichlet_eigenvalues(assemble_p1(mesh), r.n_eigs, r.eigen));
}

double spectral_distance(const Spectrum& u, const Spectrum& v) {
  if (u.size() != v.size()) throw std::invalid_argument("spectral_distance: length mismatch");
  return (u - v).norm();
}

Jacobian jacobian_fd(const Shape& shape, const SpectralMapConfig& cfg, int workers) {
  cfg.validate();
  const Eigen::Index m = shape.dof();
  const double h = cfg.fd_step;
  Jacobian jac{Eigen::MatrixXd(cfg.n_eigs, m), shape.coefficients()};

  auto column = [&](Eigen::Index j) {
    Eigen::VectorXd plus = shape.coefficients(), minus = shape.coefficients();
    plus(j) += h;
    minus(j) -= h;
    jac.values.col(j) =
        (sigma(shape.with_coefficients(plus), cfg) - sigma(shape.with_coefficients(minus), cfg)) / (2.0 * h);
  };

  parallel_for(std::size_t(m), workers, [&](std::size_t j) { column(Eigen::Index(j)); });
  return jac;
}

}  // namespace drumhead
