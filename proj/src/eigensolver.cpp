#include "drumhead/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseCholesky>

#include "drumhead/errors.hpp"
#include "drumhead/linalg.hpp"
#include "drumhead/rng.hpp"

namespace drumhead {

namespace {

constexpr double kMinTriangleArea = 1e-14;

double twice_area(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1, const Eigen::Vector2d& p2) {
  return (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
}

}  // namespace

Eigen::Matrix3d element_stiffness(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                                  const Eigen::Vector2d& p2) {
  const double area = 0.5 * twice_area(p0, p1, p2);
  // Hat-function gradients are (b_i, c_i) / (2 area).
  Eigen::Matrix<double, 2, 3> g;
  g << p1.y() - p2.y(), p2.y() - p0.y(), p0.y() - p1.y(),  //
      p2.x() - p1.x(), p0.x() - p2.x(), p1.x() - p0.x();
  return g.transpose() * g / (4.0 * area);
}

Eigen::Matrix3d element_mass(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                             const Eigen::Vector2d& p2) {
  const double area = 0.5 * twice_area(p0, p1, p2);
  return (Eigen::Matrix3d::Ones() + Eigen::Matrix3d::Identity()) * (area / 12.0);
}

FemSystem assemble_p1(const TriMesh& mesh, bool dirichlet) {
  FemSystem sys;
  sys.node_to_unknown.assign(std::size_t(mesh.node_count()), -1);
  for (Eigen::Index i = 0; i < mesh.node_count(); ++i) {
    if (dirichlet && mesh.boundary[std::size_t(i)]) continue;
    sys.node_to_unknown[std::size_t(i)] = int(sys.unknown_to_node.size());
    sys.unknown_to_node.push_back(int(i));
  }
  const auto n = Eigen::Index(sys.unknown_to_node.size());

  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(std::size_t(mesh.triangle_count()) * 9);
  mt.reserve(std::size_t(mesh.triangle_count()) * 9);
  for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
    const Eigen::Vector2d p0 = mesh.nodes.col(mesh.triangles(0, t));
    const Eigen::Vector2d p1 = mesh.nodes.col(mesh.triangles(1, t));
    const Eigen::Vector2d p2 = mesh.nodes.col(mesh.triangles(2, t));
    if (0.5 * twice_area(p0, p1, p2) < kMinTriangleArea)
      throw NumericalError("assemble_p1: degenerate or inverted triangle " + std::to_string(t));
    const Eigen::Matrix3d ke = element_stiffness(p0, p1, p2);
    const Eigen::Matrix3d me = element_mass(p0, p1, p2);
    for (int a = 0; a < 3; ++a) {
      const int ia = sys.node_to_unknown[std::size_t(mesh.triangles(a, t))];
      if (ia < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int ib = sys.node_to_unknown[std::size_t(mesh.triangles(b, t))];
        if (ib < 0) continue;
        kt.emplace_back(ia, ib, ke(a, b));
        mt.emplace_back(ia, ib, me(a, b));
      }
    }
  }
  sys.stiffness.resize(n, n);
  sys.mass.resize(n, n);
  sys.stiffness.setFromTriplets(kt.begin(), kt.end());
  sys.mass.setFromTriplets(mt.begin(), mt.end());
  return sys;
}

namespace {

Eigen::VectorXd dense_eigenvalues(const FemSystem& sys, int n_eigs) {
  const Eigen::MatrixXd k = Eigen::MatrixXd(sys.stiffness);
  const Eigen::MatrixXd l = linalg::cholesky(Eigen::MatrixXd(sys.mass));
  // C = L^{-1} K L^{-T}
  Eigen::MatrixXd c = l.triangularView<Eigen::Lower>().solve(k);
  c = l.triangularView<Eigen::Lower>().solve(c.transpose()).transpose();
  c = 0.5 * (c + c.transpose()).eval();
  return linalg::sym_eig(c).values.head(n_eigs);
}

// M-orthonormal block Krylov basis for Op = K^{-1} M. Op is self-adjoint in the
// M inner product, so its Rayleigh quotient H = V^T M Op V is symmetric and the
// largest Ritz values approximate 1 / lambda for the smallest lambda.
class KrylovSolver {
 public:
  KrylovSolver(const FemSystem& sys, int n_eigs, const EigenOptions& opts)
      : sys_(sys), n_eigs_(n_eigs), opts_(opts), n_(sys.size()) {
    ldlt_.compute(sys.stiffness);
    if (ldlt_.info() != Eigen::Success)
      throw NumericalError("dirichlet_eigenvalues: stiffness factorization failed");
    reserve(std::min<Eigen::Index>(n_, 2 * n_eigs_ + 8 * std::max(1, opts_.block_size)));
  }

  Eigen::VectorXd solve() {
    const int b = std::max(1, opts_.block_size);
    Eigen::MatrixXd pending = seed_block(b);
    Eigen::Index since_check = 0;
    while (k_ < n_) {
      const Eigen::Index before = k_;
      for (Eigen::Index c = 0; c < pending.cols() && k_ < n_; ++c) append(pending.col(c));
      if (k_ == before) {
        // Invariant subspace reached; continue with fresh directions.
        pending = seed_block(b);
        for (Eigen::Index c = 0; c < pending.cols() && k_ < n_; ++c) append(pending.col(c));
        if (k_ == before) break;
      }
      since_check += k_ - before;
      if (k_ >= n_eigs_ + b && (since_check >= b || k_ == n_)) {
        since_check = 0;
        Eigen::VectorXd result;
        if (converged(result)) return result;
      }
      pending = images_.middleCols(before, k_ - before);
    }
    Eigen::VectorXd result;
    if (k_ >= n_eigs_ && converged(result, /*force=*/k_ == n_)) return result;
    throw NumericalError("dirichlet_eigenvalues: Krylov iteration did not converge");
  }

 private:
  Eigen::MatrixXd seed_block(int b) {
    Eigen::MatrixXd v(n_, b);
    for (int c = 0; c < b; ++c) {
      const std::uint64_t stream = child_seed(0x5eed, seeds_used_++);
      for (Eigen::Index i = 0; i < n_; ++i)
        v(i, c) = double(mix64(stream ^ std::uint64_t(i)) >> 11) * 0x1.0p-53 - 0.5;
    }
    return v;
  }

  void append(Eigen::VectorXd w) {
    const double start = std::sqrt(w.dot(sys_.mass * w));
    if (!(start > 0.0)) return;
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd coeffs = mbasis_.leftCols(k_).transpose() * w;
      w.noalias() -= basis_.leftCols(k_) * coeffs;
    }
    const Eigen::VectorXd mw = sys_.mass * w;
    const double norm = std::sqrt(std::max(0.0, w.dot(mw)));
    if (norm <= 1e-10 * start) return;
    if (k_ == basis_.cols()) reserve(std::min<Eigen::Index>(n_, 2 * k_));
    basis_.col(k_) = w / norm;
    mbasis_.col(k_) = mw / norm;
    images_.col(k_) = ldlt_.solve(mbasis_.col(k_));
    ++k_;
  }

  void reserve(Eigen::Index cols) {
    basis_.conservativeResize(n_, cols);
    mbasis_.conservativeResize(n_, cols);
    images_.conservativeResize(n_, cols);
  }

  bool converged(Eigen::VectorXd& lambdas, bool force = false) {
    Eigen::MatrixXd h = mbasis_.leftCols(k_).transpose() * images_.leftCols(k_);
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) return false;
    lambdas.resize(n_eigs_);
    for (int i = 0; i < n_eigs_; ++i) {
      const Eigen::Index col = k_ - 1 - i;  // descending Ritz values
      const double theta = es.eigenvalues()(col);
      if (!(theta > 0.0)) throw NumericalError("dirichlet_eigenvalues: non-positive Ritz value");
      if (!force) {
        const Eigen::VectorXd s = es.eigenvectors().col(col);
        const Eigen::VectorXd r = images_.leftCols(k_) * s - theta * (basis_.leftCols(k_) * s);
        const double rnorm = std::sqrt(std::max(0.0, r.dot(sys_.mass * r)));
        if (rnorm > opts_.tolerance * theta) return false;
      }
      lambdas(i) = 1.0 / theta;
    }
    return true;
  }

  const FemSystem& sys_;
  int n_eigs_;
  EigenOptions opts_;
  Eigen::Index n_;
  Eigen::Index k_ = 0;
  std::uint64_t seeds_used_ = 0;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  Eigen::MatrixXd basis_, mbasis_, images_;
};

}  // namespace

Eigen::VectorXd dirichlet_eigenvalues(const FemSystem& sys, int n_eigs, const EigenOptions& opts) {
  if (n_eigs < 1) throw std::invalid_argument("dirichlet_eigenvalues: n_eigs must be >= 1");
  if (n_eigs > sys.size())
    throw std::invalid_argument("dirichlet_eigenvalues: n_eigs exceeds the number of interior nodes");

  const bool dense = opts.method == EigenMethod::dense ||
                     (opts.method == EigenMethod::automatic && sys.size() <= opts.dense_limit);
  Eigen::VectorXd lambdas = dense ? dense_eigenvalues(sys, n_eigs) : KrylovSolver(sys, n_eigs, opts).solve();
  if (!(lambdas.minCoeff() > 0.0))
    throw NumericalError("dirichlet_eigenvalues: non-positive eigenvalue (is the Dirichlet elimination intact?)");
  return lambdas;
}

Spectrum green_spectrum(const Eigen::VectorXd& lambdas) {
  if (lambdas.size() > 0 && !(lambdas.minCoeff() > 0.0))
    throw NumericalError("green_spectrum: eigenvalues must be strictly positive");
  return lambdas.cwiseInverse();
}

}  // namespace drumhead
