#include "deltaloop/sparse_eigen.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "deltaloop/errors.hpp"

namespace deltaloop {

namespace {

using Ldlt = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

SparseMatrix shifted(const SparseMatrix& a, double x) {
  SparseMatrix id(a.rows(), a.cols());
  id.setIdentity();
  SparseMatrix b = a - x * id;
  b.makeCompressed();
  return b;
}

}  // namespace

std::size_t count_below(const SparseMatrix& a, double x) {
  Ldlt ldlt(shifted(a, x));
  if (ldlt.info() != Eigen::Success) throw NumericalError("count_below: LDL^T factorization failed");
  const auto d = ldlt.vectorD();
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d[i])) throw NumericalError("count_below: non-finite pivot");
    if (d[i] < 0.0) ++n;
  }
  return n;
}

EigenPairs lowest_eigenpairs(const SparseMatrix& a, std::size_t m, double shift, double tol, int max_iterations) {
  const auto n = static_cast<std::size_t>(a.rows());
  if (m == 0 || m >= n) throw PreconditionError("lowest_eigenpairs: need 0 < m < dimension");
  const std::size_t p = std::min(n - 1, m + std::max<std::size_t>(4, m / 2));

  Ldlt ldlt(shifted(a, shift));
  if (ldlt.info() != Eigen::Success) throw NumericalError("lowest_eigenpairs: factorization of A - shift I failed");
  const auto d = ldlt.vectorD();
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!(d[i] > 0.0)) {
      std::ostringstream msg;
      msg << "lowest_eigenpairs: shift " << shift << " is not below the spectrum";
      throw NumericalError(msg.str());
    }

  std::mt19937_64 rng(20240611u);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = normal(rng);

  EigenPairs out;
  Eigen::VectorXd theta;
  for (int it = 1; it <= max_iterations; ++it) {
    Eigen::MatrixXd y = ldlt.solve(x);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
    Eigen::MatrixXd aq = a * q;
    Eigen::MatrixXd h = q.transpose() * aq;
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    theta = es.eigenvalues();
    x = q * es.eigenvectors();
    Eigen::MatrixXd ax = aq * es.eigenvectors();

    out.residuals.assign(m, 0.0);
    bool done = true;
    for (std::size_t j = 0; j < m; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      out.residuals[j] = (ax.col(jj) - theta[jj] * x.col(jj)).norm();
      if (out.residuals[j] > tol * std::max(1.0, std::abs(theta[jj]))) done = false;
    }
    out.iterations = it;
    if (done) {
      out.values.assign(theta.data(), theta.data() + m);
      out.vectors = x.leftCols(static_cast<Eigen::Index>(m));
      return out;
    }
  }
  std::ostringstream msg;
  msg << "lowest_eigenpairs: no convergence after " << max_iterations << " iterations; residuals";
  for (double r : out.residuals) msg << ' ' << r;
  throw NumericalError(msg.str());
}

}  // namespace deltaloop
