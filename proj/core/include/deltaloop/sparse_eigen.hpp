#pragma once

// Lowest eigenpairs of large sparse symmetric matrices.

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstddef>
#include <vector>

namespace deltaloop {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct EigenPairs {
  std::vector<double> values;   // ascending
  Eigen::MatrixXd vectors;      // orthonormal columns
  std::vector<double> residuals;  // ||A x - lambda x||
  int iterations = 0;
};

// Block subspace iteration with Rayleigh-Ritz on (A - shift I)^{-1}. The shift
// must lie below the spectrum; this is checked through the inertia of the
// factorization. Converged when every residual is below
// tol * max(1, |lambda|). Throws NumericalError with the residual norms
// otherwise.
EigenPairs lowest_eigenpairs(const SparseMatrix& a, std::size_t m, double shift, double tol = 1e-9,
                             int max_iterations = 2000);

// Number of eigenvalues strictly below x, from the signs of the pivots of an
// LDL^T factorization of A - x I (Sylvester's law of inertia).
std::size_t count_below(const SparseMatrix& a, double x);

}  // namespace deltaloop
