#pragma once

#include <cstddef>
#include <vector>

namespace deltaloop {

// Real symmetric tridiagonal matrix with an optional corner entry coupling the
// first and last rows (periodic closure). Eigenvalues are located by bisection
// on inertia counts, so individual eigenvalues can be requested by index.
// With a corner entry the counts run on a band reduction computed once at
// construction (LAPACK dsbtrd).
class SymmetricTridiagonal {
 public:
  SymmetricTridiagonal() = default;
  SymmetricTridiagonal(std::vector<double> diagonal, std::vector<double> off_diagonal,
                       double corner = 0.0);

  std::size_t size() const { return diag_.size(); }
  const std::vector<double>& diagonal() const { return diag_; }
  const std::vector<double>& off_diagonal() const { return off_; }
  double corner() const { return corner_; }

  // Number of eigenvalues strictly below x (Sylvester inertia of A - x I).
  std::size_t count_below(double x) const;

  // k-th smallest eigenvalue, k = 0, 1, ...
  double eigenvalue(std::size_t k) const;

  // The n smallest eigenvalues in nondecreasing order.
  std::vector<double> lowest(std::size_t n) const;

  // Unit eigenvector for a (converged) eigenvalue, by inverse iteration.
  std::vector<double> eigenvector(double lambda) const;

  // y = A x
  std::vector<double> apply(const std::vector<double>& x) const;

  double gershgorin_lower() const;
  double gershgorin_upper() const;

 private:
  std::vector<double> diag_;
  std::vector<double> off_;
  double corner_ = 0.0;
  double pivot_floor_ = 0.0;
  // Orthogonally similar plain tridiagonal form of a cyclic matrix.
  std::vector<double> red_diag_;
  std::vector<double> red_off_;

  void reduce_cyclic();
};

}  // namespace deltaloop
