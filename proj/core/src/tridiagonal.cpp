#include "deltaloop/tridiagonal.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "deltaloop/errors.hpp"

extern "C" void dsbtrd_(const char* vect, const char* uplo, const int* n, const int* kd, double* ab,
                        const int* ldab, double* d, double* e, double* q, const int* ldq, double* work, int* info,
                        std::size_t vect_len, std::size_t uplo_len);

namespace deltaloop {

SymmetricTridiagonal::SymmetricTridiagonal(std::vector<double> diagonal, std::vector<double> off_diagonal,
                                           double corner)
    : diag_(std::move(diagonal)), off_(std::move(off_diagonal)), corner_(corner) {
  if (diag_.size() < 2 || off_.size() + 1 != diag_.size())
    throw PreconditionError("tridiagonal: off-diagonal must have size n - 1, n >= 2");
  if (corner_ != 0.0 && diag_.size() < 3)
    throw PreconditionError("tridiagonal: periodic closure needs n >= 3");
  double scale = 0.0;
  for (double d : diag_) scale = std::max(scale, std::abs(d));
  for (double e : off_) scale = std::max(scale, std::abs(e));
  scale = std::max(scale, std::abs(corner_));
  pivot_floor_ = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon() +
                 std::numeric_limits<double>::epsilon() * std::numeric_limits<double>::epsilon() * scale;
  if (corner_ != 0.0) reduce_cyclic();
}

// Reorders the cycle as 0, n-1, 1, n-2, ... so the matrix becomes a band of
// half-width 2, then reduces the band orthogonally to tridiagonal form. A
// Sturm count on the cyclic matrix through its Schur complement is unstable
// at the double eigenvalues typical of periodic problems; the reduced form
// is not.
void SymmetricTridiagonal::reduce_cyclic() {
  const int n = static_cast<int>(diag_.size());
  std::vector<int> pos(diag_.size());
  for (int i = 0; 2 * i < n; ++i) {
    pos[static_cast<std::size_t>(i)] = 2 * i;
    if (n - 1 - i > i) pos[static_cast<std::size_t>(n - 1 - i)] = 2 * i + 1;
  }
  const int kd = 2, ldab = kd + 1;
  std::vector<double> ab(static_cast<std::size_t>(ldab * n), 0.0);
  auto put = [&](int r, int c, double v) {
    int i = pos[static_cast<std::size_t>(r)], j = pos[static_cast<std::size_t>(c)];
    if (i > j) std::swap(i, j);
    ab[static_cast<std::size_t>(kd + i - j + j * ldab)] = v;
  };
  for (int i = 0; i < n; ++i) put(i, i, diag_[static_cast<std::size_t>(i)]);
  for (int i = 0; i + 1 < n; ++i) put(i, i + 1, off_[static_cast<std::size_t>(i)]);
  put(0, n - 1, corner_);
  red_diag_.assign(diag_.size(), 0.0);
  red_off_.assign(diag_.size() - 1, 0.0);
  std::vector<double> work(diag_.size());
  double q = 0.0;
  const int one = 1;
  int info = 0;
  dsbtrd_("N", "U", &n, &kd, ab.data(), &ldab, red_diag_.data(), red_off_.data(), &q, &one, work.data(), &info,
          1, 1);
  if (info != 0) throw NumericalError("tridiagonal: band reduction failed, info = " + std::to_string(info));
}

std::size_t SymmetricTridiagonal::count_below(double x) const {
  const auto& d = corner_ == 0.0 ? diag_ : red_diag_;
  const auto& e = corner_ == 0.0 ? off_ : red_off_;
  auto guard = [&](double p) { return std::abs(p) < pivot_floor_ ? -pivot_floor_ : p; };
  std::size_t count = 0;
  double p = guard(d[0] - x);
  if (p < 0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    p = guard(d[i] - x - e[i - 1] * e[i - 1] / p);
    if (p < 0) ++count;
  }
  return count;
}

double SymmetricTridiagonal::gershgorin_lower() const {
  const std::size_t n = diag_.size();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off_[i - 1]);
    if (i + 1 < n) r += std::abs(off_[i]);
    if (i == 0 || i == n - 1) r += std::abs(corner_);
    lo = std::min(lo, diag_[i] - r);
  }
  return lo;
}

double SymmetricTridiagonal::gershgorin_upper() const {
  const std::size_t n = diag_.size();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off_[i - 1]);
    if (i + 1 < n) r += std::abs(off_[i]);
    if (i == 0 || i == n - 1) r += std::abs(corner_);
    hi = std::max(hi, diag_[i] + r);
  }
  return hi;
}

double SymmetricTridiagonal::eigenvalue(std::size_t k) const {
  if (k >= diag_.size()) throw PreconditionError("tridiagonal: eigenvalue index out of range");
  double lo = gershgorin_lower(), hi = gershgorin_upper();
  const double width = std::max(std::abs(lo), std::abs(hi));
  lo -= 1e-12 * width + pivot_floor_;
  hi += 1e-12 * width + pivot_floor_;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + pivot_floor_ || mid == lo || mid == hi)
      return mid;
    if (count_below(mid) > k) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> SymmetricTridiagonal::lowest(std::size_t n) const {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = eigenvalue(k);
  return out;
}

std::vector<double> SymmetricTridiagonal::apply(const std::vector<double>& x) const {
  const std::size_t n = diag_.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag_[i] * x[i];
    if (i > 0) v += off_[i - 1] * x[i - 1];
    if (i + 1 < n) v += off_[i] * x[i + 1];
    y[i] = v;
  }
  y[0] += corner_ * x[n - 1];
  y[n - 1] += corner_ * x[0];
  return y;
}

std::vector<double> SymmetricTridiagonal::eigenvector(double lambda) const {
  const std::size_t n = diag_.size();
  const double scale = std::max(std::abs(gershgorin_lower()), std::abs(gershgorin_upper()));
  const double shift = lambda + 1e-10 * std::max(1.0, scale) * std::numeric_limits<double>::epsilon() * 1e4;
  using Sparse = Eigen::SparseMatrix<double>;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(3 * n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<int>(i);
    trip.emplace_back(ii, ii, diag_[i] - shift);
    if (i + 1 < n) {
      trip.emplace_back(ii, ii + 1, off_[i]);
      trip.emplace_back(ii + 1, ii, off_[i]);
    }
  }
  if (corner_ != 0.0) {
    trip.emplace_back(0, static_cast<int>(n - 1), corner_);
    trip.emplace_back(static_cast<int>(n - 1), 0, corner_);
  }
  Sparse a(static_cast<int>(n), static_cast<int>(n));
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Sparse> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw NumericalError("tridiagonal inverse iteration: factorization failed");
  Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i) x[static_cast<int>(i)] += 1e-3 * std::sin(0.7 * static_cast<double>(i));
  x.normalize();
  for (int it = 0; it < 6; ++it) {
    x = lu.solve(x);
    x.normalize();
  }
  return {x.data(), x.data() + x.size()};
}

}  // namespace deltaloop
