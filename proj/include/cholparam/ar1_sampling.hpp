#ifndef CHOLPARAM_AR1_SAMPLING_HPP
#define CHOLPARAM_AR1_SAMPLING_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cholparam/errors.hpp"
#include "cholparam/matrix_core.hpp"
#include "cholparam/rng.hpp"

namespace cholparam {

/// AR(1) correlation structure rho_ij = rho^{|i-j|}, |rho| < 1.
class Ar1Spec {
 public:
  Ar1Spec(std::size_t n, double rho) : n_(n), rho_(rho) {
    if (n_ < 1) throw InvalidInput("AR(1) dimension must be at least 1");
    if (!(std::abs(rho_) < 1.0)) throw InvalidInput("AR(1) parameter must satisfy |rho| < 1");
  }

  std::size_t n() const { return n_; }
  double rho() const { return rho_; }

 private:
  std::size_t n_;
  double rho_;
};

namespace detail {
inline std::vector<double> powers(double rho, std::size_t count) {
  std::vector<double> p(count, 1.0);
  for (std::size_t k = 1; k < count; ++k) p[k] = p[k - 1] * rho;
  return p;
}
}  // namespace detail

inline CorrelationMatrix ar1_matrix(const Ar1Spec& spec, const Tolerances& tol = {}) {
  const auto p = detail::powers(spec.rho(), spec.n());
  Matrix m(spec.n(), spec.n());
  for (std::size_t i = 0; i < spec.n(); ++i)
    for (std::size_t j = 0; j < spec.n(); ++j) m(i, j) = p[i > j ? i - j : j - i];
  return CorrelationMatrix(SquareMatrix(std::move(m)), tol);
}

/// Closed form, no factorization:
///   l_j1 = rho^{j-1},   l_ji = rho^{j-i} sqrt(1 - rho^2) for j >= i >= 2.
inline CholeskyFactor ar1_cholesky(const Ar1Spec& spec) {
  const auto p = detail::powers(spec.rho(), spec.n());
  const double s = std::sqrt(1.0 - spec.rho() * spec.rho());
  Matrix l(spec.n(), spec.n());
  for (std::size_t j = 0; j < spec.n(); ++j) {
    l(j, 0) = p[j];
    for (std::size_t i = 1; i <= j; ++i) l(j, i) = p[j - i] * s;
  }
  return CholeskyFactor(std::move(l), FactorMethod::ar1);
}

/// y = L x with L = ar1_cholesky(spec), i.e.
///   y_i = rho^{i-1} x_1 + sqrt(1 - rho^2) sum_{k=2}^{i} rho^{i-k} x_k.
inline std::vector<double> ar1_transform(const Ar1Spec& spec, std::span<const double> x) {
  if (x.size() != spec.n()) throw LengthMismatch(spec.n(), x.size());
  const auto l = ar1_cholesky(spec);
  std::vector<double> y(spec.n(), 0.0);
  for (std::size_t j = 0; j < spec.n(); ++j)
    for (std::size_t i = 0; i <= j; ++i) y[j] += l(j, i) * x[i];
  return y;
}

/// `count` rows of L x with x standard normal, drawn from a stream seeded
/// with `seed`. Returns a count x n matrix.
inline Matrix sample_mvn(const CholeskyFactor& l, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw InvalidInput("sample count must be positive");
  const std::size_t n = l.n();
  Rng rng(seed);
  Matrix out(count, n);
  std::vector<double> x(n);
  for (std::size_t r = 0; r < count; ++r) {
    for (double& v : x) v = rng.normal();
    auto row = out.row(r);
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i <= j; ++i) s += l(j, i) * x[i];
      row[j] = s;
    }
  }
  return out;
}

}  // namespace cholparam

#endif  // CHOLPARAM_AR1_SAMPLING_HPP
