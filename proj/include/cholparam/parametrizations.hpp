#ifndef CHOLPARAM_PARAMETRIZATIONS_HPP
#define CHOLPARAM_PARAMETRIZATIONS_HPP

// Two closed-form routes to the Cholesky factor of a correlation matrix, and
// the determinant-ratio route for a covariance matrix.
//
// Semi-partial route: the nonzero entries are
//
//   l_ji = rho_ij(1..i-1) = (rho_ij - rho_i^{*j} R_{i-1}^{-1} rho_i^T)
//                           / sqrt(1 - rho_i R_{i-1}^{-1} rho_i^T),   i <= j
//
// with rho_i^{*j} = (rho_1j, ..., rho_{i-1,j}) and rho_i = rho_i^{*i}.
//
// Determinant-ratio route: the squared semi-partials are differences of
// successive ratios of bordered determinants,
//
//   l_ji = s_ij sqrt(|R_i^{*j}|/|R_{i-1}| - |R_{i+1}^{*j}|/|R_i|),   i < j
//   l_jj = sqrt(|R_j|/|R_{j-1}|)
//
// with |R_0| = |R_1^{*j}| = 1 and |R_j^{*j}| = |R_j|. The signs s_ij come
// from outside (see SignPattern).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cholparam/errors.hpp"
#include "cholparam/matrix_core.hpp"

namespace cholparam {

/// Lower-triangular table of semi-partial correlations; entry (i, j) with
/// i <= j (1-based) is rho_ij(1..i-1), stored at row j, column i, which is
/// exactly the position it takes in the Cholesky factor.
class SemiPartialTable {
 public:
  explicit SemiPartialTable(Matrix coeffs) : coeffs_(std::move(coeffs)) {}

  std::size_t n() const { return coeffs_.rows(); }

  /// rho_ij(1..i-1), 1-based, requires 1 <= i <= j <= n.
  double coeff(std::size_t i, std::size_t j) const {
    if (i < 1 || i > j || j > n()) {
      throw IndexOutOfRange("semi-partial index requires 1 <= i <= j <= n");
    }
    return coeffs_(j - 1, i - 1);
  }

  const Matrix& matrix() const { return coeffs_; }

 private:
  Matrix coeffs_;
};

/// Signs s_ij in {-1, +1} for the strictly lower entries l_ji, i < j.
class SignPattern {
 public:
  explicit SignPattern(std::size_t n) : n_(n), signs_(n * n, 1) {}

  std::size_t n() const { return n_; }

  /// s_ij, 1-based, i < j.
  int sign(std::size_t i, std::size_t j) const { return signs_[offset(i, j)]; }

  void set(std::size_t i, std::size_t j, int s) {
    if (s != 1 && s != -1) throw InvalidInput("sign must be -1 or +1");
    signs_[offset(i, j)] = static_cast<std::int8_t>(s);
  }

 private:
  std::size_t offset(std::size_t i, std::size_t j) const {
    if (i < 1 || i >= j || j > n_) throw IndexOutOfRange("sign index requires 1 <= i < j <= n");
    return (j - 1) * n_ + (i - 1);
  }

  std::size_t n_;
  std::vector<std::int8_t> signs_;
};

/// rho_ij(1..i-1) for one (i, j), 1-based, 1 <= i <= j <= n. R_{i-1} is
/// factored afresh, and both quadratic forms are evaluated by forward
/// substitution against that factor.
inline double semipartial_coefficient(const CorrelationMatrix& r, std::size_t i, std::size_t j) {
  if (i < 1 || i > j || j > r.n()) {
    throw IndexOutOfRange("semi-partial index requires 1 <= i <= j <= n");
  }
  if (i == 1) return r.rho(1, j);
  const auto sub = reference_cholesky(SquareMatrix(r.leading(i - 1)), r.tolerances());
  const auto rho_i = r.prefix(i, i);
  const auto w_i = forward_substitute(sub.matrix(), rho_i);
  const double c = 1.0 - dot(w_i, w_i);
  if (!(c > r.tolerances().pd)) throw NotPositiveDefinite(i, c);
  if (i == j) return std::sqrt(c);
  const auto rho_j = r.prefix(i, j);
  const auto w_j = forward_substitute(sub.matrix(), rho_j);
  return (r.rho(i, j) - dot(w_j, w_i)) / std::sqrt(c);
}

/// The full table. One reference factor of R serves every R_{i-1}, since the
/// leading (i-1) x (i-1) block of that factor is the factor of R_{i-1}.
inline SemiPartialTable semipartial_table(const CorrelationMatrix& r) {
  const std::size_t n = r.n();
  const Matrix& lref = r.reference_factor().matrix();
  Matrix t(n, n);
  for (std::size_t i = 1; i <= n; ++i) {
    const auto rho_i = r.prefix(i, i);
    const auto w_i = forward_substitute(lref, rho_i);
    const double c = 1.0 - dot(w_i, w_i);
    if (!(c > r.tolerances().pd)) throw NotPositiveDefinite(i, c);
    const double root = std::sqrt(c);
    t(i - 1, i - 1) = root;
    for (std::size_t j = i + 1; j <= n; ++j) {
      const auto rho_j = r.prefix(i, j);
      const auto w_j = forward_substitute(lref, rho_j);
      t(j - 1, i - 1) = (r.rho(i, j) - dot(w_j, w_i)) / root;
    }
  }
  return SemiPartialTable(std::move(t));
}

inline CholeskyFactor chol_semipartial(const CorrelationMatrix& r) {
  return CholeskyFactor(semipartial_table(r).matrix(), FactorMethod::semipartial);
}

/// Sign of every strictly lower entry; exact zeros map to +1.
inline SignPattern extract_signs(const CholeskyFactor& l) {
  SignPattern s(l.n());
  for (std::size_t j = 2; j <= l.n(); ++j)
    for (std::size_t i = 1; i < j; ++i) s.set(i, j, l(j - 1, i - 1) < 0.0 ? -1 : 1);
  return s;
}

namespace detail {

// Shared body of the determinant-ratio route. `ratio(i, j)` must return
// |A_i^{*j}|/|A_{i-1}| for 1 <= i <= j (with the i = 1 and i = j
// conventions already applied).
template <typename RatioFn>
Matrix detratio_factor(std::size_t n, const SignPattern& signs, double clamp, RatioFn&& ratio) {
  if (signs.n() != n) throw LengthMismatch(n, signs.n());
  Matrix l(n, n);
  std::vector<double> ladder;
  for (std::size_t j = 1; j <= n; ++j) {
    ladder.assign(j, 0.0);
    for (std::size_t i = 1; i <= j; ++i) ladder[i - 1] = ratio(i, j);
    for (std::size_t i = 1; i < j; ++i) {
      double diff = ladder[i - 1] - ladder[i];
      if (diff < -clamp) throw NegativeRadicand(i, j, diff);
      if (diff < 0.0) diff = 0.0;
      l(j - 1, i - 1) = signs.sign(i, j) * std::sqrt(diff);
    }
    l(j - 1, j - 1) = std::sqrt(ladder[j - 1]);
  }
  return l;
}

}  // namespace detail

/// Factor from determinant ratios; magnitudes come from determinants, signs
/// from `signs`. Differences in [-tol.pd, 0) are clamped to zero, below that
/// NegativeRadicand is thrown.
inline CholeskyFactor chol_detratio(const CorrelationMatrix& r, const SignPattern& signs) {
  const auto dets = leading_minor_determinants(r);
  auto ratio = [&](std::size_t i, std::size_t j) -> double {
    if (i == 1) return 1.0;
    if (i == j) return dets[j - 1] / dets[j - 2];
    return bordered_determinant(r, i, j) / dets[i - 2];
  };
  return CholeskyFactor(detail::detratio_factor(r.n(), signs, r.tolerances().pd, ratio),
                        FactorMethod::detratio);
}

/// Covariance version: every correlation ratio sigma_j^2 |R_i^{*j}|/|R_{i-1}|
/// is replaced by |Sigma_i^{*j}|/|Sigma_{i-1}|, where Sigma_i^{*j} is the
/// principal submatrix on {1..i-1, j} (its corner is sigma_j^2), with
/// |Sigma_0| = 1 and |Sigma_1^{*j}| = sigma_j^2. Signs are those of the
/// semi-partials of the underlying correlation matrix.
inline CholeskyFactor chol_covariance(const CovarianceMatrix& s) {
  const SignPattern signs = extract_signs(chol_semipartial(s.correlation()));
  const auto dets = running_products(squared_pivots(s.square(), s.reference_factor().matrix()));
  auto ratio = [&](std::size_t i, std::size_t j) -> double {
    if (i == 1) return s(j - 1, j - 1);
    if (i == j) return dets[j - 1] / dets[j - 2];
    return bordered_pivot_determinant(s.square(), i, j, s.tolerances()) / dets[i - 2];
  };
  double scale = 0.0;
  for (double sigma : s.sigmas()) scale = std::max(scale, sigma * sigma);
  return CholeskyFactor(
      detail::detratio_factor(s.n(), signs, s.tolerances().pd * scale, ratio),
      FactorMethod::covariance);
}

}  // namespace cholparam

#endif  // CHOLPARAM_PARAMETRIZATIONS_HPP
