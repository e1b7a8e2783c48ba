#ifndef CHOLPARAM_IDENTITIES_HPP
#define CHOLPARAM_IDENTITIES_HPP

// Residual checks for the recursions behind the two parametrizations, and the
// determinant order conditions used as a positive-definiteness diagnostic.
//
// Notation: Q_m(a, b) = rho_m^{*a} R_{m-1}^{-1} (rho_m^{*b})^T, with Q_1 = 0.
// Each verifier evaluates its two sides by different code paths:
//   - explicit inverses from the Banachiewicz chain R_1^{-1}, R_2^{-1}, ...
//   - forward substitution against the reference factor
//   - semi-partial table sums
//   - LU determinants with partial pivoting
// so that an error in one path shows up as a residual instead of cancelling.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cholparam/matrix_core.hpp"
#include "cholparam/parametrizations.hpp"

namespace cholparam {

/// Worst absolute residual of an identity and where it occurred (1-based
/// indices; unused slots are 0).
struct IdentityReport {
  std::string name;
  double max_residual = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t l = 0;

  void record(double residual, std::size_t ii, std::size_t jj, std::size_t ll = 0) {
    if (!(residual <= max_residual)) {  // NaN is recorded too
      max_residual = residual;
      i = ii;
      j = jj;
      l = ll;
    }
  }
};

/// Ratios |R_i^{*j}|/|R_{i-1}| for i = 1..j of a single column j, element 0
/// being 1 and element j-1 being |R_j|/|R_{j-1}|.
struct DeterminantLadder {
  std::size_t j = 0;
  std::vector<double> ratios;

  bool non_increasing(double slack) const {
    for (std::size_t k = 1; k < ratios.size(); ++k)
      if (!(ratios[k] <= ratios[k - 1] + slack)) return false;
    return true;
  }
};

namespace detail {

// Q_m(a, b) for all m, a through forward substitution: w[m-1][a-1] solves
// L_{m-1} w = rho_m^{*a}, so Q_m(a, b) = w_a . w_b.
class SolveForms {
 public:
  explicit SolveForms(const CorrelationMatrix& r) : n_(r.n()), w_(r.n()) {
    const Matrix& l = r.reference_factor().matrix();
    for (std::size_t m = 1; m <= n_; ++m) {
      w_[m - 1].resize(n_);
      for (std::size_t a = m; a <= n_; ++a)
        w_[m - 1][a - 1] = forward_substitute(l, r.prefix(m, a));
    }
  }

  // requires m <= a, m <= b
  double q(std::size_t m, std::size_t a, std::size_t b) const {
    return dot(w_[m - 1][a - 1], w_[m - 1][b - 1]);
  }

 private:
  std::size_t n_;
  std::vector<std::vector<std::vector<double>>> w_;
};

// Q_m(a, b) through the explicit inverse R_{m-1}^{-1} from the chain.
inline double chain_form(const CorrelationMatrix& r, const std::vector<SquareMatrix>& chain,
                         std::size_t m, std::size_t a, std::size_t b) {
  if (m == 1) return 0.0;
  return quadratic_form(chain[m - 2], r.prefix(m, a), r.prefix(m, b));
}

}  // namespace detail

/// Q_{i+1}(j, i+1) = sum_{k=1}^{i} rho_{k,i+1(1..k-1)} rho_{kj(1..k-1)}
/// over 1 <= i < j <= n. Left side from the Banachiewicz chain, right side
/// from the semi-partial table.
inline IdentityReport verify_theorem1(const CorrelationMatrix& r) {
  IdentityReport rep{"theorem1"};
  const std::size_t n = r.n();
  if (n < 2) return rep;
  const auto chain = banachiewicz_chain(r);
  const auto table = semipartial_table(r);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) {
      const double lhs = detail::chain_form(r, chain, i + 1, j, i + 1);
      double rhs = 0.0;
      for (std::size_t k = 1; k <= i; ++k) rhs += table.coeff(k, i + 1) * table.coeff(k, j);
      rep.record(std::abs(lhs - rhs), i, j);
    }
  return rep;
}

/// Q_{i+1}(j, i+1) = Q_i(j, i+1)
///     + (rho_{i,i+1} - Q_i(i+1, i)) (rho_ij - Q_i(j, i)) / (1 - Q_i(i, i))
/// over i >= 1, i+1 <= j <= n.
inline IdentityReport verify_lemma1(const CorrelationMatrix& r) {
  IdentityReport rep{"lemma1"};
  const std::size_t n = r.n();
  if (n < 2) return rep;
  const auto chain = banachiewicz_chain(r);
  const detail::SolveForms qs(r);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) {
      const double lhs = detail::chain_form(r, chain, i + 1, j, i + 1);
      const double rhs = qs.q(i, j, i + 1) + (r.rho(i, i + 1) - qs.q(i, i + 1, i)) *
                                                 (r.rho(i, j) - qs.q(i, j, i)) /
                                                 (1.0 - qs.q(i, i, i));
      rep.record(std::abs(lhs - rhs), i, j);
    }
  return rep;
}

/// |R_i^{*j}|/|R_{i-1}| - |R_{i+1}^{*j}|/|R_i|
///     = (rho_ij - Q_i(j, i))^2 |R_{i-1}|/|R_i|        for j >= i+1 >= 3.
/// Left side from LU determinants of the bordered matrices, right side from
/// forward substitution (|R_{i-1}|/|R_i| = 1/(1 - Q_i(i, i))).
inline IdentityReport verify_lemma2(const CorrelationMatrix& r) {
  IdentityReport rep{"lemma2"};
  const std::size_t n = r.n();
  if (n < 3) return rep;
  const detail::SolveForms qs(r);
  std::vector<double> minors(n + 1, 1.0);  // minors[k] = |R_k|, minors[0] = 1
  for (std::size_t k = 1; k <= n; ++k) minors[k] = determinant_lu(r.leading(k));
  for (std::size_t i = 2; i < n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) {
      const double next = i + 1 == j ? minors[j] : determinant_lu(bordered_matrix(r, i + 1, j));
      const double lhs = determinant_lu(bordered_matrix(r, i, j)) / minors[i - 1] - next / minors[i];
      const double num = r.rho(i, j) - qs.q(i, j, i);
      const double rhs = num * num / (1.0 - qs.q(i, i, i));
      rep.record(std::abs(lhs - rhs), i, j);
    }
  return rep;
}

/// Q_{i+1}(j, l) = Q_i(j, l) + (rho_ij - Q_i(j, i)) (rho_il - Q_i(l, i)) / (1 - Q_i(i, i))
/// over j >= l >= i+1. verify_lemma1 covers the case l = i+1.
inline IdentityReport verify_general_recursion(const CorrelationMatrix& r) {
  IdentityReport rep{"general_recursion"};
  const std::size_t n = r.n();
  if (n < 2) return rep;
  const auto chain = banachiewicz_chain(r);
  const detail::SolveForms qs(r);
  for (std::size_t i = 1; i < n; ++i) {
    const double c = 1.0 - qs.q(i, i, i);
    for (std::size_t l = i + 1; l <= n; ++l)
      for (std::size_t j = l; j <= n; ++j) {
        const double lhs = detail::chain_form(r, chain, i + 1, j, l);
        const double rhs =
            qs.q(i, j, l) + (r.rho(i, j) - qs.q(i, j, i)) * (r.rho(i, l) - qs.q(i, l, i)) / c;
        rep.record(std::abs(lhs - rhs), i, j, l);
      }
  }
  return rep;
}

/// rho_ij - Q_i(j, i) = rho^{j-i} |R_i|/|R_{i-1}| for an AR(1) matrix with
/// parameter `rho`, over 1 <= i <= j <= n.
inline IdentityReport verify_ar1_numerator(const CorrelationMatrix& r, double rho) {
  IdentityReport rep{"ar1_numerator"};
  const detail::SolveForms qs(r);
  const auto dets = leading_minor_determinants(r);
  for (std::size_t i = 1; i <= r.n(); ++i) {
    const double ratio = i == 1 ? 1.0 : dets[i - 1] / dets[i - 2];
    for (std::size_t j = i; j <= r.n(); ++j) {
      const double lhs = r.rho(i, j) - qs.q(i, j, i);
      const double rhs = std::pow(rho, static_cast<double>(j - i)) * ratio;
      rep.record(std::abs(lhs - rhs), i, j);
    }
  }
  return rep;
}

struct OrderConditions {
  bool det_order_ok = false;
  bool ratio_order_ok = false;
  /// |R_1|, ..., |R_n| by LU.
  std::vector<double> minors;
  /// One ladder per column j = 2..n.
  std::vector<DeterminantLadder> ladders;
  /// min_k |R_k|/|R_{k-1}|, the smallest squared Cholesky pivot the matrix
  /// would produce; 0 when some earlier minor vanishes.
  double min_pivot = 1.0;
};

/// Checks 1 >= |R_2| >= ... >= |R_n| > 0 and, for every column j, that its
/// ladder 1 >= |R_2^{*j}| >= |R_3^{*j}|/|R_2| >= ... >= |R_j|/|R_{j-1}| > 0.
/// Comparisons allow `tol.ord` of slack. Positive-definiteness is not
/// assumed; the input must be symmetric with unit diagonal.
inline OrderConditions check_order_conditions(const SquareMatrix& m, const Tolerances& tol = {}) {
  const std::size_t n = m.n();
  if (m.asymmetry() > tol.sym) throw InvalidInput("matrix is not symmetric");
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(m(k, k) - 1.0) > tol.sym) throw InvalidInput("diagonal must be 1");

  auto leading = [&](std::size_t k) {
    Matrix out(k, k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) out(a, b) = m(a, b);
    return out;
  };

  OrderConditions out;
  out.minors.resize(n);
  for (std::size_t k = 1; k <= n; ++k) out.minors[k - 1] = k == 1 ? 1.0 : determinant_lu(leading(k));

  out.det_order_ok = true;
  for (std::size_t k = 2; k <= n; ++k) {
    const double cur = out.minors[k - 1];
    const double prev = out.minors[k - 2];
    if (!(cur > 0.0) || !(cur <= prev + tol.ord)) out.det_order_ok = false;
    const double pivot = prev != 0.0 ? cur / prev : 0.0;
    out.min_pivot = std::min(out.min_pivot, pivot);
  }

  out.ratio_order_ok = true;
  for (std::size_t j = 2; j <= n; ++j) {
    DeterminantLadder ladder{j, std::vector<double>(j, 1.0)};
    for (std::size_t i = 2; i <= j; ++i) {
      const double denom = out.minors[i - 2];
      const double num = i == j ? out.minors[j - 1] : determinant_lu(bordered_matrix(m, i, j));
      ladder.ratios[i - 1] = denom > 0.0 ? num / denom : std::nan("");
    }
    if (!(ladder.ratios.back() > 0.0) || !(ladder.ratios[0] <= 1.0) ||
        !ladder.non_increasing(tol.ord)) {
      out.ratio_order_ok = false;
    }
    out.ladders.push_back(std::move(ladder));
  }
  return out;
}

inline OrderConditions check_order_conditions(const CorrelationMatrix& r) {
  return check_order_conditions(r.square(), r.tolerances());
}

}  // namespace cholparam

#endif  // CHOLPARAM_IDENTITIES_HPP
