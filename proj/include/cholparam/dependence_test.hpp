#ifndef CHOLPARAM_DEPENDENCE_TEST_HPP
#define CHOLPARAM_DEPENDENCE_TEST_HPP

// Sequential t-test for the linear dependence of one variable on the others.
//
// With the target moved to the last position p, entry (p, k) of the
// semi-partial factor of the sample correlation matrix is r_kp(1..k-1), and
// under H_0k : rho_1p = rho_2p(1) = ... = rho_kp(1..k-1) = 0
//
//   T = sqrt(N - k) r / sqrt(1 - r^2)  ~  t_{N-k}.
//
// Every k = 1..p-1 is tested (no early stop, no multiplicity correction).

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "cholparam/errors.hpp"
#include "cholparam/matrix_core.hpp"
#include "cholparam/parametrizations.hpp"

namespace cholparam {

/// N x p block of observations, one column per variable.
class SampleMatrix {
 public:
  explicit SampleMatrix(Matrix data) : data_(std::move(data)) {
    if (data_.cols() < 2) throw InvalidInput("need at least two variables");
    if (data_.rows() <= data_.cols()) throw InvalidInput("need more samples than variables (N > p)");
    for (double v : data_.data())
      if (!std::isfinite(v)) throw InvalidInput("sample matrix has a non-finite entry");
  }

  std::size_t samples() const { return data_.rows(); }
  std::size_t variables() const { return data_.cols(); }
  const Matrix& matrix() const { return data_; }

 private:
  Matrix data_;
};

/// Pearson correlation with mean-centering. The divisor (N or N-1) cancels.
/// DegenerateColumn (1-based) for a column whose centered sum of squares
/// is <= tol.pd; NearSingular when the result is not a valid correlation.
inline CorrelationMatrix sample_correlation(const SampleMatrix& x, const Tolerances& tol = {}) {
  const std::size_t n = x.samples();
  const std::size_t p = x.variables();
  const Matrix& d = x.matrix();
  std::vector<double> mean(p, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < p; ++c) mean[c] += d(r, c);
  for (double& m : mean) m /= static_cast<double>(n);

  Matrix cross(p, p);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t a = 0; a < p; ++a) {
      const double da = d(r, a) - mean[a];
      for (std::size_t b = a; b < p; ++b) cross(a, b) += da * (d(r, b) - mean[b]);
    }
  for (std::size_t a = 0; a < p; ++a)
    if (!(cross(a, a) > tol.pd)) throw DegenerateColumn(a + 1);

  Matrix corr(p, p);
  for (std::size_t a = 0; a < p; ++a) {
    corr(a, a) = 1.0;
    for (std::size_t b = a + 1; b < p; ++b) {
      const double v = cross(a, b) / std::sqrt(cross(a, a) * cross(b, b));
      corr(a, b) = v;
      corr(b, a) = v;
    }
  }
  try {
    return CorrelationMatrix(SquareMatrix(std::move(corr)), tol);
  } catch (const InvalidInput& e) {
    throw NearSingular(std::string("sample correlation is singular: ") + e.what());
  } catch (const NotPositiveDefinite& e) {
    throw NearSingular(std::string("sample correlation is singular: ") + e.what());
  }
}

/// sqrt(N - k) r / sqrt(1 - r^2)
inline double t_statistic(double r_semi, std::size_t samples, std::size_t k) {
  if (!(std::abs(r_semi) < 1.0)) throw InvalidSemiPartial(r_semi);
  if (k < 1 || samples <= k) throw InvalidInput("t statistic requires N > k >= 1");
  return std::sqrt(static_cast<double>(samples - k)) * r_semi / std::sqrt(1.0 - r_semi * r_semi);
}

/// Inverse CDF of Student's t with `df` degrees of freedom.
inline double t_quantile(double prob, std::size_t df) {
  if (!(prob > 0.0 && prob < 1.0)) throw InvalidInput("quantile probability must lie in (0, 1)");
  if (df < 1) throw InvalidInput("degrees of freedom must be positive");
  const boost::math::students_t_distribution<double> dist(static_cast<double>(df));
  return boost::math::quantile(dist, prob);
}

inline double t_cdf(double t, std::size_t df) {
  const boost::math::students_t_distribution<double> dist(static_cast<double>(df));
  return boost::math::cdf(dist, t);
}

struct TestRow {
  std::size_t k = 0;
  double r_semi = 0.0;   ///< r_kp(1..k-1)
  double t = 0.0;
  std::size_t df = 0;    ///< N - k
  double critical = 0.0; ///< t_{alpha/2, N-k}
  bool reject = false;
};

struct TestReport {
  double alpha = 0.05;
  std::size_t samples = 0;
  std::size_t variables = 0;
  std::size_t target = 0;  ///< 1-based column of the tested variable in the input
  /// order[m] is the 1-based input column placed at position m+1; the
  /// target is last.
  std::vector<std::size_t> order;
  std::vector<TestRow> rows;
  std::optional<std::size_t> largest_rejected_k;
};

/// Input columns reordered so that `target` (1-based) is last; the others
/// keep their relative order.
inline std::vector<std::size_t> target_last_order(std::size_t p, std::size_t target) {
  std::vector<std::size_t> order;
  order.reserve(p);
  for (std::size_t c = 1; c <= p; ++c)
    if (c != target) order.push_back(c);
  order.push_back(target);
  return order;
}

inline TestReport sequential_test(const SampleMatrix& x, std::size_t target, double alpha,
                                  const Tolerances& tol = {}) {
  const std::size_t n = x.samples();
  const std::size_t p = x.variables();
  if (target < 1 || target > p) throw IndexOutOfRange("target variable out of range");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");

  TestReport rep;
  rep.alpha = alpha;
  rep.samples = n;
  rep.variables = p;
  rep.target = target;
  rep.order = target_last_order(p, target);

  Matrix permuted(n, p);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < p; ++c) permuted(r, c) = x.matrix()(r, rep.order[c] - 1);
  const auto corr = sample_correlation(SampleMatrix(std::move(permuted)), tol);
  const auto table = semipartial_table(corr);

  for (std::size_t k = 1; k < p; ++k) {
    TestRow row;
    row.k = k;
    row.r_semi = table.coeff(k, p);
    row.t = t_statistic(row.r_semi, n, k);
    row.df = n - k;
    row.critical = t_quantile(1.0 - alpha / 2.0, row.df);
    row.reject = std::abs(row.t) > row.critical;
    if (row.reject) rep.largest_rejected_k = k;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace cholparam

#endif  // CHOLPARAM_DEPENDENCE_TEST_HPP
