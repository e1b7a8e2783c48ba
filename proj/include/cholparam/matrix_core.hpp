#ifndef CHOLPARAM_MATRIX_CORE_HPP
#define CHOLPARAM_MATRIX_CORE_HPP

// Dense matrix storage, the reference Cholesky algorithm, leading-minor and
// bordered determinants, and the blockwise (Banachiewicz) inverse update.
//
// Index convention: the element accessors `operator()(row, col)` are 0-based
// like any C++ container. Every function that takes a matrix position as a
// separate argument (bordered_determinant, CorrelationMatrix::rho, pivot
// indices in errors, ...) is 1-based, so that `i` and `j` read the same way
// they do in the usual mathematical notation R_i, rho_ij.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "cholparam/errors.hpp"

namespace cholparam {

/// Numerical thresholds used by validation and factorization.
struct Tolerances {
  double sym = 1e-10;  ///< max |a_ij - a_ji|
  double pd = 1e-12;   ///< minimum accepted squared Cholesky pivot
  double rec = 1e-9;   ///< max |L L^T - A| accepted as a reconstruction
  double ord = 1e-10;  ///< slack for determinant order comparisons
};

/// Row-major dense matrix of doubles. No invariants beyond shape.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw LengthMismatch(rows_ * cols_, data_.size());
    }
  }
  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw InvalidInput("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw LengthMismatch(a.cols(), b.rows());
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

/// max_ij |a_ij - b_ij|; shapes must agree.
inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw LengthMismatch(a.rows() * a.cols(), b.rows() * b.cols());
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
  return worst;
}

/// Determinant by Gaussian elimination with partial pivoting. Works on any
/// square matrix (no definiteness assumption), which is what the order
/// diagnostics and identity verifiers need.
inline double determinant_lu(Matrix a) {
  if (a.rows() != a.cols()) throw InvalidInput("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
    if (a(p, c) == 0.0) return 0.0;
    if (p != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(p, k), a(c, k));
      det = -det;
    }
    const double pivot = a(c, c);
    det *= pivot;
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / pivot;
      if (f == 0.0) continue;
      for (std::size_t k = c + 1; k < n; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return det;
}

/// Square, finite matrix. Immutable once built.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvalidInput("matrix is not square");
    if (m_.rows() == 0) throw InvalidInput("matrix dimension must be at least 1");
    for (double v : m_.data())
      if (!std::isfinite(v)) throw InvalidInput("matrix has a non-finite entry");
  }
  SquareMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : SquareMatrix(Matrix(rows)) {}

  std::size_t n() const { return m_.rows(); }
  double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  const Matrix& matrix() const { return m_; }

  /// max |a_ij - a_ji|
  double asymmetry() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < n(); ++r)
      for (std::size_t c = r + 1; c < n(); ++c)
        worst = std::max(worst, std::abs(m_(r, c) - m_(c, r)));
    return worst;
  }

 private:
  Matrix m_;
};

enum class FactorMethod { reference, semipartial, detratio, covariance, ar1 };

inline std::string_view to_string(FactorMethod m) {
  switch (m) {
    case FactorMethod::reference: return "reference";
    case FactorMethod::semipartial: return "semipartial";
    case FactorMethod::detratio: return "detratio";
    case FactorMethod::covariance: return "covariance";
    case FactorMethod::ar1: return "ar1";
  }
  return "unknown";
}

/// Lower-triangular factor with strictly positive diagonal, tagged with the
/// construction route that produced it.
class CholeskyFactor {
 public:
  CholeskyFactor(Matrix lower, FactorMethod method)
      : l_(std::move(lower)), method_(method) {
    if (l_.rows() != l_.cols() || l_.rows() == 0) {
      throw InvalidInput("Cholesky factor must be square and non-empty");
    }
    for (std::size_t r = 0; r < l_.rows(); ++r) {
      for (std::size_t c = r + 1; c < l_.cols(); ++c)
        if (l_(r, c) != 0.0) throw InvalidInput("Cholesky factor is not lower triangular");
      if (!(l_(r, r) > 0.0)) throw InvalidInput("Cholesky factor diagonal must be positive");
    }
  }

  std::size_t n() const { return l_.rows(); }
  double operator()(std::size_t r, std::size_t c) const { return l_(r, c); }
  const Matrix& matrix() const { return l_; }
  FactorMethod method() const { return method_; }

  /// L * L^T
  Matrix reconstruct() const {
    const std::size_t n = l_.rows();
    Matrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c <= r; ++c) {
        double s = 0.0;
        for (std::size_t k = 0; k <= c; ++k) s += l_(r, k) * l_(c, k);
        out(r, c) = s;
        out(c, r) = s;
      }
    return out;
  }

 private:
  Matrix l_;
  FactorMethod method_;
};

/// Row-oriented Cholesky:
///   l_ji = (a_ij - sum_{k<i} l_jk l_ik) / l_ii,   l_jj = sqrt(a_jj - sum_{k<j} l_jk^2).
/// Throws NotPositiveDefinite (1-based pivot index) when a squared pivot is
/// <= tol.pd, InvalidInput when the input is not symmetric within tol.sym.
inline CholeskyFactor reference_cholesky(const SquareMatrix& m, const Tolerances& tol = {}) {
  if (m.asymmetry() > tol.sym) throw InvalidInput("matrix is not symmetric");
  const std::size_t n = m.n();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      double s = m(j, i);
      for (std::size_t k = 0; k < i; ++k) s -= l(j, k) * l(i, k);
      l(j, i) = s / l(i, i);
    }
    double pivot = m(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > tol.pd)) throw NotPositiveDefinite(j + 1, pivot);
    l(j, j) = std::sqrt(pivot);
  }
  return CholeskyFactor(std::move(l), FactorMethod::reference);
}

/// Solves L_k w = b for the leading k x k block of a lower-triangular matrix.
inline std::vector<double> forward_substitute(const Matrix& lower, std::span<const double> b) {
  const std::size_t k = b.size();
  std::vector<double> w(k);
  for (std::size_t r = 0; r < k; ++r) {
    double s = b[r];
    for (std::size_t c = 0; c < r; ++c) s -= lower(r, c) * w[c];
    w[r] = s / lower(r, r);
  }
  return w;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

/// Symmetric, unit-diagonal, positive-definite correlation matrix.
///
/// Construction symmetrizes (averaging a_ij and a_ji), forces the diagonal
/// to exactly 1, rejects off-diagonal entries outside the open interval
/// (-1, 1), and runs the reference Cholesky; the factor is kept.
class CorrelationMatrix {
 public:
  explicit CorrelationMatrix(const SquareMatrix& m, const Tolerances& tol = {})
      : tol_(tol), m_(normalize(m, tol)), factor_(reference_cholesky(m_, tol)) {}
  CorrelationMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : CorrelationMatrix(SquareMatrix(rows)) {}

  std::size_t n() const { return m_.n(); }
  double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  const SquareMatrix& square() const { return m_; }
  const Matrix& matrix() const { return m_.matrix(); }
  const Tolerances& tolerances() const { return tol_; }

  /// rho_ij, 1-based.
  double rho(std::size_t i, std::size_t j) const {
    check_index(i);
    check_index(j);
    return m_(i - 1, j - 1);
  }

  /// The prefix vector rho_i^{*j} = (rho_1j, ..., rho_{i-1,j}); empty for i = 1.
  /// 1-based, requires 1 <= i <= j <= n.
  std::vector<double> prefix(std::size_t i, std::size_t j) const {
    check_index(i);
    check_index(j);
    std::vector<double> v(i - 1);
    for (std::size_t k = 0; k + 1 < i; ++k) v[k] = m_(k, j - 1);
    return v;
  }

  /// Leading k x k block R_k (1 <= k <= n).
  Matrix leading(std::size_t k) const {
    check_index(k);
    Matrix out(k, k);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) out(r, c) = m_(r, c);
    return out;
  }

  /// Reference Cholesky factor computed during construction.
  const CholeskyFactor& reference_factor() const { return factor_; }

 private:
  void check_index(std::size_t i) const {
    if (i < 1 || i > n()) throw IndexOutOfRange("index out of range: " + std::to_string(i));
  }

  static SquareMatrix normalize(const SquareMatrix& in, const Tolerances& tol) {
    if (in.asymmetry() > tol.sym) throw InvalidInput("correlation matrix is not symmetric");
    const std::size_t n = in.n();
    Matrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      if (std::abs(in(r, r) - 1.0) > tol.sym) {
        throw InvalidInput("correlation matrix diagonal must be 1");
      }
      m(r, r) = 1.0;
      for (std::size_t c = r + 1; c < n; ++c) {
        const double v = 0.5 * (in(r, c) + in(c, r));
        if (!(v > -1.0 && v < 1.0)) {
          throw InvalidInput("correlation entries must lie in (-1, 1)");
        }
        m(r, c) = v;
        m(c, r) = v;
      }
    }
    return SquareMatrix(std::move(m));
  }

  Tolerances tol_;
  SquareMatrix m_;
  CholeskyFactor factor_;
};

/// Symmetric positive-definite covariance matrix with its standard deviations.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(const SquareMatrix& m, const Tolerances& tol = {})
      : tol_(tol), m_(symmetrize(m, tol)), factor_(reference_cholesky(m_, tol)) {
    sigmas_.resize(n());
    for (std::size_t i = 0; i < n(); ++i) sigmas_[i] = std::sqrt(m_(i, i));
  }

  /// Sigma = D R D with D = diag(sigmas).
  static CovarianceMatrix from_correlation(const CorrelationMatrix& r,
                                           std::span<const double> sigmas,
                                           const Tolerances& tol = {}) {
    if (sigmas.size() != r.n()) throw LengthMismatch(r.n(), sigmas.size());
    Matrix m(r.n(), r.n());
    for (std::size_t i = 0; i < r.n(); ++i) {
      if (!(sigmas[i] > 0.0)) throw InvalidInput("standard deviations must be positive");
      for (std::size_t j = 0; j < r.n(); ++j) m(i, j) = sigmas[i] * sigmas[j] * r(i, j);
    }
    return CovarianceMatrix(SquareMatrix(std::move(m)), tol);
  }

  std::size_t n() const { return m_.n(); }
  double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  const SquareMatrix& square() const { return m_; }
  const Matrix& matrix() const { return m_.matrix(); }
  const std::vector<double>& sigmas() const { return sigmas_; }
  const Tolerances& tolerances() const { return tol_; }
  const CholeskyFactor& reference_factor() const { return factor_; }

  /// D^{-1} Sigma D^{-1}
  CorrelationMatrix correlation() const {
    Matrix r(n(), n());
    for (std::size_t i = 0; i < n(); ++i)
      for (std::size_t j = 0; j < n(); ++j)
        r(i, j) = i == j ? 1.0 : m_(i, j) / (sigmas_[i] * sigmas_[j]);
    return CorrelationMatrix(SquareMatrix(std::move(r)), tol_);
  }

 private:
  static SquareMatrix symmetrize(const SquareMatrix& in, const Tolerances& tol) {
    if (in.asymmetry() > tol.sym) throw InvalidInput("covariance matrix is not symmetric");
    Matrix m = in.matrix();
    for (std::size_t r = 0; r < in.n(); ++r)
      for (std::size_t c = r + 1; c < in.n(); ++c) {
        const double v = 0.5 * (in(r, c) + in(c, r));
        m(r, c) = v;
        m(c, r) = v;
      }
    return SquareMatrix(std::move(m));
  }

  Tolerances tol_;
  SquareMatrix m_;
  CholeskyFactor factor_;
  std::vector<double> sigmas_;
};

/// Squared pivots a_jj - sum_{k<j} l_jk^2 of `a` recomputed from its factor
/// `l`, before the square root is taken.
inline std::vector<double> squared_pivots(const SquareMatrix& a, const Matrix& l) {
  std::vector<double> d(a.n());
  for (std::size_t j = 0; j < a.n(); ++j) {
    double pivot = a(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    d[j] = pivot;
  }
  return d;
}

/// |A_1|, ..., |A_n| as running products of squared pivots.
inline std::vector<double> running_products(const std::vector<double>& pivots) {
  std::vector<double> dets(pivots.size());
  double running = 1.0;
  for (std::size_t j = 0; j < pivots.size(); ++j) {
    running *= pivots[j];
    dets[j] = running;
  }
  return dets;
}

/// |R_1|, ..., |R_n| as running products of squared reference pivots.
/// Element 0 holds |R_1| = 1.
inline std::vector<double> leading_minor_determinants(const CorrelationMatrix& r) {
  auto dets = running_products(squared_pivots(r.square(), r.reference_factor().matrix()));
  dets[0] = 1.0;
  return dets;
}

/// The i x i matrix A_i^{*j}: the leading block A_{i-1} bordered by the
/// column-j prefix row (a_1j, ..., a_{i-1,j}) and corner a_jj. It is the
/// principal submatrix on {1..i-1, j}; for a correlation matrix this is
/// R_i^{*j} with corner 1.
inline Matrix bordered_matrix(const SquareMatrix& a, std::size_t i, std::size_t j) {
  if (i < 1 || i > j || j > a.n()) {
    throw IndexOutOfRange("bordered matrix requires 1 <= i <= j <= n");
  }
  std::vector<std::size_t> idx(i);
  for (std::size_t k = 0; k + 1 < i; ++k) idx[k] = k;
  idx[i - 1] = j - 1;
  Matrix out(i, i);
  for (std::size_t p = 0; p < i; ++p)
    for (std::size_t q = 0; q < i; ++q) out(p, q) = a(idx[p], idx[q]);
  return out;
}

inline Matrix bordered_matrix(const CorrelationMatrix& r, std::size_t i, std::size_t j) {
  return bordered_matrix(r.square(), i, j);
}

/// Determinant of the bordered principal submatrix on {1..i-1, j} as the
/// product of its squared Cholesky pivots.
inline double bordered_pivot_determinant(const SquareMatrix& a, std::size_t i, std::size_t j,
                                         const Tolerances& tol = {}) {
  const SquareMatrix b(bordered_matrix(a, i, j));
  return running_products(squared_pivots(b, reference_cholesky(b, tol).matrix())).back();
}

/// |R_i^{*j}| for 2 <= i <= j <= n, as the product of squared Cholesky
/// pivots of the bordered matrix. For i == j this is |R_i|.
inline double bordered_determinant(const CorrelationMatrix& r, std::size_t i, std::size_t j) {
  if (i < 2 || i > j || j > r.n()) {
    throw IndexOutOfRange("bordered determinant requires 2 <= i <= j <= n");
  }
  return bordered_pivot_determinant(r.square(), i, j, r.tolerances());
}

/// R_i^{-1} from R_{i-1}^{-1}, the border row rho = rho_i and the Schur
/// complement c = 1 - rho R_{i-1}^{-1} rho^T:
///
///   R_i^{-1} = (1/c) | c R_{i-1}^{-1} + u u^T   -u |     u = R_{i-1}^{-1} rho^T
///                    | -u^T                      1 |
inline SquareMatrix banachiewicz_inverse(const SquareMatrix& prev_inv,
                                         std::span<const double> rho, double c,
                                         const Tolerances& tol = {}) {
  const std::size_t m = prev_inv.n();
  if (rho.size() != m) throw LengthMismatch(m, rho.size());
  if (!(c > tol.pd)) throw SchurNonPositive(c);
  std::vector<double> u(m, 0.0);
  for (std::size_t r = 0; r < m; ++r) u[r] = dot(prev_inv.matrix().row(r), rho);
  Matrix out(m + 1, m + 1);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t s = 0; s < m; ++s) out(r, s) = prev_inv(r, s) + u[r] * u[s] / c;
    out(r, m) = -u[r] / c;
    out(m, r) = -u[r] / c;
  }
  out(m, m) = 1.0 / c;
  return SquareMatrix(std::move(out));
}

/// a R^{-1} b^T for an explicit inverse.
inline double quadratic_form(const SquareMatrix& inv, std::span<const double> a,
                             std::span<const double> b) {
  double s = 0.0;
  for (std::size_t r = 0; r < inv.n(); ++r) s += a[r] * dot(inv.matrix().row(r), b);
  return s;
}

/// The chain R_1^{-1} = [1], R_2^{-1}, ..., R_n^{-1} built by repeated
/// Banachiewicz updates; element k holds R_{k+1}^{-1}.
inline std::vector<SquareMatrix> banachiewicz_chain(const CorrelationMatrix& r) {
  std::vector<SquareMatrix> chain;
  chain.reserve(r.n());
  chain.emplace_back(Matrix::identity(1));
  for (std::size_t i = 2; i <= r.n(); ++i) {
    const auto rho = r.prefix(i, i);
    const auto& prev = chain.back();
    const double c = 1.0 - quadratic_form(prev, rho, rho);
    chain.push_back(banachiewicz_inverse(prev, rho, c, r.tolerances()));
  }
  return chain;
}

}  // namespace cholparam

#endif  // CHOLPARAM_MATRIX_CORE_HPP
