#ifndef CHOLPARAM_RANDCORR_HPP
#define CHOLPARAM_RANDCORR_HPP

// Random positive-definite correlation matrices from ordered uniforms.
//
// The uniforms play the role of determinant ratios. Sorting them keeps both
// determinant orderings intact, so L L^T is positive definite by
// construction and each row of L has unit norm (the squared entries of row j
// telescope to U_(1)^{(j)} = 1).
//
// Draw order on the stream (fixed, so other implementations can match it):
//   1. n-1 uniforms on (0,1]                           -> diagonal
//   2. for j = 3..n: j-2 uniforms on (l_jj^2, 1]       -> row j ladder
//   3. for j = 2..n, i = 1..j-1: one uniform on [0,1)  -> sign of l_ji,
//      positive when below sign_bias

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "cholparam/errors.hpp"
#include "cholparam/matrix_core.hpp"
#include "cholparam/rng.hpp"

namespace cholparam {

struct GeneratorConfig {
  std::size_t n = 1;
  std::uint64_t seed = 0;
  double sign_bias = 0.5;  ///< probability that a sign is +1

  void validate() const {
    if (n < 1) throw InvalidInput("generator dimension must be at least 1");
    if (!(sign_bias >= 0.0 && sign_bias <= 1.0)) throw InvalidInput("sign_bias must lie in [0, 1]");
  }
};

struct GeneratedCorrelation {
  CholeskyFactor factor;
  CorrelationMatrix matrix;
  /// Step-1 uniforms sorted decreasing, U_(2) >= ... >= U_(n); by
  /// construction |R_j| = U_(j), so the last one is |R|.
  std::vector<double> minors;
};

/// One matrix drawn from `rng`.
inline GeneratedCorrelation generate(const GeneratorConfig& cfg, Rng& rng,
                                     const Tolerances& tol = {}) {
  cfg.validate();
  const std::size_t n = cfg.n;
  Matrix l(n, n);
  l(0, 0) = 1.0;

  std::vector<double> diag_u(n - 1);
  for (double& u : diag_u) u = rng.uniform_half_open();
  std::stable_sort(diag_u.begin(), diag_u.end(), std::greater<>());
  for (std::size_t j = 2; j <= n; ++j) {
    const double prev = j == 2 ? 1.0 : diag_u[j - 3];
    l(j - 1, j - 1) = std::sqrt(diag_u[j - 2] / prev);
  }

  std::vector<double> ladder;
  for (std::size_t j = 2; j <= n; ++j) {
    const double floor = l(j - 1, j - 1) * l(j - 1, j - 1);
    ladder.assign(j, 0.0);
    ladder.front() = 1.0;
    ladder.back() = floor;
    for (std::size_t k = 1; k + 1 < j; ++k) ladder[k] = floor + (1.0 - floor) * rng.uniform_half_open();
    std::stable_sort(ladder.begin() + 1, ladder.end() - 1, std::greater<>());
    for (std::size_t i = 1; i < j; ++i) l(j - 1, i - 1) = std::sqrt(ladder[i - 1] - ladder[i]);
  }

  for (std::size_t j = 2; j <= n; ++j)
    for (std::size_t i = 1; i < j; ++i)
      if (!rng.bernoulli(cfg.sign_bias)) l(j - 1, i - 1) = -l(j - 1, i - 1);

  CholeskyFactor factor(std::move(l), FactorMethod::detratio);
  CorrelationMatrix matrix(SquareMatrix(factor.reconstruct()), tol);
  return {std::move(factor), std::move(matrix), std::move(diag_u)};
}

/// One matrix from the stream seeded directly with cfg.seed.
inline GeneratedCorrelation generate(const GeneratorConfig& cfg, const Tolerances& tol = {}) {
  Rng rng(cfg.seed);
  return generate(cfg, rng, tol);
}

/// Element k is drawn from substream k of cfg.seed, so it does not depend on
/// `count`.
inline GeneratedCorrelation generate_at(const GeneratorConfig& cfg, std::uint64_t index,
                                        const Tolerances& tol = {}) {
  Rng rng = Rng::substream(cfg.seed, index);
  return generate(cfg, rng, tol);
}

inline std::vector<CorrelationMatrix> generate_batch(const GeneratorConfig& cfg, std::size_t count,
                                                     const Tolerances& tol = {}) {
  if (count < 1) throw InvalidInput("batch count must be positive");
  std::vector<CorrelationMatrix> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(generate_at(cfg, k, tol).matrix);
  return out;
}

}  // namespace cholparam

#endif  // CHOLPARAM_RANDCORR_HPP
