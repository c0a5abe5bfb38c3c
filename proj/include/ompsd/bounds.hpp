#ifndef OMPSD_BOUNDS_HPP
#define OMPSD_BOUNDS_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace ompsd {

/// Parameter bundle consumed by the closed-form guarantees: M measurements,
/// signal dimension N, sparsity K, target failure probability eps, and the
/// free Chernoff variable g > 2.
struct BoundInputs {
  std::int64_t measurements = 0;  // M
  std::int64_t dimension = 0;     // N
  std::int64_t sparsity = 0;      // K
  double eps = 0.1;
  double g = 3.0;

  /// Non-fatal note when (M, N, K) leave the K <= M < N regime the
  /// guarantees were derived for. The formulas stay defined outside it.
  std::optional<std::string> regime_warning() const;
};

/// Chernoff tail bound on |<p, u>| for a random phase vector p against any
/// unit-norm u:  (1 - 2/g)^{-1/2} * exp(-delta^2 M / g),  g > 2.
/// May exceed 1 for small delta (vacuous); returned unclamped.
double tail_bound(double delta, std::int64_t m, double g);

/// Matrix-Bernstein alternative: 4 * exp(-3 M delta^2 / (2 delta sqrt(M) + 6)).
/// Kept for looseness comparisons against tail_bound.
double bernstein_tail_bound(double delta, std::int64_t m);

/// Lower bound on Pr(mu(A) < delta) for an M x N random phase matrix:
/// (1 - tail_bound)^{N(N-1)/2} with the base clamped to [0, 1].
double coherence_cdf_bound(double delta, std::int64_t m, std::int64_t n, double g);

struct SsdBound {
  double value = 0.0;   // may be negative; returned unclamped
  bool vacuous = false; // true when the bound says nothing (value <= 0)
};

/// Lower bound on the probability that OMP detects the exact support:
/// 1 - (1 - 2/g)^{-1/2} * K * N * exp(-M / (g K^2)).
SsdBound ssd_prob_bound(const BoundInputs& in);

struct RequiredM {
  double real = 0.0;
  std::int64_t ceil = 0;
  std::int64_t round = 0;
};

/// Measurement count sufficient for success probability >= 1 - eps with
/// random phase measurements: g K^2 ln(K N / (eps sqrt(1 - 2/g))).
RequiredM required_m_rpr(std::int64_t n, std::int64_t k, double eps, double g);

/// The same right-hand side as a function of g, for optimality checks.
double rpr_m_objective(double g, std::int64_t n, std::int64_t k, double eps);

/// d/dg of rpr_m_objective: K^2 ln(K N / (eps sqrt(1 - 2/g))) - K^2 / (g - 2).
double rpr_m_objective_derivative(double g, std::int64_t n, std::int64_t k, double eps);

/// Minimizer of rpr_m_objective over g > 2, in closed form via the lower
/// Lambert branch: g = 2 / (1 + 1 / W_{-1}(-(eps / (K N))^2 / e)).
double g_opt(std::int64_t n, std::int64_t k, double eps);

/// Lower real branch of the Lambert W function on (-1/e, 0); returns
/// w <= -1 with w * exp(w) = z to ~1e-13 relative. Branch-point series
/// near z = -1/e, asymptotic initial guess elsewhere, Fritsch iteration.
double lambert_w_m1(double z);

/// Gaussian-ensemble baseline: C K ln(N / eps), C = 11 by default.
RequiredM required_m_gaussian(std::int64_t n, std::int64_t k, double eps, double c = 11.0);

/// Restricted-isometry comparison bound: 16 K^2 ln(N / K).
double required_m_rip(std::int64_t n, std::int64_t k);

}  // namespace ompsd

#endif  // OMPSD_BOUNDS_HPP
