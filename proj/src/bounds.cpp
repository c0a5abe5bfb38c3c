#include "ompsd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ompsd/errors.hpp"

namespace ompsd {

namespace {

void require_g(double g) {
  if (!(g > 2.0)) throw DomainError("g must exceed 2");
}

void require_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
}

void require_positive(std::int64_t v, const char* name) {
  if (v < 1) throw DomainError(std::string(name) + " must be positive");
}

}  // namespace

std::optional<std::string> BoundInputs::regime_warning() const {
  if (sparsity <= measurements && measurements < dimension) return std::nullopt;
  std::ostringstream os;
  os << "outside the K <= M < N regime (M=" << measurements << ", N=" << dimension
     << ", K=" << sparsity << "); bounds are evaluated as stated but were derived "
     << "for sparse underdetermined problems";
  return os.str();
}

double tail_bound(double delta, std::int64_t m, double g) {
  require_g(g);
  require_positive(m, "M");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  return std::pow(1.0 - 2.0 / g, -0.5) *
         std::exp(-delta * delta * static_cast<double>(m) / g);
}

double bernstein_tail_bound(double delta, std::int64_t m) {
  require_positive(m, "M");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const double md = static_cast<double>(m);
  return 4.0 * std::exp(-3.0 * md * delta * delta /
                        (2.0 * delta * std::sqrt(md) + 6.0));
}

double coherence_cdf_bound(double delta, std::int64_t m, std::int64_t n, double g) {
  require_g(g);
  if (n < 2) throw DomainError("coherence CDF bound needs N >= 2");
  const double base =
      std::clamp(1.0 - tail_bound(delta, m, g), 0.0, 1.0);
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return std::pow(base, pairs);
}

SsdBound ssd_prob_bound(const BoundInputs& in) {
  require_g(in.g);
  require_positive(in.dimension, "N");
  require_positive(in.sparsity, "K");
  if (in.measurements < 0) throw DomainError("M must be nonnegative");
  const double k = static_cast<double>(in.sparsity);
  const double value =
      1.0 - std::pow(1.0 - 2.0 / in.g, -0.5) * k * static_cast<double>(in.dimension) *
                std::exp(-static_cast<double>(in.measurements) / (in.g * k * k));
  return SsdBound{value, value <= 0.0};
}

double rpr_m_objective(double g, std::int64_t n, std::int64_t k, double eps) {
  require_g(g);
  require_eps(eps);
  require_positive(n, "N");
  require_positive(k, "K");
  const double kd = static_cast<double>(k);
  return g * kd * kd *
         std::log(kd * static_cast<double>(n) / (eps * std::sqrt(1.0 - 2.0 / g)));
}

double rpr_m_objective_derivative(double g, std::int64_t n, std::int64_t k, double eps) {
  require_g(g);
  require_eps(eps);
  const double kd = static_cast<double>(k);
  return kd * kd * std::log(kd * static_cast<double>(n) /
                            (eps * std::sqrt(1.0 - 2.0 / g))) -
         kd * kd / (g - 2.0);
}

namespace {

RequiredM with_rounding(double real) {
  return RequiredM{real, static_cast<std::int64_t>(std::ceil(real)),
                   static_cast<std::int64_t>(std::llround(real))};
}

}  // namespace

RequiredM required_m_rpr(std::int64_t n, std::int64_t k, double eps, double g) {
  return with_rounding(rpr_m_objective(g, n, k, eps));
}

double lambert_w_m1(double z) {
  constexpr double kE = std::numbers::e;
  if (!(z >= -1.0 / kE && z < 0.0))
    throw DomainError("lambert_w_m1: argument must lie in [-1/e, 0)");

  // Branch-point series in p = -sqrt(2 (1 + e z)); exact W_{-1} expansion
  // about z = -1/e.
  const double p_sq = 2.0 * (1.0 + kE * z);
  if (p_sq <= 0.0) return -1.0;  // rounding placed z at (or below) the branch point
  const double p = -std::sqrt(p_sq);
  const double series =
      -1.0 + p * (1.0 + p * (-1.0 / 3.0 +
                   p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * (769.0 / 17280.0)))));
  if (p_sq < 2e-6) return series;  // guess accuracy already ~1e-18 here

  double w;
  if (z < -0.25) {
    w = series;
  } else {
    // Asymptotic guess for the lower branch away from the branch point.
    const double l1 = std::log(-z);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  }

  // Fritsch iteration; quartic convergence, and written against
  // log(z / w) so deep-negative w never under- or overflows.
  for (int i = 0; i < 30; ++i) {
    const double zn = std::log(z / w) - w;
    const double qn = 2.0 * (1.0 + w) * (1.0 + w + (2.0 / 3.0) * zn);
    const double en = (zn / (1.0 + w)) * ((qn - zn) / (qn - 2.0 * zn));
    w *= 1.0 + en;
    if (std::abs(en) <= 1e-15) break;
  }
  return w;
}

double g_opt(std::int64_t n, std::int64_t k, double eps) {
  require_eps(eps);
  require_positive(n, "N");
  require_positive(k, "K");
  const double ratio = eps / (static_cast<double>(k) * static_cast<double>(n));
  const double z = -(ratio * ratio) / std::numbers::e;
  // eps < 1 <= K N keeps z inside (-1/e, 0); guarded regardless.
  const double alpha = -1.0 / lambert_w_m1(z);
  return 2.0 / (1.0 - alpha);
}

RequiredM required_m_gaussian(std::int64_t n, std::int64_t k, double eps, double c) {
  require_eps(eps);
  require_positive(n, "N");
  require_positive(k, "K");
  if (!(c > 0.0)) throw DomainError("gaussian constant C must be positive");
  return with_rounding(c * static_cast<double>(k) *
                       std::log(static_cast<double>(n) / eps));
}

double required_m_rip(std::int64_t n, std::int64_t k) {
  require_positive(n, "N");
  require_positive(k, "K");
  if (k >= n) throw DomainError("RIP bound needs K < N");
  const double kd = static_cast<double>(k);
  return 16.0 * kd * kd * std::log(static_cast<double>(n) / kd);
}

}  // namespace ompsd
