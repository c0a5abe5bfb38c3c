#ifndef OMPSD_MONTECARLO_HPP
#define OMPSD_MONTECARLO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ompsd/ensembles.hpp"
#include "ompsd/omp.hpp"

namespace ompsd {

/// 95% two-sided normal quantile used for every Wilson interval.
inline constexpr double kWilsonZ = 1.959963984540054;

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for a binomial proportion; always contains the
/// point estimate count/trials.
WilsonInterval wilson_interval(std::int64_t count, std::int64_t trials,
                               double z = kWilsonZ);

struct SweepConfig {
  std::int64_t dimension = 200;  // N
  std::int64_t sparsity = 2;     // K
  std::vector<std::int64_t> m_values;
  std::int64_t trials = 10000;
  std::uint64_t base_seed = 0;
  Ensemble ensemble = Ensemble::rpr;
  SignalMode signal_mode = SignalMode::unit_coefficients;
};

/// Aggregate over one sweep point: support-detection error rate with its
/// 95% Wilson interval. solver_errors counts trials that failed because
/// the solver raised (scored as unsuccessful, reported separately).
struct TrialBatchResult {
  std::int64_t m = 0;
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  double error_rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::int64_t solver_errors = 0;
};

enum class TrialOutcome { success, wrong_support, solver_error };

/// One end-to-end trial: draw A from the ensemble with seed trial_seed,
/// draw a unit-coefficient K-sparse signal from a derived seed, measure,
/// run OMP for K iterations, score detected-set equality.
TrialOutcome run_trial_outcome(std::int64_t dimension, std::int64_t sparsity,
                               std::int64_t m, Ensemble ensemble,
                               std::uint64_t trial_seed,
                               SignalMode signal_mode = SignalMode::unit_coefficients);

bool run_trial(std::int64_t dimension, std::int64_t sparsity, std::int64_t m,
               Ensemble ensemble, std::uint64_t trial_seed,
               SignalMode signal_mode = SignalMode::unit_coefficients);

/// run_trial with the full OMP trace retained (greedy ratios included).
struct TrialRecord {
  bool success = false;
  std::vector<Index> true_support;
  OmpTrace trace;
  std::string error;  // nonempty when the solver raised
};

TrialRecord run_trial_traced(std::int64_t dimension, std::int64_t sparsity,
                             std::int64_t m, Ensemble ensemble,
                             std::uint64_t trial_seed,
                             SignalMode signal_mode = SignalMode::unit_coefficients);

/// Error rate versus M. Trial i at sweep point m uses the derived seed
/// f(base_seed, m, i), so results are identical for any worker count or
/// execution order. threads = 0 picks the hardware concurrency.
std::vector<TrialBatchResult> sweep_error_rate(const SweepConfig& config,
                                               int threads = 0);

/// Empirical CDF over a fixed sample: evaluation at delta returns the
/// fraction of samples strictly below delta.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);

  double operator()(double delta) const;
  std::int64_t sample_count() const { return static_cast<std::int64_t>(sorted_.size()); }
  const std::vector<double>& sorted_values() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

/// Samples |<p, u>| where p is a random phase vector and u the constant
/// unit vector — the distribution every distinct-column inner product of
/// a random phase matrix shares.
EmpiricalCdf sample_inner_product(std::int64_t m, std::int64_t samples,
                                  std::uint64_t seed);

/// Coherence of `samples` freshly drawn M x N matrices.
EmpiricalCdf empirical_coherence_cdf(std::int64_t m, std::int64_t n,
                                     Ensemble ensemble, std::int64_t samples,
                                     std::uint64_t seed);

/// Exact E[ |<q, u>|^{2k} ] for a Bernoulli sign vector q against the
/// constant unit vector, by enumerating all 2^M sign patterns (M <= 20).
double exact_bernoulli_moment(std::int64_t m, int k);

enum class MomentVerdict { equality, strict, violation };

const char* to_string(MomentVerdict v);

/// One row of the moment-inequality comparison at a given k: sampled
/// phase-vector moment on the left, Bernoulli moment on the right
/// (closed form for k <= 2, sampled above), and the inequality verdict
/// at 3 standard errors.
struct MomentRow {
  int k = 0;
  double phase_moment = 0.0;
  double phase_stderr = 0.0;
  double bernoulli_moment = 0.0;
  double bernoulli_stderr = 0.0;  // 0 when the right side is exact
  bool bernoulli_exact = false;
  MomentVerdict verdict = MomentVerdict::equality;
};

/// Checks E[|<p,u>|^{2k}] <= E[|<q,u>|^{2k}] for k = 0..k_max, with
/// equality expected at k in {0, 1}.
std::vector<MomentRow> verify_lemma1_moments(std::int64_t m, int k_max,
                                             std::int64_t samples,
                                             std::uint64_t seed);

/// One grid point of a bound-dominance check. `sigma` is the binomial
/// standard error of the empirical estimate; `ok` allows 3 sigma slack.
struct BoundCheckPoint {
  double delta = 0.0;
  double g = 0.0;
  double empirical = 0.0;
  double bound = 0.0;
  double sigma = 0.0;
  bool ok = false;
};

/// Empirical Pr(|<p,u>| >= delta) <= tail_bound(delta, M, g) + 3 sigma
/// over a (delta, g) grid, all from one sample batch.
std::vector<BoundCheckPoint> verify_tail_bound(std::int64_t m, std::int64_t samples,
                                               const std::vector<double>& deltas,
                                               const std::vector<double>& gs,
                                               std::uint64_t seed);

/// Empirical Pr(mu(A) < delta) >= coherence_cdf_bound(...) - 3 sigma over
/// a (delta, g) grid.
std::vector<BoundCheckPoint> verify_coherence_cdf(std::int64_t m, std::int64_t n,
                                                  Ensemble ensemble,
                                                  std::int64_t samples,
                                                  const std::vector<double>& deltas,
                                                  const std::vector<double>& gs,
                                                  std::uint64_t seed);

/// count equally spaced deltas over (0, 1]: (1/count, 2/count, ..., 1).
std::vector<double> default_delta_grid(int count = 32);

}  // namespace ompsd

#endif  // OMPSD_MONTECARLO_HPP
