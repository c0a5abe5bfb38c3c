#include "ompsd/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <utility>

#include "ompsd/bounds.hpp"
#include "ompsd/errors.hpp"
#include "ompsd/rng.hpp"

namespace ompsd {
namespace {

// Stream tag separating the signal draw from the matrix draw inside one
// trial; both descend from the same trial seed.
constexpr std::uint64_t kSignalStream = 1;

// Binomial standard error with a one-count floor so that a proportion of
// exactly 0 or 1 still leaves nonzero slack.
double binomial_sigma(double p, std::int64_t n) {
  const double raw = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return std::max(raw, 1.0 / static_cast<double>(n));
}

void require_samples(std::int64_t samples, std::int64_t floor) {
  if (samples < floor) {
    throw DimensionError("sample count must be at least " + std::to_string(floor));
  }
}

}  // namespace

WilsonInterval wilson_interval(std::int64_t count, std::int64_t trials, double z) {
  if (trials < 1) {
    throw DimensionError("Wilson interval needs at least one trial");
  }
  if (count < 0 || count > trials) {
    throw DimensionError("Wilson interval count must lie in [0, trials]");
  }
  if (!(z > 0.0)) {
    throw DomainError("Wilson interval z must be positive");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(count) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  WilsonInterval out;
  // The exact interval always contains p; the min/max against p absorb
  // the floating-point cancellation at p = 0 and p = 1.
  out.low = std::min(std::max(0.0, (center - half) / denom), p);
  out.high = std::max(std::min(1.0, (center + half) / denom), p);
  return out;
}

TrialOutcome run_trial_outcome(std::int64_t dimension, std::int64_t sparsity,
                               std::int64_t m, Ensemble ensemble,
                               std::uint64_t trial_seed, SignalMode signal_mode) {
  if (signal_mode != SignalMode::unit_coefficients) {
    throw DomainError("trials draw unit-coefficient signals; explicit values have no per-trial source");
  }
  if (sparsity > m) {
    throw DimensionError("trial requires sparsity <= measurement count");
  }
  const MeasurementMatrix matrix = generate_matrix(ensemble, m, dimension, trial_seed);
  const SparseSignal signal = generate_signal(dimension, sparsity, signal_mode,
                                              derive_seed(trial_seed, kSignalStream));
  const Measurement measurement = measure(matrix, signal);
  OmpConfig config;
  config.sparsity = sparsity;
  try {
    const OmpTrace trace = omp_detect(matrix, measurement.vector, config);
    return trace.detected() == signal.support ? TrialOutcome::success
                                              : TrialOutcome::wrong_support;
  } catch (const RankDeficientError&) {
    return TrialOutcome::solver_error;
  }
}

bool run_trial(std::int64_t dimension, std::int64_t sparsity, std::int64_t m,
               Ensemble ensemble, std::uint64_t trial_seed, SignalMode signal_mode) {
  return run_trial_outcome(dimension, sparsity, m, ensemble, trial_seed,
                           signal_mode) == TrialOutcome::success;
}

TrialRecord run_trial_traced(std::int64_t dimension, std::int64_t sparsity,
                             std::int64_t m, Ensemble ensemble,
                             std::uint64_t trial_seed, SignalMode signal_mode) {
  if (signal_mode != SignalMode::unit_coefficients) {
    throw DomainError("trials draw unit-coefficient signals; explicit values have no per-trial source");
  }
  if (sparsity > m) {
    throw DimensionError("trial requires sparsity <= measurement count");
  }
  const MeasurementMatrix matrix = generate_matrix(ensemble, m, dimension, trial_seed);
  const SparseSignal signal = generate_signal(dimension, sparsity, signal_mode,
                                              derive_seed(trial_seed, kSignalStream));
  const Measurement measurement = measure(matrix, signal);
  OmpConfig config;
  config.sparsity = sparsity;

  TrialRecord record;
  record.true_support = signal.support;
  try {
    record.trace = omp_detect(matrix, measurement.vector, config, &signal.support);
    record.success = record.trace.detected() == signal.support;
  } catch (const RankDeficientError& e) {
    record.error = e.what();
  }
  return record;
}

std::vector<TrialBatchResult> sweep_error_rate(const SweepConfig& config, int threads) {
  if (config.dimension < 1) {
    throw DimensionError("sweep dimension must be at least 1");
  }
  if (config.sparsity < 1 || config.sparsity > config.dimension) {
    throw DimensionError("sweep sparsity must lie in [1, dimension]");
  }
  if (config.trials < 100) {
    throw DimensionError("sweep needs at least 100 trials per point");
  }
  if (config.m_values.empty()) {
    throw DimensionError("sweep needs at least one measurement count");
  }
  for (const std::int64_t m : config.m_values) {
    if (m < config.sparsity) {
      throw DimensionError("every sweep measurement count must be at least the sparsity");
    }
  }

  int worker_count = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  worker_count = std::max(worker_count, 1);
  worker_count = static_cast<int>(
      std::min<std::int64_t>(worker_count, config.trials));

  std::vector<TrialBatchResult> results;
  results.reserve(config.m_values.size());

  for (const std::int64_t m : config.m_values) {
    std::vector<std::int64_t> successes(worker_count, 0);
    std::vector<std::int64_t> solver_errors(worker_count, 0);
    std::vector<std::exception_ptr> failures(worker_count);

    // Trial i always runs under seed f(base_seed, m, i), so the partition
    // below only distributes work; it cannot change any outcome.
    const auto worker = [&](int w) {
      try {
        std::int64_t ok = 0;
        std::int64_t bad = 0;
        for (std::int64_t i = w; i < config.trials; i += worker_count) {
          const std::uint64_t seed =
              derive_seed(config.base_seed, static_cast<std::uint64_t>(m),
                          static_cast<std::uint64_t>(i));
          switch (run_trial_outcome(config.dimension, config.sparsity, m,
                                    config.ensemble, seed, config.signal_mode)) {
            case TrialOutcome::success: ++ok; break;
            case TrialOutcome::solver_error: ++bad; break;
            case TrialOutcome::wrong_support: break;
          }
        }
        successes[w] = ok;
        solver_errors[w] = bad;
      } catch (...) {
        failures[w] = std::current_exception();
      }
    };

    if (worker_count == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(worker_count - 1);
      for (int w = 1; w < worker_count; ++w) {
        pool.emplace_back(worker, w);
      }
      worker(0);
      for (std::thread& t : pool) {
        t.join();
      }
    }
    for (const std::exception_ptr& failure : failures) {
      if (failure) {
        std::rethrow_exception(failure);
      }
    }

    TrialBatchResult row;
    row.m = m;
    row.trials = config.trials;
    for (int w = 0; w < worker_count; ++w) {
      row.successes += successes[w];
      row.solver_errors += solver_errors[w];
    }
    const std::int64_t failures_count = config.trials - row.successes;
    row.error_rate = static_cast<double>(failures_count) / static_cast<double>(config.trials);
    const WilsonInterval ci = wilson_interval(failures_count, config.trials);
    row.ci_low = ci.low;
    row.ci_high = ci.high;
    results.push_back(row);
  }
  return results;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) {
    throw DimensionError("empirical CDF needs at least one sample");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double delta) const {
  const auto first_ge = std::lower_bound(sorted_.begin(), sorted_.end(), delta);
  return static_cast<double>(first_ge - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

EmpiricalCdf sample_inner_product(std::int64_t m, std::int64_t samples,
                                  std::uint64_t seed) {
  if (m < 1) {
    throw DimensionError("inner-product sampling needs m >= 1");
  }
  require_samples(samples, 1000);
  SplitMix64 rng(seed);
  std::vector<double> values(static_cast<std::size_t>(samples));
  for (double& value : values) {
    double re = 0.0;
    double im = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
      const double phase = rng.next_phase();
      re += std::cos(phase);
      im += std::sin(phase);
    }
    value = std::hypot(re, im) / static_cast<double>(m);
  }
  return EmpiricalCdf(std::move(values));
}

EmpiricalCdf empirical_coherence_cdf(std::int64_t m, std::int64_t n,
                                     Ensemble ensemble, std::int64_t samples,
                                     std::uint64_t seed) {
  if (n < 2) {
    throw DimensionError("coherence sampling needs n >= 2 columns");
  }
  require_samples(samples, 1000);
  std::vector<double> values(static_cast<std::size_t>(samples));
  for (std::int64_t s = 0; s < samples; ++s) {
    const MeasurementMatrix matrix =
        generate_matrix(ensemble, m, n, derive_seed(seed, static_cast<std::uint64_t>(s)));
    values[static_cast<std::size_t>(s)] = coherence(matrix);
  }
  return EmpiricalCdf(std::move(values));
}

double exact_bernoulli_moment(std::int64_t m, int k) {
  if (m < 1 || m > 20) {
    throw DimensionError("exact sign enumeration supports 1 <= m <= 20");
  }
  if (k < 0) {
    throw DomainError("moment order must be nonnegative");
  }
  const std::uint64_t patterns = std::uint64_t{1} << m;
  double acc = 0.0;
  for (std::uint64_t bits = 0; bits < patterns; ++bits) {
    // <q, u> = (sum of signs) / m; a set bit contributes -1.
    const std::int64_t sum = m - 2 * static_cast<std::int64_t>(std::popcount(bits));
    const double value = static_cast<double>(sum) / static_cast<double>(m);
    acc += std::pow(value * value, k);
  }
  return acc / static_cast<double>(patterns);
}

const char* to_string(MomentVerdict v) {
  switch (v) {
    case MomentVerdict::equality: return "equality";
    case MomentVerdict::strict: return "strict";
    case MomentVerdict::violation: return "violation";
  }
  return "unknown";
}

std::vector<MomentRow> verify_lemma1_moments(std::int64_t m, int k_max,
                                             std::int64_t samples,
                                             std::uint64_t seed) {
  if (m < 1) {
    throw DimensionError("moment comparison needs m >= 1");
  }
  if (k_max < 2) {
    throw DomainError("moment comparison needs k_max >= 2");
  }
  require_samples(samples, 100000);

  // One batch of squared phase inner products |<p, u>|^2, reused for
  // every moment order.
  SplitMix64 rng(seed);
  std::vector<double> phase_sq(static_cast<std::size_t>(samples));
  for (double& x : phase_sq) {
    double re = 0.0;
    double im = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
      const double phase = rng.next_phase();
      re += std::cos(phase);
      im += std::sin(phase);
    }
    x = (re * re + im * im) / static_cast<double>(m * m);
  }

  // Sampled sign-vector counterpart, only consulted when no exact value
  // is available (m > 20 and k > 2).
  std::vector<double> sign_sq;
  if (m > 20 && k_max > 2) {
    SplitMix64 sign_rng(derive_seed(seed, 2));
    sign_sq.resize(static_cast<std::size_t>(samples));
    for (double& x : sign_sq) {
      double sum = 0.0;
      for (std::int64_t i = 0; i < m; ++i) {
        sum += sign_rng.next_sign();
      }
      x = (sum * sum) / static_cast<double>(m * m);
    }
  }

  const auto sampled_moment = [samples](const std::vector<double>& sq, int k,
                                        double& mean, double& stderr_out) {
    double acc = 0.0;
    for (const double x : sq) {
      acc += std::pow(x, k);
    }
    mean = acc / static_cast<double>(samples);
    double var = 0.0;
    for (const double x : sq) {
      const double d = std::pow(x, k) - mean;
      var += d * d;
    }
    var /= static_cast<double>(samples - 1);
    stderr_out = std::sqrt(var / static_cast<double>(samples));
  };

  std::vector<MomentRow> rows;
  rows.reserve(static_cast<std::size_t>(k_max) + 1);
  const double md = static_cast<double>(m);
  for (int k = 0; k <= k_max; ++k) {
    MomentRow row;
    row.k = k;
    sampled_moment(phase_sq, k, row.phase_moment, row.phase_stderr);

    if (m <= 20) {
      row.bernoulli_moment = exact_bernoulli_moment(m, k);
      row.bernoulli_exact = true;
    } else if (k == 0) {
      row.bernoulli_moment = 1.0;
      row.bernoulli_exact = true;
    } else if (k == 1) {
      row.bernoulli_moment = 1.0 / md;
      row.bernoulli_exact = true;
    } else if (k == 2) {
      row.bernoulli_moment = (3.0 * md - 2.0) / (md * md * md);
      row.bernoulli_exact = true;
    } else {
      sampled_moment(sign_sq, k, row.bernoulli_moment, row.bernoulli_stderr);
    }

    const double slack = 3.0 * std::hypot(row.phase_stderr, row.bernoulli_stderr);
    const double gap = row.bernoulli_moment - row.phase_moment;
    if (gap > slack) {
      row.verdict = MomentVerdict::strict;
    } else if (gap < -slack) {
      row.verdict = MomentVerdict::violation;
    } else {
      row.verdict = MomentVerdict::equality;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<BoundCheckPoint> verify_tail_bound(std::int64_t m, std::int64_t samples,
                                               const std::vector<double>& deltas,
                                               const std::vector<double>& gs,
                                               std::uint64_t seed) {
  const EmpiricalCdf cdf = sample_inner_product(m, samples, seed);
  std::vector<BoundCheckPoint> points;
  points.reserve(deltas.size() * gs.size());
  for (const double delta : deltas) {
    for (const double g : gs) {
      BoundCheckPoint point;
      point.delta = delta;
      point.g = g;
      point.empirical = 1.0 - cdf(delta);  // Pr(|<p,u>| >= delta)
      point.bound = tail_bound(delta, m, g);
      point.sigma = binomial_sigma(point.empirical, samples);
      point.ok = point.empirical <= point.bound + 3.0 * point.sigma;
      points.push_back(point);
    }
  }
  return points;
}

std::vector<BoundCheckPoint> verify_coherence_cdf(std::int64_t m, std::int64_t n,
                                                  Ensemble ensemble,
                                                  std::int64_t samples,
                                                  const std::vector<double>& deltas,
                                                  const std::vector<double>& gs,
                                                  std::uint64_t seed) {
  const EmpiricalCdf cdf = empirical_coherence_cdf(m, n, ensemble, samples, seed);
  std::vector<BoundCheckPoint> points;
  points.reserve(deltas.size() * gs.size());
  for (const double delta : deltas) {
    for (const double g : gs) {
      BoundCheckPoint point;
      point.delta = delta;
      point.g = g;
      point.empirical = cdf(delta);  // Pr(mu(A) < delta)
      point.bound = coherence_cdf_bound(delta, m, n, g);
      point.sigma = binomial_sigma(point.empirical, samples);
      point.ok = point.empirical >= point.bound - 3.0 * point.sigma;
      points.push_back(point);
    }
  }
  return points;
}

std::vector<double> default_delta_grid(int count) {
  if (count < 1) {
    throw DimensionError("delta grid needs at least one point");
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 1; i <= count; ++i) {
    grid[static_cast<std::size_t>(i - 1)] = static_cast<double>(i) / count;
  }
  return grid;
}

}  // namespace ompsd
