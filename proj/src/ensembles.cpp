#include "ompsd/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ompsd/errors.hpp"
#include "ompsd/rng.hpp"

namespace ompsd {

const char* to_string(Ensemble e) {
  switch (e) {
    case Ensemble::rpr: return "rpr";
    case Ensemble::bernoulli: return "bernoulli";
    case Ensemble::complex_gaussian: return "complex_gaussian";
    case Ensemble::real_gaussian: return "real_gaussian";
    case Ensemble::dft: return "dft";
  }
  return "?";
}

Ensemble ensemble_from_string(const std::string& name) {
  if (name == "rpr") return Ensemble::rpr;
  if (name == "bernoulli") return Ensemble::bernoulli;
  if (name == "complex_gaussian" || name == "gaussian") return Ensemble::complex_gaussian;
  if (name == "real_gaussian") return Ensemble::real_gaussian;
  if (name == "dft") return Ensemble::dft;
  throw DomainError("unknown ensemble: " + name);
}

const char* to_string(SignalMode m) {
  return m == SignalMode::unit_coefficients ? "unit_coefficients" : "given";
}

SignalMode signal_mode_from_string(const std::string& name) {
  if (name == "unit_coefficients") return SignalMode::unit_coefficients;
  if (name == "given") return SignalMode::given;
  throw DomainError("unknown signal mode: " + name);
}

Eigen::VectorXcd SparseSignal::dense() const {
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dim);
  for (Index i = 0; i < sparsity(); ++i) x(support[static_cast<size_t>(i)]) = values(i);
  return x;
}

MeasurementMatrix generate_matrix(Ensemble ensemble, Index rows, Index cols,
                                  std::uint64_t seed) {
  if (rows < 1 || cols < 1)
    throw DimensionError("generate_matrix: dimensions must be positive");

  MeasurementMatrix out;
  out.ensemble = ensemble;
  out.seed = seed;
  out.entries.resize(rows, cols);

  SplitMix64 rng(seed);
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(rows));

  switch (ensemble) {
    case Ensemble::rpr:
      for (Index n = 0; n < cols; ++n)
        for (Index m = 0; m < rows; ++m) {
          const double theta = rng.next_phase();
          out.entries(m, n) = Complex(inv_sqrt_m * std::cos(theta),
                                      inv_sqrt_m * std::sin(theta));
        }
      break;
    case Ensemble::bernoulli:
      for (Index n = 0; n < cols; ++n)
        for (Index m = 0; m < rows; ++m)
          out.entries(m, n) = Complex(rng.next_sign() * inv_sqrt_m, 0.0);
      break;
    case Ensemble::complex_gaussian: {
      const double scale = inv_sqrt_m / std::numbers::sqrt2;  // E|entry|^2 = 1/M
      for (Index n = 0; n < cols; ++n)
        for (Index m = 0; m < rows; ++m) {
          double g1, g2;
          rng.next_gaussian_pair(g1, g2);
          out.entries(m, n) = Complex(scale * g1, scale * g2);
        }
      break;
    }
    case Ensemble::real_gaussian:
      for (Index n = 0; n < cols; ++n)
        for (Index m = 0; m < rows; ++m) {
          double g1, g2;
          rng.next_gaussian_pair(g1, g2);
          (void)g2;
          out.entries(m, n) = Complex(inv_sqrt_m * g1, 0.0);
        }
      break;
    case Ensemble::dft: {
      if (cols > rows)
        throw DimensionError("generate_matrix: dft ensemble requires N <= M");
      // First N columns of the unitary M-point DFT: orthonormal, constant
      // modulus, deterministic.
      const double step = 2.0 * std::numbers::pi / static_cast<double>(rows);
      for (Index n = 0; n < cols; ++n)
        for (Index m = 0; m < rows; ++m) {
          const double theta = step * static_cast<double>(m) * static_cast<double>(n);
          out.entries(m, n) = Complex(inv_sqrt_m * std::cos(theta),
                                      inv_sqrt_m * std::sin(theta));
        }
      break;
    }
  }
  return out;
}

double coherence(const Eigen::MatrixXcd& entries) {
  const Index cols = entries.cols();
  if (cols < 2) throw DimensionError("coherence: need at least two columns");
  double best = 0.0;
  for (Index i = 0; i < cols; ++i)
    for (Index j = i + 1; j < cols; ++j)
      best = std::max(best, std::abs(entries.col(i).dot(entries.col(j))));
  return best;
}

double coherence(const MeasurementMatrix& matrix) { return coherence(matrix.entries); }

SparseSignal generate_signal(Index dim, Index sparsity, SignalMode mode,
                             std::uint64_t seed, const std::vector<Complex>& values) {
  if (dim < 1 || sparsity < 1)
    throw DimensionError("generate_signal: dimensions must be positive");
  if (sparsity > dim)
    throw DimensionError("generate_signal: sparsity exceeds dimension");
  if (mode == SignalMode::given) {
    if (static_cast<Index>(values.size()) != sparsity)
      throw DimensionError("generate_signal: need exactly K given values");
    for (const auto& v : values)
      if (v == Complex(0.0, 0.0))
        throw DomainError("generate_signal: coefficients must be nonzero");
  }

  SplitMix64 rng(seed);
  // Partial Fisher-Yates: the first K slots end up as a uniform
  // without-replacement sample of {0, ..., N-1}.
  std::vector<Index> pool(static_cast<size_t>(dim));
  for (Index i = 0; i < dim; ++i) pool[static_cast<size_t>(i)] = i;
  for (Index i = 0; i < sparsity; ++i) {
    const auto j = i + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(dim - i)));
    std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
  }

  SparseSignal sig;
  sig.dim = dim;
  sig.support.assign(pool.begin(), pool.begin() + sparsity);
  std::sort(sig.support.begin(), sig.support.end());
  sig.values.resize(sparsity);
  if (mode == SignalMode::unit_coefficients) {
    sig.values.setOnes();
  } else {
    for (Index i = 0; i < sparsity; ++i) sig.values(i) = values[static_cast<size_t>(i)];
  }
  return sig;
}

Measurement measure(const MeasurementMatrix& matrix, const SparseSignal& signal) {
  if (matrix.cols() != signal.dim)
    throw DimensionError("measure: matrix columns must match signal dimension");
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(matrix.rows());
  for (Index i = 0; i < signal.sparsity(); ++i)
    y += matrix.entries.col(signal.support[static_cast<size_t>(i)]) * signal.values(i);
  return Measurement{std::move(y), matrix, signal};
}

}  // namespace ompsd
