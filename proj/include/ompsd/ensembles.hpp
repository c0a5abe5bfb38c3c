#ifndef OMPSD_ENSEMBLES_HPP
#define OMPSD_ENSEMBLES_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ompsd {

using Index = Eigen::Index;
using Complex = std::complex<double>;

/// Measurement matrix ensembles.
///
/// * rpr              — constant-modulus entries exp(j*theta)/sqrt(M) with
///                      i.i.d. uniform phases; unit-norm columns by construction.
/// * bernoulli        — real +-1/sqrt(M) entries with equal probability; the
///                      phase-restricted {0, pi} special case of rpr.
/// * complex_gaussian — circularly symmetric complex entries with variance
///                      1/M per entry (no column renormalization).
/// * real_gaussian    — real N(0, 1/M) entries; alternative baseline for the
///                      empirical Gaussian error curve only.
/// * dft              — deterministic unitary-DFT columns (requires N <= M);
///                      orthonormal, used as a test ensemble. Seed is ignored.
enum class Ensemble { rpr, bernoulli, complex_gaussian, real_gaussian, dft };

const char* to_string(Ensemble e);
Ensemble ensemble_from_string(const std::string& name);

/// Complex M x N measurement matrix together with the recipe that produced
/// it. Column-major storage, so column access is contiguous. Regenerating
/// with the same (ensemble, M, N, seed) gives bit-identical entries.
struct MeasurementMatrix {
  Eigen::MatrixXcd entries;
  Ensemble ensemble = Ensemble::rpr;
  std::uint64_t seed = 0;

  Index rows() const { return entries.rows(); }
  Index cols() const { return entries.cols(); }
};

enum class SignalMode { unit_coefficients, given };

const char* to_string(SignalMode m);
SignalMode signal_mode_from_string(const std::string& name);

/// K-sparse signal of dimension N: sorted support indices plus the nonzero
/// coefficient at each support position.
struct SparseSignal {
  Index dim = 0;
  std::vector<Index> support;   // sorted, distinct, in [0, dim)
  Eigen::VectorXcd values;      // values(i) sits at support[i]; all nonzero

  Index sparsity() const { return static_cast<Index>(support.size()); }
  Eigen::VectorXcd dense() const;
};

/// y = A x together with what produced it, retained for scoring.
struct Measurement {
  Eigen::VectorXcd vector;
  MeasurementMatrix matrix;
  std::optional<SparseSignal> signal;
};

/// Draws an M x N matrix from the given ensemble. Entries are generated
/// column by column from a splitmix64 stream seeded with `seed`.
MeasurementMatrix generate_matrix(Ensemble ensemble, Index rows, Index cols,
                                  std::uint64_t seed);

/// Mutual coherence: max |<a_i, a_j>| over all distinct column pairs,
/// conjugate inner product, exhaustive over all N(N-1)/2 pairs.
/// Throws DimensionError for N < 2.
double coherence(const Eigen::MatrixXcd& entries);
double coherence(const MeasurementMatrix& matrix);

/// Draws a K-sparse signal with support chosen uniformly without
/// replacement from {0, ..., N-1}. In unit_coefficients mode every
/// coefficient is 1+0j; in given mode `values` supplies the K
/// coefficients (all nonzero) in support-sorted order.
SparseSignal generate_signal(Index dim, Index sparsity, SignalMode mode,
                             std::uint64_t seed,
                             const std::vector<Complex>& values = {});

/// y_m = sum over support of A(m, k) * x_k; touches only support columns.
Measurement measure(const MeasurementMatrix& matrix, const SparseSignal& signal);

}  // namespace ompsd

#endif  // OMPSD_ENSEMBLES_HPP
