#ifndef OMPSD_OMP_HPP
#define OMPSD_OMP_HPP

#include <vector>

#include "ompsd/ensembles.hpp"

namespace ompsd {

enum class TieBreak { lowest_index };

struct OmpConfig {
  Index sparsity = 1;              // iteration count K
  double rank_tolerance = 1e-10;   // least-squares degeneracy threshold
  TieBreak tie_break = TieBreak::lowest_index;
};

/// Full record of an OMP run: the K selected indices in selection order,
/// the K+1 residual norms, the per-iteration least-squares coefficients,
/// and (when the true support was supplied) the greedy selection ratio
/// evaluated on each pre-selection residual. A degenerate ratio
/// denominator is recorded as +infinity rather than raised.
struct OmpTrace {
  std::vector<Index> selected;
  std::vector<double> residual_norms;
  std::vector<Eigen::VectorXcd> coefficients;
  std::vector<double> greedy_ratios;

  /// Selected indices as a sorted set (the detected support).
  std::vector<Index> detected() const;
};

/// Solves min_z ||y - A_S z||_2 by column-pivoted Householder QR.
/// Throws RankDeficientError when the smallest pivot magnitude falls
/// below rank_tolerance times the largest.
Eigen::VectorXcd least_squares(const Eigen::MatrixXcd& columns,
                               const Eigen::VectorXcd& y,
                               double rank_tolerance = 1e-10);

/// Greedy selection ratio: max |<a_n, r>| over off-support columns divided
/// by max |<a_n, r>| over support columns. Below 1 it is sufficient for the
/// next greedy pick to be a true support index. Throws DegenerateRatioError
/// when the denominator vanishes, DimensionError on an empty or non-proper
/// support or zero residual.
double greedy_ratio(const MeasurementMatrix& matrix,
                    const std::vector<Index>& support,
                    const Eigen::VectorXcd& residual);

/// Orthogonal matching pursuit for support detection. Runs exactly K
/// iterations: pick the unselected column most correlated with the
/// residual (ties to the lowest index), refit coefficients on the
/// selected block by least squares, update the residual. No early
/// stopping on a numerically zero residual.
///
/// When `true_support` is non-null, greedy_ratio against it is evaluated
/// on every pre-selection residual and recorded in the trace.
OmpTrace omp_detect(const MeasurementMatrix& matrix, const Eigen::VectorXcd& y,
                    const OmpConfig& config,
                    const std::vector<Index>* true_support = nullptr);

}  // namespace ompsd

#endif  // OMPSD_OMP_HPP
