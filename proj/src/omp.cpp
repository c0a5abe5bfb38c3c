#include "ompsd/omp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ompsd/errors.hpp"

namespace ompsd {

std::vector<Index> OmpTrace::detected() const {
  std::vector<Index> out = selected;
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::VectorXcd least_squares(const Eigen::MatrixXcd& columns,
                               const Eigen::VectorXcd& y, double rank_tolerance) {
  if (columns.rows() != y.size())
    throw DimensionError("least_squares: row count must match measurement length");
  if (columns.cols() > columns.rows())
    throw DimensionError("least_squares: more columns than rows");
  if (rank_tolerance <= 0.0)
    throw DomainError("least_squares: rank tolerance must be positive");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(columns);
  // Column pivoting sorts the R diagonal by decreasing magnitude.
  const auto diag = qr.matrixR().diagonal();
  const Index t = columns.cols();
  const double largest = std::abs(diag(0));
  const double smallest = std::abs(diag(t - 1));
  if (largest == 0.0 || smallest < rank_tolerance * largest)
    throw RankDeficientError("least_squares: numerically rank-deficient columns");
  return qr.solve(y);
}

namespace {

/// Ratio with +inf on a vanished denominator; shared by the throwing
/// public wrapper and the trace recorder.
double greedy_ratio_or_inf(const MeasurementMatrix& matrix,
                           const std::vector<Index>& support,
                           const Eigen::VectorXcd& residual) {
  const Index cols = matrix.cols();
  std::vector<bool> on_support(static_cast<size_t>(cols), false);
  for (Index n : support) {
    if (n < 0 || n >= cols)
      throw DimensionError("greedy_ratio: support index out of range");
    on_support[static_cast<size_t>(n)] = true;
  }

  double num = 0.0, den = 0.0;
  for (Index n = 0; n < cols; ++n) {
    const double c = std::abs(matrix.entries.col(n).dot(residual));
    if (on_support[static_cast<size_t>(n)])
      den = std::max(den, c);
    else
      num = std::max(num, c);
  }
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace

double greedy_ratio(const MeasurementMatrix& matrix,
                    const std::vector<Index>& support,
                    const Eigen::VectorXcd& residual) {
  if (support.empty())
    throw DimensionError("greedy_ratio: support must be nonempty");
  if (static_cast<Index>(support.size()) >= matrix.cols())
    throw DimensionError("greedy_ratio: support must be a strict subset of columns");
  if (matrix.rows() != residual.size())
    throw DimensionError("greedy_ratio: residual length must match row count");
  if (residual.norm() == 0.0)
    throw DimensionError("greedy_ratio: residual must be nonzero");

  const double rho = greedy_ratio_or_inf(matrix, support, residual);
  if (std::isinf(rho))
    throw DegenerateRatioError("greedy_ratio: residual orthogonal to support block");
  return rho;
}

OmpTrace omp_detect(const MeasurementMatrix& matrix, const Eigen::VectorXcd& y,
                    const OmpConfig& config, const std::vector<Index>* true_support) {
  const Index rows = matrix.rows();
  const Index cols = matrix.cols();
  const Index k = config.sparsity;
  if (y.size() != rows)
    throw DimensionError("omp_detect: measurement length must match matrix rows");
  if (k < 1 || k > std::min(rows, cols))
    throw DimensionError("omp_detect: sparsity must lie in [1, min(M, N)]");

  OmpTrace trace;
  trace.selected.reserve(static_cast<size_t>(k));
  trace.residual_norms.reserve(static_cast<size_t>(k) + 1);
  trace.coefficients.reserve(static_cast<size_t>(k));

  Eigen::VectorXcd residual = y;
  trace.residual_norms.push_back(residual.norm());

  std::vector<bool> used(static_cast<size_t>(cols), false);
  Eigen::MatrixXcd block(rows, k);

  for (Index t = 1; t <= k; ++t) {
    if (true_support != nullptr)
      trace.greedy_ratios.push_back(greedy_ratio_or_inf(matrix, *true_support, residual));

    // Greedy selection over unselected columns, ties to lowest index.
    Index pick = -1;
    double best = -1.0;
    for (Index n = 0; n < cols; ++n) {
      if (used[static_cast<size_t>(n)]) continue;
      const double c = std::abs(matrix.entries.col(n).dot(residual));
      if (c > best) {
        best = c;
        pick = n;
      }
    }
    used[static_cast<size_t>(pick)] = true;
    trace.selected.push_back(pick);
    block.col(t - 1) = matrix.entries.col(pick);

    const auto active = block.leftCols(t);
    Eigen::VectorXcd coeffs = least_squares(active, y, config.rank_tolerance);
    residual = y - active * coeffs;
    trace.coefficients.push_back(std::move(coeffs));
    trace.residual_norms.push_back(residual.norm());
  }
  return trace;
}

}  // namespace ompsd
