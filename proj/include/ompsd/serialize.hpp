#ifndef OMPSD_SERIALIZE_HPP
#define OMPSD_SERIALIZE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ompsd/ensembles.hpp"
#include "ompsd/montecarlo.hpp"
#include "ompsd/omp.hpp"

namespace ompsd {

/// Fixed 17-significant-digit formatting: the decimal round trip is exact
/// for IEEE doubles, so serialized numbers regenerate bit-identical values.
std::string format_double(double value);

/// Compact recipe {ensemble, M, N, seed} from which the matrix regenerates
/// bit-identically.
nlohmann::json matrix_descriptor(const MeasurementMatrix& matrix);

/// Regenerates the matrix named by a descriptor. Throws DimensionError on
/// missing or ill-typed fields.
MeasurementMatrix matrix_from_descriptor(const nlohmann::json& descriptor);

/// Raw entry dump, header `m,n,re,im`, one row per entry in row-major
/// scan order. Indices are 0-based unless one_based.
void write_matrix_csv(std::ostream& out, const MeasurementMatrix& matrix,
                      bool one_based = false);

/// Signal as JSON: dimension, support indices, and coefficients as
/// [re, im] pairs. Indices are 0-based unless one_based.
nlohmann::json signal_to_json(const SparseSignal& signal, bool one_based = false);

/// Trace as JSON: {selected, residual_norms, greedy_ratios}. Selected
/// indices are 0-based unless one_based; ratios recorded as +inf are
/// serialized as the string "inf" (JSON has no infinity literal).
nlohmann::json trace_to_json(const OmpTrace& trace, bool one_based = false);

/// Sweep rows as CSV with header
/// `m,trials,successes,error_rate,ci_low,ci_high,ensemble`.
void write_sweep_csv(std::ostream& out, const std::vector<TrialBatchResult>& rows,
                     Ensemble ensemble);

nlohmann::json sweep_to_json(const std::vector<TrialBatchResult>& rows,
                             Ensemble ensemble);

/// Bound-check grid as CSV: one row per delta, header
/// `delta,empirical,bound_g{g1},bound_g{g2},...` with one bound column per
/// g value. Points must come from a full (delta x g) grid in the order
/// verify_tail_bound / verify_coherence_cdf emit.
void write_bound_check_csv(std::ostream& out,
                           const std::vector<BoundCheckPoint>& points,
                           std::size_t g_count);

nlohmann::json bound_check_to_json(const std::vector<BoundCheckPoint>& points);

nlohmann::json moment_table_to_json(const std::vector<MomentRow>& rows);

/// Writes content to path atomically: a sibling temporary file is written
/// and renamed over the target, so readers never observe a partial file.
/// Throws std::runtime_error naming the path on any I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace ompsd

#endif  // OMPSD_SERIALIZE_HPP
