#include "ompsd/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "ompsd/errors.hpp"

namespace ompsd {
namespace {

using nlohmann::json;

std::int64_t require_int_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw DimensionError(std::string("descriptor field missing or non-integer: ") + key);
  }
  return j[key].get<std::int64_t>();
}

// +inf greedy ratios (degenerate denominator) have no JSON literal; they
// travel as the string "inf".
json ratio_to_json(double ratio) {
  if (std::isinf(ratio)) {
    return json("inf");
  }
  return json(ratio);
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

json matrix_descriptor(const MeasurementMatrix& matrix) {
  return json{{"ensemble", to_string(matrix.ensemble)},
              {"M", matrix.rows()},
              {"N", matrix.cols()},
              {"seed", matrix.seed}};
}

MeasurementMatrix matrix_from_descriptor(const json& descriptor) {
  if (!descriptor.contains("ensemble") || !descriptor["ensemble"].is_string()) {
    throw DimensionError("descriptor field missing or non-string: ensemble");
  }
  const Ensemble ensemble = ensemble_from_string(descriptor["ensemble"].get<std::string>());
  const std::int64_t rows = require_int_field(descriptor, "M");
  const std::int64_t cols = require_int_field(descriptor, "N");
  if (!descriptor.contains("seed") || !descriptor["seed"].is_number()) {
    throw DimensionError("descriptor field missing or non-numeric: seed");
  }
  const std::uint64_t seed = descriptor["seed"].get<std::uint64_t>();
  return generate_matrix(ensemble, rows, cols, seed);
}

void write_matrix_csv(std::ostream& out, const MeasurementMatrix& matrix,
                      bool one_based) {
  const Index base = one_based ? 1 : 0;
  out << "m,n,re,im\n";
  for (Index r = 0; r < matrix.rows(); ++r) {
    for (Index c = 0; c < matrix.cols(); ++c) {
      const Complex& entry = matrix.entries(r, c);
      out << (r + base) << ',' << (c + base) << ','
          << format_double(entry.real()) << ',' << format_double(entry.imag())
          << '\n';
    }
  }
}

json signal_to_json(const SparseSignal& signal, bool one_based) {
  const Index base = one_based ? 1 : 0;
  json support = json::array();
  for (const Index idx : signal.support) {
    support.push_back(idx + base);
  }
  json values = json::array();
  for (Index i = 0; i < signal.values.size(); ++i) {
    values.push_back({signal.values(i).real(), signal.values(i).imag()});
  }
  return json{{"N", signal.dim}, {"support", support}, {"values", values}};
}

json trace_to_json(const OmpTrace& trace, bool one_based) {
  const Index base = one_based ? 1 : 0;
  json selected = json::array();
  for (const Index idx : trace.selected) {
    selected.push_back(idx + base);
  }
  json ratios = json::array();
  for (const double ratio : trace.greedy_ratios) {
    ratios.push_back(ratio_to_json(ratio));
  }
  return json{{"selected", selected},
              {"residual_norms", trace.residual_norms},
              {"greedy_ratios", ratios}};
}

void write_sweep_csv(std::ostream& out, const std::vector<TrialBatchResult>& rows,
                     Ensemble ensemble) {
  const char* name = to_string(ensemble);
  out << "m,trials,successes,error_rate,ci_low,ci_high,ensemble\n";
  for (const TrialBatchResult& row : rows) {
    out << row.m << ',' << row.trials << ',' << row.successes << ','
        << format_double(row.error_rate) << ',' << format_double(row.ci_low)
        << ',' << format_double(row.ci_high) << ',' << name << '\n';
  }
}

json sweep_to_json(const std::vector<TrialBatchResult>& rows, Ensemble ensemble) {
  json out_rows = json::array();
  for (const TrialBatchResult& row : rows) {
    out_rows.push_back({{"m", row.m},
                        {"trials", row.trials},
                        {"successes", row.successes},
                        {"solver_errors", row.solver_errors},
                        {"error_rate", row.error_rate},
                        {"ci_low", row.ci_low},
                        {"ci_high", row.ci_high}});
  }
  return json{{"ensemble", to_string(ensemble)}, {"rows", out_rows}};
}

void write_bound_check_csv(std::ostream& out,
                           const std::vector<BoundCheckPoint>& points,
                           std::size_t g_count) {
  if (g_count == 0 || points.size() % g_count != 0) {
    throw DimensionError("bound-check CSV needs a full delta x g grid");
  }
  out << "delta,empirical";
  for (std::size_t j = 0; j < g_count; ++j) {
    char label[32];
    std::snprintf(label, sizeof(label), "%g", points[j].g);
    out << ",bound_g" << label;
  }
  out << '\n';
  for (std::size_t i = 0; i < points.size(); i += g_count) {
    out << format_double(points[i].delta) << ',' << format_double(points[i].empirical);
    for (std::size_t j = 0; j < g_count; ++j) {
      out << ',' << format_double(points[i + j].bound);
    }
    out << '\n';
  }
}

json bound_check_to_json(const std::vector<BoundCheckPoint>& points) {
  json out = json::array();
  for (const BoundCheckPoint& point : points) {
    out.push_back({{"delta", point.delta},
                   {"g", point.g},
                   {"empirical", point.empirical},
                   {"bound", point.bound},
                   {"sigma", point.sigma},
                   {"ok", point.ok}});
  }
  return out;
}

json moment_table_to_json(const std::vector<MomentRow>& rows) {
  json out = json::array();
  for (const MomentRow& row : rows) {
    out.push_back({{"k", row.k},
                   {"phase_moment", row.phase_moment},
                   {"phase_stderr", row.phase_stderr},
                   {"bernoulli_moment", row.bernoulli_moment},
                   {"bernoulli_stderr", row.bernoulli_stderr},
                   {"bernoulli_exact", row.bernoulli_exact},
                   {"verdict", to_string(row.verdict)}});
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open for writing: " + tmp);
    }
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw std::runtime_error("write failed: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

}  // namespace ompsd
