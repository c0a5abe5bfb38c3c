#ifndef OMPSD_ERRORS_HPP
#define OMPSD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ompsd {

/// Incompatible or invalid matrix/vector dimensions.
struct DimensionError : std::invalid_argument {
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Parameter outside the domain of a closed-form expression (g <= 2,
/// eps outside (0,1), Lambert argument outside (-1/e, 0), ...).
struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Least-squares column block is numerically rank deficient.
struct RankDeficientError : std::runtime_error {
  explicit RankDeficientError(const std::string& what) : std::runtime_error(what) {}
};

/// Greedy ratio denominator vanished; the ratio is undefined.
struct DegenerateRatioError : std::runtime_error {
  explicit DegenerateRatioError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ompsd

#endif  // OMPSD_ERRORS_HPP
