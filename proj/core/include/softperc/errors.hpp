#pragma once

#include <stdexcept>
#include <string>

namespace softperc {

/// Mismatched vector or dataset dimensions.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Invalid argument values: non-finite inputs, bad configuration, infeasible
/// generator specs.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed input files (CSV datasets, model files).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace softperc
