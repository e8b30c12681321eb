#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mdsep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown wire, box or type identifier.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Interface lengths or types do not line up (composition, kernel legs).
class InterfaceError : public Error {
 public:
  using Error::Error;
};

// Kernel shapes do not match (finite cardinalities or Gaussian dimensions).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A diagram fails to be a causal model, or a model lacks the shape an
// operation requires (e.g. an underlying DAG).
class ModelError : public Error {
 public:
  using Error::Error;
};

class QueryError : public Error {
 public:
  using Error::Error;
};

// Carries the full list of violations found while building a value.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace mdsep
