#include "mdsep/errors.hpp"

namespace mdsep {
namespace {

std::string join_violations(const std::vector<std::string>& violations) {
  std::string out = "validation failed";
  for (const auto& v : violations) {
    out += "\n  ";
    out += v;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

}  // namespace mdsep
