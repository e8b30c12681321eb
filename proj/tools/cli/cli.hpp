#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mdsep::cli {

// Exit codes of the markov-dsep tool.
enum Exit : int {
  kOk = 0,         // valid / separated / holds
  kNegative = 1,   // invalid / connected / fails
  kUnknown = 2,    // preconditions of the decision unmet
  kError = 3,      // unreadable input or bad arguments
};

// Runs the tool on argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mdsep::cli
