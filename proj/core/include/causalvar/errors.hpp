#pragma once

#include <stdexcept>
#include <string>

namespace causalvar {

// Base type so callers can catch everything from this library at once.
struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid inputs or requests outside a function's domain, e.g. asking for the
// long-run matrix of an unstable process, negative forcing strength, malformed
// model files, bad dimensions.
struct domain_error : error {
  explicit domain_error(const std::string& msg) : error(msg) {}
};

// Data file problems: missing columns, non-numeric cells, gaps in the time
// index. Messages carry the offending row where known.
struct parse_error : error {
  explicit parse_error(const std::string& msg) : error(msg) {}
};

// Numerical breakdown at runtime: overflow during simulation, eigensolver
// failure, singular solve where the inputs looked plausible.
struct numerical_error : error {
  explicit numerical_error(const std::string& msg) : error(msg) {}
};

}  // namespace causalvar
