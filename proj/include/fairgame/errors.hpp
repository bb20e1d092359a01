#pragma once

#include <stdexcept>
#include <string>

namespace fairgame {

// Error taxonomy shared by the library and the CLI. The CLI maps each class to
// a distinct process exit code (see tools/).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

struct SizeCapError : std::runtime_error {
  explicit SizeCapError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when the simplex kernel cannot pick a pivot reliably (all candidate
// pivots below the stability threshold).
struct NumericalBreakdown : std::runtime_error {
  explicit NumericalBreakdown(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fairgame
