#pragma once

#include <stdexcept>
#include <string>

namespace seba {

// Two failure families, kept apart so the CLI can map them to distinct exit
// codes: parameter errors are caller mistakes (bad ranges, missing
// preconditions), numerical errors are solver-side (pole proximity, bracket
// failures, budget overruns).
struct parameter_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct numerical_error : std::runtime_error {
  long index;  // offending gap or line index, -1 when not applicable
  explicit numerical_error(const std::string& what, long idx = -1)
      : std::runtime_error(what), index(idx) {}
};

}  // namespace seba
