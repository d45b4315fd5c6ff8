// Exception types that map onto the CLI exit-code contract:
// spec_error -> 2 (bad specification/arguments), numeric_error -> 3.
#pragma once

#include <stdexcept>
#include <string>

namespace possim {

// A model spec, hypothesis string, grid, or configuration is malformed.
struct spec_error : std::invalid_argument {
  explicit spec_error(const std::string& what) : std::invalid_argument(what) {}
};

// A computation failed numerically (degenerate normalizer, enumeration blow-up).
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace possim
