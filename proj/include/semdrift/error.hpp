#pragma once

#include <stdexcept>
#include <string>

namespace semdrift {

// Bad user input: malformed files, inconsistent workspaces, contract
// violations at a public entry point. The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace semdrift
