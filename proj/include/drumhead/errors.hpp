#pragma once

#include <stdexcept>
#include <string>

namespace drumhead {

/// A numerical routine could not produce a valid result (broken mesh, indefinite
/// mass matrix, non-convergence). Contract violations use std::invalid_argument.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace drumhead
