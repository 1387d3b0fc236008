#pragma once
#include <stdexcept>
#include <string>

namespace pinwheel {

// Exit-code families: parameter/config errors map to 2, numerical failures to 3.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SymmetryMismatch : ParameterError {
  using ParameterError::ParameterError;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleProjection : NumericalError {
  int component;
  InfeasibleProjection(const std::string& what, int comp)
      : NumericalError(what), component(comp) {}
};

}  // namespace pinwheel
