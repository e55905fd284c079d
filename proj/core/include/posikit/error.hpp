#pragma once

#include <stdexcept>
#include <string>

namespace posikit {

/// Invalid input to a library call (bad grid spec, mismatched fields, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its tolerance.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Secant/bracketing failure for the mass multiplier; carries the best iterate.
class SecantFailure : public NumericalFailure {
 public:
  SecantFailure(const std::string& what, double best_xi, double best_residual)
      : NumericalFailure(what), best_xi_(best_xi), best_residual_(best_residual) {}

  double best_xi() const noexcept { return best_xi_; }
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_xi_;
  double best_residual_;
};

}  // namespace posikit
