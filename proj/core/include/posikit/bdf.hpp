#pragma once

#include <span>
#include <vector>

#include "posikit/field.hpp"

namespace posikit {

/// BDF-k coefficients with the (k-1)-th order multiplier extrapolation.
///
///   alpha_k u~ - A_k(u^n, ..., u^{n-k+1}) = ...  +  dt * B_{k-1}(lambda^n, ..., lambda^{n-k+2})
struct BdfTableau {
  int order = 1;
  double alpha = 1.0;
  /// Coefficients of A_k, newest level first.
  std::vector<double> a;
  /// Coefficients of B_{k-1}, newest level first; empty for k = 1.
  std::vector<double> b;
};

/// k in {1, 2, 3, 4}.
BdfTableau bdf_tableau(int k);

/// sum_i coeffs[i] * levels[i] over the first coeffs.size() levels.
Field combine(std::span<const double> coeffs, std::span<const Field* const> levels);
double combine(std::span<const double> coeffs, std::span<const double> levels);

}  // namespace posikit
