#pragma once

#include <cstddef>
#include <functional>

#include "posikit/bdf.hpp"
#include "posikit/field.hpp"

namespace posikit {

/// Result of the pointwise correction step.
struct CorrectionOutcome {
  Field u_next;
  Field lambda_next;
  double xi_next = 0.0;
  int secant_iterations = 0;
  /// Nodes strictly clamped to the lower bound.
  std::size_t active_count = 0;
};

/// KKT correction alpha (u - u~)/dt = lambda - B(lambda), u >= lb, lambda >= 0,
/// lambda (u - lb) = 0, solved node by node. `lambda_extrapolation` is
/// B_{k-1}(lambda^n, ...) (zero field for k = 1).
CorrectionOutcome correct_positivity(const Field& u_tilde, const Field& lambda_extrapolation,
                                     const BdfTableau& tab, double dt, double lower_bound,
                                     const Grid& g);

/// Cut-off correction: u = max(u~, lb), lambda = alpha/dt * max(lb - u~, 0).
CorrectionOutcome correct_cutoff(const Field& u_tilde, const BdfTableau& tab, double dt,
                                 double lower_bound, const Grid& g);

/// Piecewise-linear mass residual of the scalar multiplier,
///
///   F(xi) = sum_{z unclamped} (u~ + eta)(z) w_z + lb * sum_{z clamped} w_z - target,
///   eta(z; xi) = dt/alpha * (xi - shift_base(z)),
///
/// where shift_base = B_{k-1}(xi^n) + B_{k-1}(lambda^n). F is continuous and
/// nondecreasing in xi.
struct MassResidual {
  const Field* u_tilde = nullptr;
  const Field* shift_base = nullptr;
  const Grid* grid = nullptr;
  double dt = 0.0;
  double alpha = 1.0;
  double target_mass = 0.0;
  double lower_bound = 0.0;

  double operator()(double xi) const;
  double shift(std::size_t node, double xi) const;
};

/// F(xi) for the given data; see `MassResidual`.
double residual_F(double xi, const Field& u_tilde, const Field& shift_base, double dt,
                  const BdfTableau& tab, double target_mass, const Grid& g, double lower_bound);

struct SecantSettings {
  double tolerance = 1e-12;
  int max_iterations = 50;
};

struct SecantResult {
  double xi = 0.0;
  int iterations = 0;
  bool used_bisection = false;
};

/// Secant iteration on a continuous nondecreasing F started from (xi0, xi1).
/// Converged when |F| <= tol * max(1, scale); a converged residual above
/// rounding level gets one extra update. A vanishing secant denominator
/// switches to bisection on a geometrically grown bracket. Throws
/// SecantFailure (with the best iterate) when max_iterations is exceeded.
SecantResult solve_xi_secant(const std::function<double(double)>& F, double xi0, double xi1,
                             const SecantSettings& settings = {}, double scale = 1.0);

/// Exact root of the piecewise-linear residual by sorting its breakpoints.
/// Throws InvalidArgument if the target lies below the floor mass lb * |Sigma|.
double solve_xi_exact(const MassResidual& F);

/// Mass-conserving correction: solves F(xi) = 0 by secant, then
/// u = max(u~ + eta, lb), lambda = alpha/dt * (lb - u~ - eta) on clamped nodes.
CorrectionOutcome correct_mass_conserving(const Field& u_tilde, const Field& shift_base,
                                          const BdfTableau& tab, double dt, double target_mass,
                                          double lower_bound, const Grid& g,
                                          const SecantSettings& settings = {});

}  // namespace posikit
