#pragma once

#include "posikit/correction.hpp"
#include "posikit/history.hpp"
#include "posikit/operators.hpp"

namespace posikit {

/// Poisson-Nernst-Planck system on (-1, 1)^d with homogeneous Neumann data:
///
///   -eps^2 Delta phi = p - n,  p_t = div(grad p + p grad phi),  n_t = div(grad n - n grad phi).
///
/// Each species is advanced with the mass-conserving multiplier scheme (its own
/// lambda, xi pair); diffusion is implicit and the drift explicit with
/// extrapolated p*, phi*. phi is then recovered with the mean-zero gauge.
class PnpModel {
 public:
  enum class PotentialInit { poisson, disc };

  struct Params {
    double debye = 0.1;
    int n = 64;
    int dim = 2;
    /// `poisson`: phi^0 solves the Poisson equation for p^0 - n^0.
    /// `disc`: phi^0 = (x - 0.5)^2 (y - 0.5)^2 inside the disc, else 0.
    PotentialInit potential_init = PotentialInit::poisson;
  };

  explicit PnpModel(Params params);

  const Params& params() const noexcept { return params_; }
  const GridPtr& grid() const noexcept { return grid_; }

  /// Indicator of x^2 + y^2 <= 0.25 (both species).
  Field initial_species() const;
  Field initial_potential(const Field& p0, const Field& n0) const;

  /// Solves eps^2 (-Delta) phi = p - n with [phi, 1] = 0.
  Field solve_potential(const Field& p, const Field& n) const;

 private:
  Params params_;
  GridPtr grid_;
};

struct PnpState {
  History p;
  History n;
  /// Potentials, newest first (two levels kept for extrapolation).
  Field phi;
  Field phi_prev;
  bool has_prev_phi = false;
};

struct PnpStepOptions {
  int order = 2;
  double dt = 1e-3;
  SolverSettings solver{};
  SecantSettings secant{};
};

struct PnpStepResult {
  CorrectionOutcome p;
  CorrectionOutcome n;
  double time = 0.0;
};

PnpState pnp_initial_state(const PnpModel& model, int order);
PnpState pnp_initial_state(const PnpModel& model, int order, Field p0, Field n0);

/// Advances both species and the potential by one step.
PnpStepResult pnp_step(PnpState& state, const PnpModel& model, const PnpStepOptions& options);

}  // namespace posikit
