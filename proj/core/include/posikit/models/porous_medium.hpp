#pragma once

#include <array>

#include "posikit/stepper.hpp"

namespace posikit {

/// Extrapolated state for lagged coefficients: 2u^n - u^{n-1} where the
/// solution grows, the harmonic form 1 / (2/u^n - 1/u^{n-1}) where it
/// decays, and 0 where u^n <= 1e-14. Rejects negative inputs.
Field extrapolate_star(const Field& u_now, const Field& u_prev, const Grid& g);
double extrapolate_star(double u_now, double u_prev);

/// Barenblatt profile of u_t = Delta u^m, shifted so that t0 = t + 1:
/// t0^-a (C - a (m-1)/(2m) |x|^2 / t0^(2a))_+^(1/(m-1)), a = 1/(m+1).
/// `r2` is |x|^2. Requires m > 1.
double barenblatt(double r2, double t, double m, double C);

/// u_t = Delta u^m on (-5, 5)^d with homogeneous Dirichlet data and the
/// Barenblatt profile as initial condition. The lagged operator is
/// -div(m (u*)^(m-1) grad .).
class PorousMediumModel : public Model {
 public:
  struct Params {
    double m = 2.0;
    double C = 1.0;
    int dim = 1;
    int n = 128;
    double half_width = 5.0;
  };

  explicit PorousMediumModel(Params params);

  const Params& params() const noexcept { return params_; }
  const GridPtr& grid() const override { return grid_; }
  Field initial_condition() const override;
  LinearOperator linear_operator(const History& hist, int order) const override;
  std::optional<Field> exact_solution(double t) const override;

 private:
  Params params_;
  GridPtr grid_;
};

/// Lagged PME operator: c = m (u*)^(m-1), u* from `extrapolate_star` when two
/// levels are available and u^n otherwise.
LinearOperator pme_operator(const History& hist, int order, double m, const GridPtr& grid);

}  // namespace posikit
