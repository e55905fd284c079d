#pragma once

#include "posikit/stepper.hpp"

namespace posikit {

/// f_eta(u) = u^4 f(u) / (eta f(u) + u^4) with f(u) = u^rho and f_eta(0) = 0.
double lubrication_f_eta(double u, double rho, double reg_eta);
Field lubrication_f_eta(const Field& u, double rho, double reg_eta, const Grid& g);

/// u_t + div(f(u) grad Delta u) = 0 on a periodic domain, f(u) = u^rho.
///
/// Exactly one regularization is active: `reg_eta` (mobility f_eta, lower
/// bound 0) or `floor_eps` (plain mobility, lower bound eps > 0).
class LubricationModel : public Model {
 public:
  enum class Regularization { reg_eta, floor_eps };

  struct Params {
    double rho = 0.5;
    Regularization mode = Regularization::floor_eps;
    double reg_eta = 0.0;
    double floor_eps = 1e-2;
    int dim = 1;
    int n = 256;
  };

  explicit LubricationModel(Params params);

  const Params& params() const noexcept { return params_; }
  const GridPtr& grid() const override { return grid_; }

  /// 1D: 0.8 - cos(pi x) + 0.25 cos(2 pi x) on (-1, 1).
  /// 2D: (x - 0.5)^2 (y - 0.5)^2 inside x^2 + y^2 <= 0.25, else 0, on (-pi, pi)^2.
  Field initial_condition() const override;
  LinearOperator linear_operator(const History& hist, int order) const override;

  /// Lower bound enforced by the correction (floor_eps or 0).
  double lower_bound() const noexcept;
  Field mobility(const Field& u) const;

 private:
  Params params_;
  GridPtr grid_;
};

LinearOperator lubrication_operator(const History& hist, int order, const LubricationModel& model);

}  // namespace posikit
