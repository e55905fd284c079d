#pragma once

#include "posikit/stepper.hpp"

namespace posikit {

/// u_t - Delta u + g(u) / eps^2 = 0, g(u) = u (u - 1) (u - 1/2), on a periodic
/// square. The Laplacian is implicit and the nonlinearity explicit.
class AllenCahnModel : public Model {
 public:
  struct Params {
    double eps2 = 0.001;
    int n = 32;
    int dim = 2;
  };

  explicit AllenCahnModel(Params params);

  const Params& params() const noexcept { return params_; }
  const GridPtr& grid() const override { return grid_; }

  /// 1/2 (1 + tanh((1 - |x - (pi, pi)|) / (sqrt(2) eps))).
  Field initial_condition() const override;
  LinearOperator linear_operator(const History& hist, int order) const override;
  std::optional<Field> explicit_source(const History& hist, int order) const override;

 private:
  Params params_;
  GridPtr grid_;
};

/// -(1/eps^2) g(u*) with u* = u^n (k = 1) or 2u^n - u^{n-1} (k >= 2).
Field allen_cahn_explicit_source(const History& hist, int order, double eps2, const Grid& g);

}  // namespace posikit
