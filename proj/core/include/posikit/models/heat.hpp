#pragma once

#include <functional>

#include "posikit/stepper.hpp"

namespace posikit {

/// u_t - Delta u = 0 with user-supplied initial data. The simplest
/// conservative SPD model; used by the surrogate convergence study and tests.
class HeatModel : public Model {
 public:
  HeatModel(GridPtr grid, std::function<double(double, double)> initial,
            std::function<Field(double)> exact = {});

  const GridPtr& grid() const override { return grid_; }
  Field initial_condition() const override;
  LinearOperator linear_operator(const History& hist, int order) const override;
  std::optional<Field> exact_solution(double t) const override;

 private:
  GridPtr grid_;
  std::function<double(double, double)> initial_;
  std::function<Field(double)> exact_;
};

}  // namespace posikit
