#include "posikit/models/heat.hpp"

#include "posikit/error.hpp"

namespace posikit {

HeatModel::HeatModel(GridPtr grid, std::function<double(double, double)> initial,
                     std::function<Field(double)> exact)
    : grid_(std::move(grid)), initial_(std::move(initial)), exact_(std::move(exact)) {
  if (!grid_) throw InvalidArgument("heat model needs a grid");
  if (!initial_) throw InvalidArgument("heat model needs initial data");
}

Field HeatModel::initial_condition() const { return Field::sample(*grid_, initial_); }

LinearOperator HeatModel::linear_operator(const History& /*hist*/, int /*order*/) const {
  return LinearOperator::laplacian(grid_);
}

std::optional<Field> HeatModel::exact_solution(double t) const {
  if (!exact_) return std::nullopt;
  return exact_(t);
}

}  // namespace posikit
