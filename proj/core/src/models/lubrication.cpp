#include "posikit/models/lubrication.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "posikit/error.hpp"
#include "posikit/models/porous_medium.hpp"

namespace posikit {

double lubrication_f_eta(double u, double rho, double reg_eta) {
  if (u <= 0.0) return 0.0;
  const double f = std::pow(u, rho);
  if (reg_eta == 0.0) return f;
  const double u4 = u * u * u * u;
  return u4 * f / (reg_eta * f + u4);
}

Field lubrication_f_eta(const Field& u, double rho, double reg_eta, const Grid& g) {
  require_same_grid(u, g);
  std::vector<double> out(u.size());
  for (std::size_t z = 0; z < out.size(); ++z) out[z] = lubrication_f_eta(u[z], rho, reg_eta);
  return Field(g, std::move(out));
}

LubricationModel::LubricationModel(Params params) : params_(params) {
  if (!(params_.rho > 0.0)) throw InvalidArgument("lubrication exponent rho must be positive");
  if (params_.dim != 1 && params_.dim != 2) throw InvalidArgument("lubrication dim must be 1 or 2");
  if (params_.mode == Regularization::reg_eta && params_.reg_eta < 0.0) {
    throw InvalidArgument("reg_eta must be nonnegative");
  }
  if (params_.mode == Regularization::floor_eps && !(params_.floor_eps > 0.0)) {
    throw InvalidArgument("floor_eps must be positive in floor mode");
  }
  const double half = params_.dim == 1 ? 1.0 : std::numbers::pi;
  const AxisSpec axis{-half, half, params_.n, Boundary::periodic};
  grid_ = Grid::build(std::vector<AxisSpec>(static_cast<std::size_t>(params_.dim), axis));
}

Field LubricationModel::initial_condition() const {
  if (params_.dim == 1) {
    return Field::sample(*grid_, [](double x, double) {
      const double pi = std::numbers::pi;
      return 0.8 - std::cos(pi * x) + 0.25 * std::cos(2.0 * pi * x);
    });
  }
  return Field::sample(*grid_, [](double x, double y) {
    if (x * x + y * y > 0.25) return 0.0;
    return (x - 0.5) * (x - 0.5) * (y - 0.5) * (y - 0.5);
  });
}

double LubricationModel::lower_bound() const noexcept {
  return params_.mode == Regularization::floor_eps ? params_.floor_eps : 0.0;
}

Field LubricationModel::mobility(const Field& u) const {
  const double eta = params_.mode == Regularization::reg_eta ? params_.reg_eta : 0.0;
  return lubrication_f_eta(u, params_.rho, eta, *grid_);
}

LinearOperator LubricationModel::linear_operator(const History& hist, int order) const {
  return lubrication_operator(hist, order, *this);
}

LinearOperator lubrication_operator(const History& hist, int order, const LubricationModel& model) {
  const Grid& g = *model.grid();
  auto clip = [&](const Field& u) {
    std::vector<double> v(u.values().begin(), u.values().end());
    for (double& x : v) x = std::max(x, 0.0);
    return Field(g, std::move(v));
  };
  const Field star = order >= 2 && hist.depth() >= 2
                         ? extrapolate_star(clip(hist.u(0)), clip(hist.u(1)), g)
                         : clip(hist.u(0));
  return LinearOperator::lubrication(model.grid(), model.mobility(star));
}

}  // namespace posikit
