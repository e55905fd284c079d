#include "posikit/models/porous_medium.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "posikit/error.hpp"

namespace posikit {

namespace {

constexpr double kVanishing = 1e-14;

}  // namespace

double extrapolate_star(double u_now, double u_prev) {
  if (u_now < 0.0 || u_prev < 0.0) {
    throw InvalidArgument(fmt::format("extrapolation needs nonnegative values ({}, {})", u_now,
                                      u_prev));
  }
  if (u_now >= u_prev) return 2.0 * u_now - u_prev;
  if (u_now <= kVanishing) return 0.0;
  return 1.0 / (2.0 / u_now - 1.0 / u_prev);
}

Field extrapolate_star(const Field& u_now, const Field& u_prev, const Grid& g) {
  require_same_grid(u_now, g);
  require_same_grid(u_prev, g);
  std::vector<double> out(u_now.size());
  for (std::size_t z = 0; z < out.size(); ++z) out[z] = extrapolate_star(u_now[z], u_prev[z]);
  return Field(g, std::move(out));
}

double barenblatt(double r2, double t, double m, double C) {
  if (!(m > 1.0)) throw InvalidArgument("Barenblatt profile needs m > 1");
  const double a = 1.0 / (m + 1.0);
  const double t0 = t + 1.0;
  const double core = C - a * (m - 1.0) / (2.0 * m) * r2 / std::pow(t0, 2.0 * a);
  if (core <= 0.0) return 0.0;
  return std::pow(t0, -a) * std::pow(core, 1.0 / (m - 1.0));
}

PorousMediumModel::PorousMediumModel(Params params) : params_(params) {
  if (!(params_.m >= 1.0)) throw InvalidArgument("PME exponent m must be >= 1");
  if (params_.dim != 1 && params_.dim != 2) throw InvalidArgument("PME dim must be 1 or 2");
  const AxisSpec axis{-params_.half_width, params_.half_width, params_.n, Boundary::dirichlet};
  grid_ = Grid::build(std::vector<AxisSpec>(static_cast<std::size_t>(params_.dim), axis));
}

Field PorousMediumModel::initial_condition() const {
  const double m = params_.m;
  const double C = params_.C;
  return Field::sample(*grid_, [=](double x, double y) { return barenblatt(x * x + y * y, 0.0, m, C); });
}

LinearOperator PorousMediumModel::linear_operator(const History& hist, int order) const {
  return pme_operator(hist, order, params_.m, grid_);
}

std::optional<Field> PorousMediumModel::exact_solution(double t) const {
  if (params_.m <= 1.0) return std::nullopt;
  const double m = params_.m;
  const double C = params_.C;
  return Field::sample(*grid_, [=](double x, double y) { return barenblatt(x * x + y * y, t, m, C); });
}

LinearOperator pme_operator(const History& hist, int order, double m, const GridPtr& grid) {
  const Grid& g = *grid;
  // Uncorrected runs can go negative; the coefficient sees the nonnegative part.
  auto clip = [&](const Field& u) {
    std::vector<double> v(u.values().begin(), u.values().end());
    for (double& x : v) x = std::max(x, 0.0);
    return Field(g, std::move(v));
  };
  Field star = order >= 2 && hist.depth() >= 2
                   ? extrapolate_star(clip(hist.u(0)), clip(hist.u(1)), g)
                   : clip(hist.u(0));
  std::vector<double> c(star.size());
  for (std::size_t z = 0; z < c.size(); ++z) c[z] = m * std::pow(star[z], m - 1.0);
  return LinearOperator::div_coeff_grad(grid, Field(g, std::move(c)));
}

}  // namespace posikit
