#include "posikit/models/allen_cahn.hpp"

#include <cmath>
#include <numbers>

#include "posikit/error.hpp"

namespace posikit {

AllenCahnModel::AllenCahnModel(Params params) : params_(params) {
  if (!(params_.eps2 > 0.0)) throw InvalidArgument("Allen-Cahn eps^2 must be positive");
  if (params_.dim != 1 && params_.dim != 2) throw InvalidArgument("Allen-Cahn dim must be 1 or 2");
  const AxisSpec axis{0.0, 2.0 * std::numbers::pi, params_.n, Boundary::periodic};
  grid_ = Grid::build(std::vector<AxisSpec>(static_cast<std::size_t>(params_.dim), axis));
}

Field AllenCahnModel::initial_condition() const {
  const double eps = std::sqrt(params_.eps2);
  const double pi = std::numbers::pi;
  const bool two_d = params_.dim == 2;
  return Field::sample(*grid_, [=](double x, double y) {
    const double r = two_d ? std::hypot(x - pi, y - pi) : std::abs(x - pi);
    return 0.5 * (1.0 + std::tanh((1.0 - r) / (std::numbers::sqrt2 * eps)));
  });
}

LinearOperator AllenCahnModel::linear_operator(const History& /*hist*/, int /*order*/) const {
  return LinearOperator::laplacian(grid_);
}

std::optional<Field> AllenCahnModel::explicit_source(const History& hist, int order) const {
  return allen_cahn_explicit_source(hist, order, params_.eps2, *grid_);
}

Field allen_cahn_explicit_source(const History& hist, int order, double eps2, const Grid& g) {
  Field star = hist.u(0);
  if (order >= 2 && hist.depth() >= 2) {
    star *= 2.0;
    star -= hist.u(1);
  }
  Field out(g);
  for (std::size_t z = 0; z < out.size(); ++z) {
    if (!g.is_active(z)) continue;
    const double u = star[z];
    out[z] = -u * (u - 1.0) * (u - 0.5) / eps2;
  }
  return out;
}

}  // namespace posikit
