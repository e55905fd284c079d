#include "posikit/grid.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "posikit/error.hpp"
#include "posikit/transform.hpp"

namespace posikit {

namespace {

std::atomic<GridId> next_grid_id{1};

// Lumped weights along one axis, over the stored nodes.
std::vector<double> axis_weights(const AxisSpec& spec, int points, double h) {
  std::vector<double> w(static_cast<std::size_t>(points), h);
  switch (spec.bc) {
    case Boundary::periodic:
      break;
    case Boundary::dirichlet:
      w.front() = 0.0;
      w.back() = 0.0;
      break;
    case Boundary::neumann:
      w.front() = 0.5 * h;
      w.back() = 0.5 * h;
      break;
  }
  return w;
}

}  // namespace

std::string_view to_string(Boundary bc) {
  switch (bc) {
    case Boundary::periodic:
      return "periodic";
    case Boundary::dirichlet:
      return "dirichlet";
    case Boundary::neumann:
      return "neumann";
  }
  return "unknown";
}

Boundary parse_boundary(std::string_view text) {
  if (text == "periodic") return Boundary::periodic;
  if (text == "dirichlet") return Boundary::dirichlet;
  if (text == "neumann") return Boundary::neumann;
  throw InvalidArgument("unknown boundary condition '" + std::string(text) + "'");
}

std::shared_ptr<const Grid> Grid::build(std::vector<AxisSpec> axes) {
  if (axes.empty() || axes.size() > 2) {
    throw InvalidArgument("grid dimension must be 1 or 2");
  }
  std::shared_ptr<Grid> g(new Grid());
  g->id_ = next_grid_id.fetch_add(1);
  g->measure_ = 1.0;

  std::vector<std::vector<double>> per_axis;
  for (const AxisSpec& spec : axes) {
    if (!(spec.upper > spec.lower) || !std::isfinite(spec.upper - spec.lower)) {
      throw InvalidArgument("axis extent must be positive");
    }
    if (spec.intervals < 4) {
      throw InvalidArgument("axis count must be at least 4");
    }
    const double h = (spec.upper - spec.lower) / spec.intervals;
    const int points = spec.bc == Boundary::periodic ? spec.intervals : spec.intervals + 1;
    g->points_.push_back(points);
    g->spacing_.push_back(h);
    g->measure_ *= spec.upper - spec.lower;
    per_axis.push_back(axis_weights(spec, points, h));
  }
  g->axes_ = std::move(axes);

  const std::size_t nx = static_cast<std::size_t>(g->points_[0]);
  const std::size_t ny = g->dim() == 2 ? static_cast<std::size_t>(g->points_[1]) : 1;
  g->weights_.resize(nx * ny);
  g->active_.resize(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    const double wy = g->dim() == 2 ? per_axis[1][j] : 1.0;
    for (std::size_t i = 0; i < nx; ++i) {
      const double w = per_axis[0][i] * wy;
      g->weights_[j * nx + i] = w;
      g->active_[j * nx + i] = w > 0.0 ? 1 : 0;
      g->active_count_ += w > 0.0 ? 1 : 0;
    }
  }

  for (int a = 0; a < g->dim(); ++a) {
    g->transforms_.push_back(std::make_unique<AxisTransform>(g->axes_[static_cast<std::size_t>(a)],
                                                             g->points_[static_cast<std::size_t>(a)]));
  }
  return g;
}

Grid::~Grid() = default;

double Grid::coordinate(std::size_t index, int a) const {
  const std::size_t nx = static_cast<std::size_t>(points_[0]);
  const std::size_t i = a == 0 ? index % nx : index / nx;
  return axes_[static_cast<std::size_t>(a)].lower + static_cast<double>(i) * spacing_[static_cast<std::size_t>(a)];
}

std::array<double, 2> Grid::point(std::size_t index) const {
  return {coordinate(index, 0), dim() == 2 ? coordinate(index, 1) : 0.0};
}

bool Grid::all_periodic() const {
  for (const AxisSpec& spec : axes_) {
    if (spec.bc != Boundary::periodic) return false;
  }
  return true;
}

}  // namespace posikit
