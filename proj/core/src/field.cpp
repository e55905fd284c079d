#include "posikit/field.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "posikit/error.hpp"

namespace posikit {

Field::Field(const Grid& grid, double fill) : grid_id_(grid.id()), values_(grid.size(), fill) {
  pin_excluded(*this, grid);
}

Field::Field(const Grid& grid, std::vector<double> values)
    : grid_id_(grid.id()), values_(std::move(values)) {
  if (values_.size() != grid.size()) {
    throw InvalidArgument(fmt::format("field has {} values but grid has {} nodes", values_.size(),
                                      grid.size()));
  }
}

Field Field::sample(const Grid& grid, const std::function<double(double, double)>& fn) {
  Field f(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.is_active(i)) continue;
    const auto p = grid.point(i);
    f.values_[i] = fn(p[0], p[1]);
  }
  return f;
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Field& Field::axpy(double s, const Field& x) {
  require_same_grid(*this, x);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * x.values_[i];
  return *this;
}

void require_same_grid(const Field& u, const Grid& g) {
  if (u.grid_id() != g.id() || u.size() != g.size()) {
    throw InvalidArgument("field does not belong to this grid");
  }
}

void require_same_grid(const Field& u, const Field& v) {
  if (u.grid_id() != v.grid_id() || u.size() != v.size()) {
    throw InvalidArgument("fields live on different grids");
  }
}

void pin_excluded(Field& u, const Grid& g) {
  auto active = g.active();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!active[i]) u[i] = 0.0;
  }
}

double inner(const Field& u, const Field& v, const Grid& g) {
  require_same_grid(u, g);
  require_same_grid(v, g);
  const auto w = g.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += w[i] * u[i] * v[i];
  return sum;
}

double norm_squared(const Field& u, const Grid& g) { return inner(u, u, g); }

double norm(const Field& u, const Grid& g) { return std::sqrt(inner(u, u, g)); }

double mass(const Field& u, const Grid& g) {
  require_same_grid(u, g);
  const auto w = g.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += w[i] * u[i];
  return sum;
}

double min_active(const Field& u, const Grid& g) {
  require_same_grid(u, g);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (g.is_active(i)) m = std::min(m, u[i]);
  }
  return m;
}

double max_active(const Field& u, const Grid& g) {
  require_same_grid(u, g);
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (g.is_active(i)) m = std::max(m, u[i]);
  }
  return m;
}

double max_abs_active(const Field& u, const Grid& g) {
  require_same_grid(u, g);
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (g.is_active(i)) m = std::max(m, std::abs(u[i]));
  }
  return m;
}

void write_snapshot(std::ostream& out, const Field& u, const Grid& g, double t) {
  require_same_grid(u, g);
  out << g.points(0);
  if (g.dim() == 2) out << ' ' << g.points(1);
  out << ' ' << fmt::format("{}", t) << '\n';
  for (double v : u.values()) out << fmt::format("{}", v) << '\n';
}

Snapshot read_snapshot(std::istream& in) {
  Snapshot snap;
  std::string header;
  if (!std::getline(in, header)) throw InvalidArgument("empty snapshot");
  std::istringstream hs(header);
  std::vector<double> tokens;
  double x = 0.0;
  while (hs >> x) tokens.push_back(x);
  if (tokens.size() != 2 && tokens.size() != 3) {
    throw InvalidArgument("snapshot header must be 'nx [ny] t'");
  }
  snap.time = tokens.back();
  std::size_t count = 1;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    snap.shape.push_back(static_cast<int>(tokens[i]));
    count *= static_cast<std::size_t>(tokens[i]);
  }
  snap.values.reserve(count);
  while (snap.values.size() < count && in >> x) snap.values.push_back(x);
  if (snap.values.size() != count) throw InvalidArgument("snapshot is truncated");
  return snap;
}

}  // namespace posikit
