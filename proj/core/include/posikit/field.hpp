#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "posikit/grid.hpp"

namespace posikit {

/// Nodal values over every stored node of a grid. Values at Dirichlet
/// (excluded) nodes are kept at zero.
class Field {
 public:
  Field() = default;
  explicit Field(const Grid& grid, double fill = 0.0);
  Field(const Grid& grid, std::vector<double> values);

  /// Samples `fn(x, y)` at every node; excluded nodes are set to zero.
  static Field sample(const Grid& grid, const std::function<double(double, double)>& fn);

  GridId grid_id() const noexcept { return grid_id_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& raw() noexcept { return values_; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

  /// this += s * x
  Field& axpy(double s, const Field& x);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  GridId grid_id_ = 0;
  std::vector<double> values_;
};

void require_same_grid(const Field& u, const Grid& g);
void require_same_grid(const Field& u, const Field& v);

/// Zeroes the values at excluded nodes.
void pin_excluded(Field& u, const Grid& g);

/// Discrete inner product [u, v] = sum over the collocation set of w_z u(z) v(z).
double inner(const Field& u, const Field& v, const Grid& g);
double norm(const Field& u, const Grid& g);
double norm_squared(const Field& u, const Grid& g);
/// [u, 1] over the collocation set.
double mass(const Field& u, const Grid& g);

double min_active(const Field& u, const Grid& g);
double max_active(const Field& u, const Grid& g);
double max_abs_active(const Field& u, const Grid& g);

/// Snapshot text format: header `nx [ny] t`, then one value per line.
void write_snapshot(std::ostream& out, const Field& u, const Grid& g, double t);
struct Snapshot {
  std::vector<int> shape;
  double time = 0.0;
  std::vector<double> values;
};
Snapshot read_snapshot(std::istream& in);

}  // namespace posikit
