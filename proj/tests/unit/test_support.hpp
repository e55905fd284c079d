#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "posikit/field.hpp"
#include "posikit/grid.hpp"

namespace posikit::testing {

inline GridPtr periodic_1d(int n, double a = 0.0, double b = 2.0 * std::numbers::pi) {
  return Grid::build({AxisSpec{a, b, n, Boundary::periodic}});
}

inline GridPtr bounded_1d(int n, double a, double b, Boundary bc) {
  return Grid::build({AxisSpec{a, b, n, bc}});
}

inline Field random_field(const Grid& g, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Field f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.is_active(i)) f[i] = dist(rng);
  }
  return f;
}

// Indices of the collocation set.
inline std::vector<std::size_t> active_indices(const Grid& g) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.is_active(i)) idx.push_back(i);
  }
  return idx;
}

// Dense matrix of a linear map restricted to the collocation set.
inline Eigen::MatrixXd assemble(const Grid& g, const std::function<Field(const Field&)>& op) {
  const auto idx = active_indices(g);
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Field e(g);
    e[idx[static_cast<std::size_t>(j)]] = 1.0;
    const Field col = op(e);
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = col[idx[static_cast<std::size_t>(i)]];
  }
  return m;
}

inline Eigen::VectorXd weight_vector(const Grid& g) {
  const auto idx = active_indices(g);
  Eigen::VectorXd w(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) w(static_cast<Eigen::Index>(i)) = g.weights()[idx[i]];
  return w;
}

inline Eigen::VectorXd to_vector(const Field& f, const Grid& g) {
  const auto idx = active_indices(g);
  Eigen::VectorXd v(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) v(static_cast<Eigen::Index>(i)) = f[idx[i]];
  return v;
}

inline Field from_vector(const Eigen::VectorXd& v, const Grid& g) {
  const auto idx = active_indices(g);
  Field f(g);
  for (std::size_t i = 0; i < idx.size(); ++i) f[idx[i]] = v(static_cast<Eigen::Index>(i));
  return f;
}

// Periodic second-derivative matrix built from the explicit DFT sum
// (independent of the FFT path).
inline Eigen::MatrixXd dft_second_derivative(int n, double length) {
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(n, n);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int m = -n / 2; m <= n / 2; ++m) {
        // Nyquist mode split evenly so the matrix stays real and symmetric.
        double weight = (n % 2 == 0 && std::abs(m) == n / 2) ? 0.5 : 1.0;
        const double k = two_pi * m / length;
        s += weight * (-k * k) * std::cos(two_pi * m * (i - j) / n);
      }
      d2(i, j) = s / n;
    }
  }
  return d2;
}

}  // namespace posikit::testing
