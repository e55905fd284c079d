#pragma once

#include <optional>
#include <string_view>

#include "posikit/field.hpp"
#include "posikit/grid.hpp"

namespace posikit {

/// Returns Delta u. Periodic axes use Fourier differentiation, Dirichlet and
/// Neumann axes the lumped linear-element second difference.
Field apply_laplacian(const Field& u, const Grid& g);

/// Returns the nodal representation of -div(c grad u) (positive semidefinite
/// direction). Non-periodic axes use the edge form sum_e c_e (du)(dv)/h with
/// c_e the arithmetic mean of the endpoint values; periodic axes use -D(c D u)
/// with D the spectral first derivative. Rejects negative coefficients.
/// Edges touching a Dirichlet node use the coefficient stored there.
Field apply_div_coeff_grad(const Field& c, const Field& u, const Grid& g);

/// Same assembly as `apply_div_coeff_grad` without the sign check on `c`;
/// used for explicit drift terms whose coefficient may change sign.
Field apply_flux_divergence(const Field& c, const Field& u, const Grid& g);

/// Returns div(c grad Delta u) (periodic grids only). For c == 1 this is the
/// bi-Laplacian.
Field apply_lubrication(const Field& c, const Field& u, const Grid& g);

struct SolverSettings {
  double tolerance = 1e-10;
  int max_iterations = 500;
  int restart = 60;
};

struct SolverReport {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

enum class OperatorKind { laplacian, div_coeff_grad, lubrication };
std::string_view to_string(OperatorKind kind);

/// L in u_t + L u = 0, bound to a grid. For `laplacian` L = -Delta; for
/// `div_coeff_grad` L = -div(c grad .); for `lubrication` L = div(c grad Delta .).
class LinearOperator {
 public:
  static LinearOperator laplacian(GridPtr grid);
  static LinearOperator div_coeff_grad(GridPtr grid, Field coefficient);
  static LinearOperator lubrication(GridPtr grid, Field coefficient);

  OperatorKind kind() const noexcept { return kind_; }
  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const std::optional<Field>& coefficient() const noexcept { return coefficient_; }

  Field apply(const Field& u) const;

  /// Solves (sigma I + L) u = rhs. Constant-coefficient problems are
  /// diagonalized directly; variable coefficients use preconditioned
  /// CG (symmetric kinds) or GMRES (lubrication), preconditioned by the
  /// constant-coefficient operator with the mean coefficient.
  std::pair<Field, SolverReport> solve_shifted(double sigma, const Field& rhs,
                                               const SolverSettings& settings = {}) const;

  /// Mean of the coefficient over the collocation set (1 for the Laplacian).
  double mean_coefficient() const noexcept { return mean_coefficient_; }
  bool constant_coefficient() const noexcept { return constant_; }

 private:
  LinearOperator(OperatorKind kind, GridPtr grid, std::optional<Field> coefficient);

  Field apply_constant_inverse(double sigma, double scale, const Field& rhs) const;

  OperatorKind kind_;
  GridPtr grid_;
  std::optional<Field> coefficient_;
  double mean_coefficient_ = 1.0;
  bool constant_ = true;
};

/// Free-function form of `LinearOperator::solve_shifted`.
std::pair<Field, SolverReport> solve_shifted(double sigma, const LinearOperator& op,
                                             const Field& rhs,
                                             const SolverSettings& settings = {});

/// Solves (sigma I + c div grad Delta) u = rhs for periodic grids.
std::pair<Field, SolverReport> solve_lubrication_shifted(double sigma, const Field& c,
                                                         const Field& rhs, GridPtr grid,
                                                         const SolverSettings& settings = {});

/// Solves scale * (-Delta) u = rhs on a pure Neumann or periodic grid with the
/// mean-zero gauge ([u, 1] = 0). Throws if [rhs, 1] is not (numerically) zero.
Field solve_poisson_mean_zero(const Field& rhs, const Grid& g, double scale = 1.0,
                              double compatibility_tolerance = 1e-9);

}  // namespace posikit
