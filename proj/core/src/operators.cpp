#include "posikit/operators.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "posikit/error.hpp"
#include "posikit/krylov.hpp"
#include "posikit/transform.hpp"

namespace posikit {

namespace {

// Adds d^2u/dx_a^2 along axis `a` into `out`.
void add_axis_second_derivative(const Field& u, const Grid& g, int a, Field& out) {
  const AxisTransform& tr = g.transform(a);
  if (tr.bc() == Boundary::periodic) {
    std::vector<double> work(u.values().begin(), u.values().end());
    const auto symbol = tr.laplacian_symbol();
    for_each_line(g, a, work, [&](std::span<double> line) {
      tr.forward(line);
      for (std::size_t k = 0; k < line.size(); ++k) line[k] *= -symbol[k];
      tr.backward(line);
    });
    for (std::size_t i = 0; i < work.size(); ++i) out[i] += work[i];
    return;
  }
  const double inv_h2 = 1.0 / (g.spacing(a) * g.spacing(a));
  const std::size_t stride = g.stride(a);
  const int n = g.points(a);
  const bool neumann = tr.bc() == Boundary::neumann;
  for (std::size_t idx = 0; idx < u.size(); ++idx) {
    const std::size_t i = a == 0 ? idx % static_cast<std::size_t>(g.points(0))
                                 : idx / static_cast<std::size_t>(g.points(0));
    if (i == 0) {
      if (neumann) out[idx] += 2.0 * (u[idx + stride] - u[idx]) * inv_h2;
    } else if (i == static_cast<std::size_t>(n - 1)) {
      if (neumann) out[idx] += 2.0 * (u[idx - stride] - u[idx]) * inv_h2;
    } else {
      out[idx] += (u[idx - stride] - 2.0 * u[idx] + u[idx + stride]) * inv_h2;
    }
  }
}

// Adds -d/dx_a (c du/dx_a) along axis `a` into `out`.
void add_axis_flux_divergence(const Field& c, const Field& u, const Grid& g, int a, Field& out) {
  const AxisTransform& tr = g.transform(a);
  if (tr.bc() == Boundary::periodic) {
    std::vector<double> work(u.values().begin(), u.values().end());
    for_each_line(g, a, work, [&](std::span<double> line) {
      tr.forward(line);
      tr.differentiate_halfcomplex(line);
      tr.backward(line);
    });
    for (std::size_t i = 0; i < work.size(); ++i) work[i] *= c[i];
    for_each_line(g, a, work, [&](std::span<double> line) {
      tr.forward(line);
      tr.differentiate_halfcomplex(line);
      tr.backward(line);
    });
    for (std::size_t i = 0; i < work.size(); ++i) out[i] -= work[i];
    return;
  }
  const double h = g.spacing(a);
  const double inv_h2 = 1.0 / (h * h);
  const std::size_t stride = g.stride(a);
  const int n = g.points(a);
  const std::size_t nx = static_cast<std::size_t>(g.points(0));
  for (std::size_t idx = 0; idx < u.size(); ++idx) {
    const std::size_t i = a == 0 ? idx % nx : idx / nx;
    double flux = 0.0;
    // Lumped weight along this axis: h in the interior, h/2 at a boundary node.
    double weight_factor = 1.0;
    if (i > 0) {
      const double ce = 0.5 * (c[idx] + c[idx - stride]);
      flux += ce * (u[idx] - u[idx - stride]);
    } else {
      weight_factor = 2.0;
    }
    if (i + 1 < static_cast<std::size_t>(n)) {
      const double ce = 0.5 * (c[idx] + c[idx + stride]);
      flux += ce * (u[idx] - u[idx + stride]);
    } else {
      weight_factor = 2.0;
    }
    out[idx] += weight_factor * flux * inv_h2;
  }
}

void require_nonnegative(const Field& c) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] < 0.0 || std::isnan(c[i])) {
      throw InvalidArgument(fmt::format("negative coefficient {} at node {}", c[i], i));
    }
  }
}

void require_periodic(const Grid& g) {
  if (!g.all_periodic()) throw InvalidArgument("lubrication operator requires a periodic grid");
}

// Symbol of the positive operator at tensor transform index (i, j).
template <typename SymbolFn>
void apply_diagonal(const Grid& g, std::span<double> data, SymbolFn&& symbol) {
  const AxisTransform& tx = g.transform(0);
  if (g.dim() == 1) {
    for (int i = 0; i < tx.length(); ++i) {
      data[static_cast<std::size_t>(i + tx.offset())] *= symbol(i, -1);
    }
    return;
  }
  const AxisTransform& ty = g.transform(1);
  const std::size_t nx = static_cast<std::size_t>(g.points(0));
  for (int j = 0; j < ty.length(); ++j) {
    for (int i = 0; i < tx.length(); ++i) {
      const std::size_t idx = static_cast<std::size_t>(j + ty.offset()) * nx +
                              static_cast<std::size_t>(i + tx.offset());
      data[idx] *= symbol(i, j);
    }
  }
}

double symbol_sum(const Grid& g, int i, int j, bool div_grad) {
  const auto s0 = div_grad ? g.transform(0).div_grad_symbol() : g.transform(0).laplacian_symbol();
  double s = s0[static_cast<std::size_t>(i)];
  if (j >= 0) {
    const auto s1 = div_grad ? g.transform(1).div_grad_symbol() : g.transform(1).laplacian_symbol();
    s += s1[static_cast<std::size_t>(j)];
  }
  return s;
}

bool is_uniform(const Field& c) {
  if (c.size() == 0) return true;
  const auto [lo, hi] = std::minmax_element(c.values().begin(), c.values().end());
  return *lo == *hi;
}

double weighted_mean(const Field& c, const Grid& g) {
  double total_weight = 0.0;
  for (double w : g.weights()) total_weight += w;
  return mass(c, g) / total_weight;
}

}  // namespace

Field apply_laplacian(const Field& u, const Grid& g) {
  require_same_grid(u, g);
  Field out(g);
  for (int a = 0; a < g.dim(); ++a) add_axis_second_derivative(u, g, a, out);
  pin_excluded(out, g);
  return out;
}

Field apply_flux_divergence(const Field& c, const Field& u, const Grid& g) {
  require_same_grid(u, g);
  require_same_grid(c, g);
  Field out(g);
  for (int a = 0; a < g.dim(); ++a) add_axis_flux_divergence(c, u, g, a, out);
  pin_excluded(out, g);
  return out;
}

Field apply_div_coeff_grad(const Field& c, const Field& u, const Grid& g) {
  require_nonnegative(c);
  return apply_flux_divergence(c, u, g);
}

Field apply_lubrication(const Field& c, const Field& u, const Grid& g) {
  require_periodic(g);
  require_nonnegative(c);
  Field minus_lap = apply_laplacian(u, g);
  minus_lap *= -1.0;
  return apply_flux_divergence(c, minus_lap, g);
}

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::laplacian:
      return "laplacian";
    case OperatorKind::div_coeff_grad:
      return "div-coeff-grad";
    case OperatorKind::lubrication:
      return "div-coeff-grad-laplacian";
  }
  return "unknown";
}

LinearOperator::LinearOperator(OperatorKind kind, GridPtr grid, std::optional<Field> coefficient)
    : kind_(kind), grid_(std::move(grid)), coefficient_(std::move(coefficient)) {
  if (!grid_) throw InvalidArgument("operator needs a grid");
  if (coefficient_) {
    require_same_grid(*coefficient_, *grid_);
    require_nonnegative(*coefficient_);
    mean_coefficient_ = weighted_mean(*coefficient_, *grid_);
    constant_ = is_uniform(*coefficient_);
  }
}

LinearOperator LinearOperator::laplacian(GridPtr grid) {
  return LinearOperator(OperatorKind::laplacian, std::move(grid), std::nullopt);
}

LinearOperator LinearOperator::div_coeff_grad(GridPtr grid, Field coefficient) {
  return LinearOperator(OperatorKind::div_coeff_grad, std::move(grid), std::move(coefficient));
}

LinearOperator LinearOperator::lubrication(GridPtr grid, Field coefficient) {
  require_periodic(*grid);
  return LinearOperator(OperatorKind::lubrication, std::move(grid), std::move(coefficient));
}

Field LinearOperator::apply(const Field& u) const {
  switch (kind_) {
    case OperatorKind::laplacian: {
      Field out = apply_laplacian(u, *grid_);
      out *= -1.0;
      return out;
    }
    case OperatorKind::div_coeff_grad:
      return apply_flux_divergence(*coefficient_, u, *grid_);
    case OperatorKind::lubrication: {
      Field minus_lap = apply_laplacian(u, *grid_);
      minus_lap *= -1.0;
      return apply_flux_divergence(*coefficient_, minus_lap, *grid_);
    }
  }
  throw InvalidArgument("unknown operator kind");
}

Field LinearOperator::apply_constant_inverse(double sigma, double scale, const Field& rhs) const {
  const Grid& g = *grid_;
  Field out = rhs;
  pin_excluded(out, g);
  transform_forward(g, out.values());
  switch (kind_) {
    case OperatorKind::laplacian:
      apply_diagonal(g, out.values(), [&](int i, int j) {
        return 1.0 / (sigma + scale * symbol_sum(g, i, j, false));
      });
      break;
    case OperatorKind::div_coeff_grad:
      apply_diagonal(g, out.values(), [&](int i, int j) {
        return 1.0 / (sigma + scale * symbol_sum(g, i, j, true));
      });
      break;
    case OperatorKind::lubrication:
      apply_diagonal(g, out.values(), [&](int i, int j) {
        return 1.0 / (sigma + scale * symbol_sum(g, i, j, true) * symbol_sum(g, i, j, false));
      });
      break;
  }
  transform_backward(g, out.values());
  pin_excluded(out, g);
  return out;
}

std::pair<Field, SolverReport> LinearOperator::solve_shifted(double sigma, const Field& rhs,
                                                             const SolverSettings& settings) const {
  if (!(sigma > 0.0)) throw InvalidArgument("shift must be positive");
  const Grid& g = *grid_;
  require_same_grid(rhs, g);

  const FieldMap shifted = [&](const Field& x) {
    Field y = apply(x);
    y.axpy(sigma, x);
    return y;
  };
  const double scale = kind_ == OperatorKind::laplacian ? 1.0 : mean_coefficient_;
  const FieldMap precond = [&, scale](const Field& r) {
    return apply_constant_inverse(sigma, scale, r);
  };

  SolverReport report;
  const double rhs_norm = norm(rhs, g);
  if (rhs_norm == 0.0) {
    report.converged = true;
    return {Field(g), report};
  }

  if (constant_) {
    Field x = precond(rhs);
    Field r = rhs;
    r -= shifted(x);
    report.iterations = 1;
    report.residual = norm(r, g) / rhs_norm;
    // The diagonalization is exact; only rounding remains.
    report.converged = true;
    return {std::move(x), report};
  }

  Field x = precond(rhs);
  if (kind_ == OperatorKind::lubrication) {
    report = gmres(shifted, precond, rhs, x, g, settings);
  } else {
    report = conjugate_gradient(shifted, precond, rhs, x, g, settings);
  }
  return {std::move(x), report};
}

std::pair<Field, SolverReport> solve_shifted(double sigma, const LinearOperator& op,
                                             const Field& rhs, const SolverSettings& settings) {
  return op.solve_shifted(sigma, rhs, settings);
}

std::pair<Field, SolverReport> solve_lubrication_shifted(double sigma, const Field& c,
                                                         const Field& rhs, GridPtr grid,
                                                         const SolverSettings& settings) {
  return LinearOperator::lubrication(std::move(grid), c).solve_shifted(sigma, rhs, settings);
}

Field solve_poisson_mean_zero(const Field& rhs, const Grid& g, double scale,
                              double compatibility_tolerance) {
  require_same_grid(rhs, g);
  for (int a = 0; a < g.dim(); ++a) {
    if (g.axis(a).bc == Boundary::dirichlet) {
      throw InvalidArgument("mean-zero Poisson solve needs periodic or Neumann axes");
    }
  }
  double total = 0.0;
  const auto w = g.weights();
  for (std::size_t i = 0; i < rhs.size(); ++i) total += w[i] * std::abs(rhs[i]);
  const double defect = mass(rhs, g);
  if (std::abs(defect) > compatibility_tolerance * std::max(total, 1e-300) &&
      std::abs(defect) > 1e-300) {
    throw NumericalFailure(
        fmt::format("Poisson right-hand side is incompatible: [rhs, 1] = {:.3e}", defect));
  }
  Field out = rhs;
  transform_forward(g, out.values());
  apply_diagonal(g, out.values(), [&](int i, int j) {
    const double s = symbol_sum(g, i, j, false);
    return s > 0.0 ? 1.0 / (scale * s) : 0.0;
  });
  transform_backward(g, out.values());
  return out;
}

}  // namespace posikit
