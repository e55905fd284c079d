#include "posikit/krylov.hpp"

#include <cmath>
#include <vector>

namespace posikit {

SolverReport conjugate_gradient(const FieldMap& op, const FieldMap& precond, const Field& rhs,
                                Field& x, const Grid& g, const SolverSettings& settings) {
  SolverReport report;
  const double rhs_norm = norm(rhs, g);
  if (rhs_norm == 0.0) {
    x = Field(g);
    report.converged = true;
    return report;
  }
  const double target = settings.tolerance * rhs_norm;

  // Outer loop restarts from the true residual if the recurrence drifted.
  while (report.iterations < settings.max_iterations) {
    Field r = rhs;
    r -= op(x);
    double r_norm = norm(r, g);
    report.residual = r_norm / rhs_norm;
    if (r_norm <= target) {
      report.converged = true;
      return report;
    }
    Field z = precond(r);
    Field p = z;
    double rz = inner(r, z, g);
    bool recurrence_converged = false;
    while (report.iterations < settings.max_iterations) {
      const Field ap = op(p);
      const double pap = inner(p, ap, g);
      if (!(pap > 0.0)) break;
      const double step = rz / pap;
      x.axpy(step, p);
      r.axpy(-step, ap);
      ++report.iterations;
      r_norm = norm(r, g);
      if (r_norm <= target) {
        recurrence_converged = true;
        break;
      }
      z = precond(r);
      const double rz_next = inner(r, z, g);
      const double beta = rz_next / rz;
      rz = rz_next;
      p *= beta;
      p += z;
    }
    if (!recurrence_converged) break;
  }
  Field r = rhs;
  r -= op(x);
  report.residual = norm(r, g) / rhs_norm;
  report.converged = report.residual <= settings.tolerance;
  return report;
}

SolverReport gmres(const FieldMap& op, const FieldMap& precond, const Field& rhs, Field& x,
                   const Grid& g, const SolverSettings& settings) {
  SolverReport report;
  const double rhs_norm = norm(rhs, g);
  if (rhs_norm == 0.0) {
    x = Field(g);
    report.converged = true;
    return report;
  }
  const double target = settings.tolerance * rhs_norm;
  const int m = std::max(1, settings.restart);

  while (report.iterations < settings.max_iterations) {
    Field r = rhs;
    r -= op(x);
    const double beta = norm(r, g);
    report.residual = beta / rhs_norm;
    if (beta <= target) {
      report.converged = true;
      return report;
    }

    std::vector<Field> basis;
    basis.reserve(static_cast<std::size_t>(m) + 1);
    r *= 1.0 / beta;
    basis.push_back(std::move(r));
    std::vector<std::vector<double>> hess(static_cast<std::size_t>(m) + 1,
                                          std::vector<double>(static_cast<std::size_t>(m), 0.0));
    std::vector<double> cs(static_cast<std::size_t>(m), 0.0);
    std::vector<double> sn(static_cast<std::size_t>(m), 0.0);
    std::vector<double> s(static_cast<std::size_t>(m) + 1, 0.0);
    s[0] = beta;

    int used = 0;
    for (int j = 0; j < m && report.iterations < settings.max_iterations; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      Field w = op(precond(basis[uj]));
      for (std::size_t i = 0; i <= uj; ++i) {
        hess[i][uj] = inner(w, basis[i], g);
        w.axpy(-hess[i][uj], basis[i]);
      }
      const double wn = norm(w, g);
      hess[uj + 1][uj] = wn;
      for (std::size_t i = 0; i < uj; ++i) {
        const double t = cs[i] * hess[i][uj] + sn[i] * hess[i + 1][uj];
        hess[i + 1][uj] = -sn[i] * hess[i][uj] + cs[i] * hess[i + 1][uj];
        hess[i][uj] = t;
      }
      const double denom = std::hypot(hess[uj][uj], hess[uj + 1][uj]);
      cs[uj] = denom == 0.0 ? 1.0 : hess[uj][uj] / denom;
      sn[uj] = denom == 0.0 ? 0.0 : hess[uj + 1][uj] / denom;
      hess[uj][uj] = denom;
      hess[uj + 1][uj] = 0.0;
      s[uj + 1] = -sn[uj] * s[uj];
      s[uj] = cs[uj] * s[uj];
      ++report.iterations;
      used = j + 1;
      if (std::abs(s[uj + 1]) <= target || wn == 0.0) break;
      w *= 1.0 / wn;
      basis.push_back(std::move(w));
    }

    std::vector<double> y(static_cast<std::size_t>(used), 0.0);
    for (int i = used - 1; i >= 0; --i) {
      const auto ui = static_cast<std::size_t>(i);
      double acc = s[ui];
      for (std::size_t k = ui + 1; k < static_cast<std::size_t>(used); ++k) acc -= hess[ui][k] * y[k];
      y[ui] = acc / hess[ui][ui];
    }
    Field update(g);
    for (std::size_t i = 0; i < static_cast<std::size_t>(used); ++i) update.axpy(y[i], basis[i]);
    x += precond(update);
  }

  Field r = rhs;
  r -= op(x);
  report.residual = norm(r, g) / rhs_norm;
  report.converged = report.residual <= settings.tolerance;
  return report;
}

}  // namespace posikit
