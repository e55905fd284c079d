#include "posikit/stepper.hpp"

#include <fmt/format.h>

#include <string>
#include <vector>

#include "posikit/error.hpp"

namespace posikit {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::multiplier:
      return "multiplier";
    case Variant::cutoff:
      return "cutoff";
    case Variant::mass:
      return "mass";
    case Variant::none:
      return "none";
  }
  return "unknown";
}

Variant parse_variant(std::string_view text) {
  if (text == "multiplier") return Variant::multiplier;
  if (text == "cutoff") return Variant::cutoff;
  if (text == "mass") return Variant::mass;
  if (text == "none") return Variant::none;
  throw InvalidArgument("unknown variant '" + std::string(text) + "'");
}

int effective_order(const History& hist, int k) {
  return std::min(k, static_cast<int>(hist.depth()));
}

Field lambda_extrapolation(const History& hist, const BdfTableau& tab, const Grid& g) {
  if (tab.b.empty()) return Field(g);
  std::vector<const Field*> levels;
  for (std::size_t i = 0; i < tab.b.size(); ++i) levels.push_back(&hist.lambda(i));
  return combine(tab.b, levels);
}

double xi_extrapolation(const History& hist, const BdfTableau& tab) {
  std::vector<double> levels;
  for (std::size_t i = 0; i < tab.b.size(); ++i) levels.push_back(hist.xi(i));
  return combine(tab.b, levels);
}

std::pair<Field, SolverReport> predict(const History& hist, const BdfTableau& tab,
                                       const LinearOperator& op, double dt, bool include_multiplier,
                                       bool mass_mode, const std::optional<Field>& source,
                                       const SolverSettings& settings) {
  const Grid& g = op.grid();
  if (static_cast<int>(hist.depth()) < tab.order) {
    throw InvalidArgument("history is shallower than the BDF order");
  }
  std::vector<const Field*> levels;
  for (std::size_t i = 0; i < tab.a.size(); ++i) levels.push_back(&hist.u(i));
  Field rhs = combine(tab.a, levels);
  rhs *= 1.0 / dt;
  if (include_multiplier) rhs += lambda_extrapolation(hist, tab, g);
  if (mass_mode) {
    const double bxi = xi_extrapolation(hist, tab);
    Field shift(g, bxi);
    rhs += shift;
  }
  if (source) rhs += *source;
  pin_excluded(rhs, g);
  return op.solve_shifted(tab.alpha / dt, rhs, settings);
}

StepRecord step(History& hist, const Model& model, const StepOptions& options) {
  if (!(options.dt > 0.0)) throw InvalidArgument("time step must be positive");
  const Grid& g = *model.grid();
  const int k = effective_order(hist, options.order);
  const BdfTableau tab = bdf_tableau(k);
  const LinearOperator op = model.linear_operator(hist, k);
  const std::optional<Field> source = model.explicit_source(hist, k);

  const bool with_lambda = options.variant == Variant::multiplier || options.variant == Variant::mass;
  const bool mass_mode = options.variant == Variant::mass;
  auto [u_tilde, report] =
      predict(hist, tab, op, options.dt, with_lambda, mass_mode, source, options.solver);
  if (!report.converged) {
    throw NumericalFailure(fmt::format(
        "linear solve did not converge at t = {} ({} iterations, relative residual {:.3e})",
        hist.time() + options.dt, report.iterations, report.residual));
  }

  StepRecord rec;
  rec.order_used = k;
  // Fixed step size: t0 + n dt avoids drift from repeated addition.
  rec.time = hist.initial_time() + static_cast<double>(hist.steps() + 1) * options.dt;
  rec.solver = report;
  rec.operator_energy = inner(op.apply(u_tilde), u_tilde, g);

  CorrectionOutcome out;
  switch (options.variant) {
    case Variant::multiplier:
      out = correct_positivity(u_tilde, lambda_extrapolation(hist, tab, g), tab, options.dt,
                               options.lower_bound, g);
      break;
    case Variant::cutoff:
      out = correct_cutoff(u_tilde, tab, options.dt, options.lower_bound, g);
      break;
    case Variant::mass: {
      Field shift_base = lambda_extrapolation(hist, tab, g);
      Field bxi(g, xi_extrapolation(hist, tab));
      shift_base += bxi;
      out = correct_mass_conserving(u_tilde, shift_base, tab, options.dt, hist.target_mass(),
                                    options.lower_bound, g, options.secant);
      break;
    }
    case Variant::none:
      out = CorrectionOutcome{u_tilde, Field(g), 0.0, 0, 0};
      break;
  }

  rec.u_tilde = std::move(u_tilde);
  rec.u_next = out.u_next;
  rec.lambda_next = out.lambda_next;
  rec.xi_next = out.xi_next;
  rec.secant_iterations = out.secant_iterations;
  rec.active_count = out.active_count;
  hist.push(Level{std::move(out.u_next), std::move(out.lambda_next), out.xi_next}, rec.time);
  return rec;
}

}  // namespace posikit
