#include "posikit/diagnostics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>

#include "posikit/error.hpp"

namespace posikit {

namespace {

bool is_second_order(LedgerKind kind) {
  return kind == LedgerKind::second_order || kind == LedgerKind::second_order_mass;
}

bool is_mass(LedgerKind kind) {
  return kind == LedgerKind::first_order_mass || kind == LedgerKind::second_order_mass;
}

std::string num(double v) { return fmt::format("{}", v); }

}  // namespace

std::string_view to_string(LedgerKind kind) {
  switch (kind) {
    case LedgerKind::first_order:
      return "first_order";
    case LedgerKind::first_order_mass:
      return "first_order_mass";
    case LedgerKind::second_order:
      return "second_order";
    case LedgerKind::second_order_mass:
      return "second_order_mass";
  }
  return "unknown";
}

std::optional<LedgerKind> ledger_kind_for(Variant variant, int k) {
  if (k == 1) {
    // Without the extrapolated multiplier the k = 1 cut-off scheme is the multiplier scheme.
    if (variant == Variant::multiplier || variant == Variant::cutoff) return LedgerKind::first_order;
    if (variant == Variant::mass) return LedgerKind::first_order_mass;
  }
  if (k == 2) {
    if (variant == Variant::multiplier) return LedgerKind::second_order;
    if (variant == Variant::mass) return LedgerKind::second_order_mass;
  }
  return std::nullopt;
}

EnergyLedger::EnergyLedger(LedgerKind kind, const Field& u0, const Grid& g, double dt)
    : kind_(kind), dt_(dt), u0_(u0) {
  require_same_grid(u0, g);
  initial_norm_sq_ = norm_squared(u0, g);
  current_norm_sq_ = initial_norm_sq_;
}

void EnergyLedger::update(const Field& u_prev, const StepRecord& record, const Grid& g) {
  Field increment = record.u_tilde;
  increment -= u_prev;
  Field multiplier = record.lambda_next;
  if (is_mass(kind_)) multiplier += Field(g, record.xi_next);
  pin_excluded(multiplier, g);

  increment_sum_ += norm_squared(increment, g);
  last_multiplier_norm_sq_ = norm_squared(multiplier, g);
  multiplier_sum_ += dt_ * dt_ * last_multiplier_norm_sq_;
  operator_sum_ += record.operator_energy;
  current_norm_sq_ = norm_squared(record.u_next, g);
  if (steps_ == 0) {
    Field startup = record.u_next;
    startup *= 2.0;
    startup -= u0_;
    startup_norm_sq_ = norm_squared(startup, g);
  }
  ++steps_;
}

double EnergyLedger::lhs() const {
  if (is_second_order(kind_)) {
    return 4.0 * current_norm_sq_ + 4.0 / 3.0 * dt_ * dt_ * last_multiplier_norm_sq_ +
           4.0 * dt_ * operator_sum_;
  }
  return current_norm_sq_ + increment_sum_ + multiplier_sum_ + 2.0 * dt_ * operator_sum_;
}

double EnergyLedger::rhs() const {
  if (is_second_order(kind_)) {
    if (steps_ == 0) return 4.0 * initial_norm_sq_;
    return startup_norm_sq_ + 4.0 * initial_norm_sq_;
  }
  return initial_norm_sq_;
}

double EnergyLedger::residual() const {
  if (steps_ == 0) return 0.0;
  if (kind_ == LedgerKind::first_order) return std::abs(lhs() - rhs());
  return std::max(lhs() - rhs(), 0.0);
}

double EnergyLedger::scale() const { return std::max(rhs(), std::numeric_limits<double>::min()); }

void ledger_update(EnergyLedger& ledger, const Field& u_prev, const StepRecord& record,
                   const Grid& g) {
  ledger.update(u_prev, record, g);
}

KktReport kkt_audit(const Field& u, const Field& lambda, double lower_bound, const Grid& g,
                    double tolerance) {
  require_same_grid(u, g);
  require_same_grid(lambda, g);
  KktReport report;
  for (std::size_t z = 0; z < u.size(); ++z) {
    if (!g.is_active(z)) continue;
    const double gap = u[z] - lower_bound;
    const double neg_lambda = std::max(-lambda[z], 0.0);
    const double violation = std::max(-gap, 0.0);
    const double comp = std::abs(std::min(lambda[z], gap));
    report.worst_negative_lambda = std::max(report.worst_negative_lambda, neg_lambda);
    report.worst_bound_violation = std::max(report.worst_bound_violation, violation);
    report.worst_complementarity = std::max(report.worst_complementarity, comp);
    if (neg_lambda > tolerance || violation > tolerance || comp > tolerance) {
      ++report.violating_nodes;
    }
  }
  return report;
}

StepDiagnostics summarize(const StepRecord& record, const Grid& g, const EnergyLedger* ledger) {
  StepDiagnostics d;
  d.time = record.time;
  d.mass = mass(record.u_next, g);
  d.min_u = min_active(record.u_next, g);
  d.max_u = max_active(record.u_next, g);
  d.norm_u = norm(record.u_next, g);
  d.xi = record.xi_next;
  d.secant_iterations = record.secant_iterations;
  d.active_count = record.active_count;
  d.ledger_residual = ledger ? ledger->residual() : std::numeric_limits<double>::quiet_NaN();
  return d;
}

StepDiagnostics summarize_initial(const Field& u0, const Grid& g, double t0) {
  StepDiagnostics d;
  d.time = t0;
  d.mass = mass(u0, g);
  d.min_u = min_active(u0, g);
  d.max_u = max_active(u0, g);
  d.norm_u = norm(u0, g);
  d.ledger_residual = std::numeric_limits<double>::quiet_NaN();
  return d;
}

void write_step_log_header(std::ostream& out) {
  out << "t,mass,min_u,max_u,norm_u,xi,secant_iters,active_count,ledger_residual\n";
}

void write_step_log_row(std::ostream& out, const StepDiagnostics& d) {
  out << num(d.time) << ',' << num(d.mass) << ',' << num(d.min_u) << ',' << num(d.max_u) << ','
      << num(d.norm_u) << ',' << num(d.xi) << ',' << d.secant_iterations << ',' << d.active_count
      << ',' << num(d.ledger_residual) << '\n';
}

void advance(History& hist, const Model& model, const StepOptions& options, long steps,
             const std::function<void(const StepRecord&, const Field& u_prev)>& observer) {
  for (long s = 0; s < steps; ++s) {
    Field u_prev = hist.u(0);
    const StepRecord rec = step(hist, model, options);
    if (observer) observer(rec, u_prev);
  }
}

long steps_to_reach(double horizon, double dt) {
  if (!(dt > 0.0) || !(horizon >= 0.0)) throw InvalidArgument("horizon and dt must be positive");
  const double ratio = horizon / dt;
  const long n = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(n)) > 1e-6 * std::max(1.0, ratio)) {
    throw InvalidArgument(fmt::format("dt = {} does not divide the horizon {}", dt, horizon));
  }
  return n;
}

Field run_to_horizon(const Model& model, const StepOptions& options, double horizon) {
  const Grid& g = *model.grid();
  History hist(g, model.initial_condition(), static_cast<std::size_t>(options.order));
  advance(hist, model, options, steps_to_reach(horizon, options.dt));
  return hist.u(0);
}

double max_error(const Field& u, const Field& reference, const Grid& g) {
  require_same_grid(u, g);
  require_same_grid(reference, g);
  double e = 0.0;
  for (std::size_t z = 0; z < u.size(); ++z) {
    if (g.is_active(z)) e = std::max(e, std::abs(u[z] - reference[z]));
  }
  return e;
}

void fit_orders(std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0) {
      rows[i].order = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    rows[i].order = std::log(rows[i - 1].error / rows[i].error) / std::log(rows[i - 1].dt / rows[i].dt);
  }
}

std::vector<ConvergenceRow> convergence_study(const Model& model, const StudySpec& study,
                                              const Field& reference) {
  for (std::size_t i = 1; i < study.dts.size(); ++i) {
    if (!(study.dts[i] < study.dts[i - 1])) throw InvalidArgument("study dt list must decrease");
  }
  const Grid& g = *model.grid();
  std::vector<std::future<double>> errors;
  for (double dt : study.dts) {
    errors.push_back(std::async(std::launch::async, [&, dt] {
      StepOptions opts;
      opts.order = study.order;
      opts.dt = dt;
      opts.variant = study.variant;
      opts.lower_bound = study.lower_bound;
      opts.solver = study.solver;
      return max_error(run_to_horizon(model, opts, study.horizon), reference, g);
    }));
  }
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < study.dts.size(); ++i) {
    rows.push_back({study.dts[i], errors[i].get(), 0.0});
  }
  fit_orders(rows);
  return rows;
}

std::vector<ConvergenceRow> convergence_study(const Model& model, const StudySpec& study,
                                              const ReferenceSpec& reference) {
  StepOptions ref;
  ref.order = reference.order;
  ref.dt = reference.dt;
  ref.variant = reference.variant;
  ref.lower_bound = study.lower_bound;
  ref.solver = study.solver;
  const Field u_ref = run_to_horizon(model, ref, study.horizon);
  return convergence_study(model, study, u_ref);
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "dt,error,order\n";
  for (const auto& r : rows) out << num(r.dt) << ',' << num(r.error) << ',' << num(r.order) << '\n';
}

}  // namespace posikit
