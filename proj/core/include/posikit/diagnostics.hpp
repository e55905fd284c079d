#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "posikit/field.hpp"
#include "posikit/stepper.hpp"

namespace posikit {

/// Which discrete stability statement a ledger audits.
///   first_order        k = 1 multiplier scheme, energy identity
///   first_order_mass   k = 1 mass-conserving scheme, energy inequality
///   second_order       k = 2 multiplier scheme (first step k = 1), inequality
///   second_order_mass  k = 2 mass-conserving scheme (first step k = 1), inequality
enum class LedgerKind { first_order, first_order_mass, second_order, second_order_mass };

std::string_view to_string(LedgerKind kind);

/// The ledger that applies to a (variant, k) pair, if any.
std::optional<LedgerKind> ledger_kind_for(Variant variant, int k);

/// Running sums of the energy statements for the k = 1, 2 schemes.
///
/// first order:  |u^m|^2 + sum(|u~ - u^n|^2 + dt^2 |lambda (+ xi)|^2) + 2 dt sum <L u~, u~>
///               compared against |u^0|^2
/// second order: 4|u^m|^2 + 4/3 dt^2 |lambda^m (+ xi^m)|^2 + 4 dt sum <L u~, u~>
///               compared against |2u^1 - u^0|^2 + 4|u^0|^2
class EnergyLedger {
 public:
  EnergyLedger(LedgerKind kind, const Field& u0, const Grid& g, double dt);

  LedgerKind kind() const noexcept { return kind_; }
  long steps() const noexcept { return steps_; }

  /// Accumulates one step. `u_prev` is u^n (before the step).
  void update(const Field& u_prev, const StepRecord& record, const Grid& g);

  double initial_norm_sq() const noexcept { return initial_norm_sq_; }
  double current_norm_sq() const noexcept { return current_norm_sq_; }
  double increment_sum() const noexcept { return increment_sum_; }
  double multiplier_sum() const noexcept { return multiplier_sum_; }
  double operator_sum() const noexcept { return operator_sum_; }

  double lhs() const;
  double rhs() const;
  /// |lhs - rhs| for the identity, max(lhs - rhs, 0) for the inequalities.
  double residual() const;
  /// Normalization for `residual` (|u^0|^2 or the second-order right side).
  double scale() const;

 private:
  LedgerKind kind_;
  double dt_;
  long steps_ = 0;
  Field u0_;
  double initial_norm_sq_ = 0.0;
  double current_norm_sq_ = 0.0;
  double increment_sum_ = 0.0;
  double multiplier_sum_ = 0.0;
  double operator_sum_ = 0.0;
  double last_multiplier_norm_sq_ = 0.0;
  double startup_norm_sq_ = 0.0;
};

void ledger_update(EnergyLedger& ledger, const Field& u_prev, const StepRecord& record,
                   const Grid& g);

/// Worst violations of lambda >= 0, u >= lb and lambda (u - lb) = 0.
struct KktReport {
  double worst_negative_lambda = 0.0;
  double worst_bound_violation = 0.0;
  double worst_complementarity = 0.0;
  std::size_t violating_nodes = 0;
  bool ok() const noexcept { return violating_nodes == 0; }
};

KktReport kkt_audit(const Field& u, const Field& lambda, double lower_bound, const Grid& g,
                    double tolerance = 0.0);

/// One row of the per-step log.
struct StepDiagnostics {
  double time = 0.0;
  double mass = 0.0;
  double min_u = 0.0;
  double max_u = 0.0;
  double norm_u = 0.0;
  double xi = 0.0;
  int secant_iterations = 0;
  std::size_t active_count = 0;
  double ledger_residual = 0.0;
};

StepDiagnostics summarize(const StepRecord& record, const Grid& g,
                          const EnergyLedger* ledger = nullptr);
StepDiagnostics summarize_initial(const Field& u0, const Grid& g, double t0 = 0.0);

void write_step_log_header(std::ostream& out);
void write_step_log_row(std::ostream& out, const StepDiagnostics& d);

/// Runs `steps` steps, calling `observer` after each one.
void advance(History& hist, const Model& model, const StepOptions& options, long steps,
             const std::function<void(const StepRecord&, const Field& u_prev)>& observer = {});

/// Number of steps of size dt needed to reach `horizon` (must divide evenly
/// up to rounding).
long steps_to_reach(double horizon, double dt);

struct ConvergenceRow {
  double dt = 0.0;
  double error = 0.0;
  /// Pairwise order against the previous row (NaN for the first row).
  double order = 0.0;
};

struct StudySpec {
  int order = 1;
  Variant variant = Variant::multiplier;
  std::vector<double> dts;
  double horizon = 0.01;
  double lower_bound = 0.0;
  SolverSettings solver{};
};

struct ReferenceSpec {
  int order = 2;
  double dt = 1e-6;
  Variant variant = Variant::multiplier;
};

/// Solution at `horizon` starting from the model's initial condition.
Field run_to_horizon(const Model& model, const StepOptions& options, double horizon);

/// Max-norm error over the collocation set.
double max_error(const Field& u, const Field& reference, const Grid& g);

/// Pairwise orders log(e_{i-1}/e_i) / log(dt_{i-1}/dt_i).
void fit_orders(std::vector<ConvergenceRow>& rows);

std::vector<ConvergenceRow> convergence_study(const Model& model, const StudySpec& study,
                                              const Field& reference);
std::vector<ConvergenceRow> convergence_study(const Model& model, const StudySpec& study,
                                              const ReferenceSpec& reference);

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

}  // namespace posikit
