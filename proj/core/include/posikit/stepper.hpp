#pragma once

#include <optional>
#include <string_view>

#include "posikit/bdf.hpp"
#include "posikit/correction.hpp"
#include "posikit/field.hpp"
#include "posikit/history.hpp"
#include "posikit/operators.hpp"

namespace posikit {

/// Correction applied after the prediction.
///   multiplier  KKT correction with B_{k-1}(lambda) extrapolation
///   cutoff      KKT correction with the extrapolation dropped (plain clamping)
///   mass        KKT correction plus the scalar mass multiplier xi
///   none        no correction (the usual semi-implicit scheme)
enum class Variant { multiplier, cutoff, mass, none };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);

/// A PDE problem as seen by the stepper: it owns the grid and, for each step,
/// supplies the lagged operator L_h^n and any explicit source.
class Model {
 public:
  virtual ~Model() = default;

  virtual const GridPtr& grid() const = 0;
  virtual Field initial_condition() const = 0;

  /// Lagged linear operator for the step that uses `order` history levels.
  virtual LinearOperator linear_operator(const History& hist, int order) const = 0;

  /// Explicit right-hand side term, if any.
  virtual std::optional<Field> explicit_source(const History& /*hist*/, int /*order*/) const {
    return std::nullopt;
  }

  /// Exact solution on the grid at time t, when one is known.
  virtual std::optional<Field> exact_solution(double /*t*/) const { return std::nullopt; }
};

struct StepOptions {
  int order = 2;
  double dt = 1e-3;
  Variant variant = Variant::multiplier;
  double lower_bound = 0.0;
  SolverSettings solver{};
  SecantSettings secant{};
};

/// Everything a step produced; the energy ledger and the per-step log read from it.
struct StepRecord {
  int order_used = 1;
  double time = 0.0;
  Field u_tilde;
  Field u_next;
  Field lambda_next;
  double xi_next = 0.0;
  int secant_iterations = 0;
  std::size_t active_count = 0;
  /// <L u~, u~> for the operator used in the prediction.
  double operator_energy = 0.0;
  SolverReport solver;
};

/// Prediction: solves (alpha/dt) u~ + L u~ = A_k(u)/dt + B_{k-1}(lambda) [+ B_{k-1}(xi)] + source.
/// `include_multiplier` controls the B_{k-1}(lambda) term; `mass_mode` the B_{k-1}(xi) term.
std::pair<Field, SolverReport> predict(const History& hist, const BdfTableau& tab,
                                       const LinearOperator& op, double dt, bool include_multiplier,
                                       bool mass_mode, const std::optional<Field>& source,
                                       const SolverSettings& settings = {});

/// B_{k-1}(lambda^n, ...) from the history (zero field for k = 1).
Field lambda_extrapolation(const History& hist, const BdfTableau& tab, const Grid& g);
/// B_{k-1}(xi^n, ...) from the history (0 for k = 1).
double xi_extrapolation(const History& hist, const BdfTableau& tab);

/// Order used for the next step: min(k, levels available). This realizes the
/// start-up cascade 1 -> 2 -> ... -> k.
int effective_order(const History& hist, int k);

/// Runs one predict/correct step and pushes the new level into `hist`.
/// Throws NumericalFailure if the linear solve does not converge.
StepRecord step(History& hist, const Model& model, const StepOptions& options);

}  // namespace posikit
