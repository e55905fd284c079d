#include "posikit/models/pnp.hpp"

#include "posikit/error.hpp"
#include "posikit/stepper.hpp"

namespace posikit {

namespace {

// One species seen by the generic stepper: implicit c = 1 diffusion plus a
// precomputed explicit drift source.
class SpeciesModel : public Model {
 public:
  SpeciesModel(const GridPtr& grid, Field source) : grid_(grid), source_(std::move(source)) {}

  const GridPtr& grid() const override { return grid_; }
  Field initial_condition() const override { return Field(*grid_); }
  LinearOperator linear_operator(const History&, int) const override {
    return LinearOperator::laplacian(grid_);
  }
  std::optional<Field> explicit_source(const History&, int) const override { return source_; }

 private:
  const GridPtr& grid_;
  Field source_;
};

Field extrapolated(const Field& now, const Field* prev) {
  Field out = now;
  if (prev) {
    out *= 2.0;
    out -= *prev;
  }
  return out;
}

CorrectionOutcome as_outcome(const StepRecord& rec) {
  return {rec.u_next, rec.lambda_next, rec.xi_next, rec.secant_iterations, rec.active_count};
}

}  // namespace

PnpModel::PnpModel(Params params) : params_(params) {
  if (!(params_.debye > 0.0)) throw InvalidArgument("Debye ratio must be positive");
  if (params_.dim != 1 && params_.dim != 2) throw InvalidArgument("PNP dim must be 1 or 2");
  const AxisSpec axis{-1.0, 1.0, params_.n, Boundary::neumann};
  grid_ = Grid::build(std::vector<AxisSpec>(static_cast<std::size_t>(params_.dim), axis));
}

Field PnpModel::initial_species() const {
  return Field::sample(*grid_, [](double x, double y) { return x * x + y * y <= 0.25 ? 1.0 : 0.0; });
}

Field PnpModel::initial_potential(const Field& p0, const Field& n0) const {
  if (params_.potential_init == PotentialInit::poisson) return solve_potential(p0, n0);
  return Field::sample(*grid_, [](double x, double y) {
    if (x * x + y * y > 0.25) return 0.0;
    return (x - 0.5) * (x - 0.5) * (y - 0.5) * (y - 0.5);
  });
}

Field PnpModel::solve_potential(const Field& p, const Field& n) const {
  Field charge = p;
  charge -= n;
  return solve_poisson_mean_zero(charge, *grid_, params_.debye * params_.debye);
}

PnpState pnp_initial_state(const PnpModel& model, int order) {
  return pnp_initial_state(model, order, model.initial_species(), model.initial_species());
}

PnpState pnp_initial_state(const PnpModel& model, int order, Field p0, Field n0) {
  const Grid& g = *model.grid();
  if (order < 1) throw InvalidArgument("order must be positive");
  Field phi = model.initial_potential(p0, n0);
  const auto cap = static_cast<std::size_t>(order);
  return PnpState{History(g, std::move(p0), cap), History(g, std::move(n0), cap), std::move(phi),
                  Field(g), false};
}

PnpStepResult pnp_step(PnpState& state, const PnpModel& model, const PnpStepOptions& options) {
  const Grid& g = *model.grid();
  const int k = effective_order(state.p, options.order);
  const bool second = k >= 2;

  const Field phi_star = extrapolated(state.phi, second && state.has_prev_phi ? &state.phi_prev : nullptr);
  const Field p_star = extrapolated(state.p.u(0), second ? &state.p.u(1) : nullptr);
  const Field n_star = extrapolated(state.n.u(0), second ? &state.n.u(1) : nullptr);

  // flux_divergence(c, u) = -div(c grad u): the p drift div(p* grad phi*) enters with a minus.
  Field source_p = apply_flux_divergence(p_star, phi_star, g);
  source_p *= -1.0;
  const Field source_n = apply_flux_divergence(n_star, phi_star, g);

  StepOptions opts;
  opts.order = options.order;
  opts.dt = options.dt;
  opts.variant = Variant::mass;
  opts.lower_bound = 0.0;
  opts.solver = options.solver;
  opts.secant = options.secant;

  const StepRecord rp = step(state.p, SpeciesModel(model.grid(), source_p), opts);
  const StepRecord rn = step(state.n, SpeciesModel(model.grid(), source_n), opts);

  state.phi_prev = std::move(state.phi);
  state.phi = model.solve_potential(state.p.u(0), state.n.u(0));
  state.has_prev_phi = true;
  return {as_outcome(rp), as_outcome(rn), state.p.time()};
}

}  // namespace posikit
