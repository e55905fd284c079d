#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "posikit/diagnostics.hpp"
#include "posikit/error.hpp"
#include "posikit/models/heat.hpp"
#include "test_support.hpp"

using namespace posikit;
namespace pt = posikit::testing;

namespace {

GridPtr small_grid() { return pt::bounded_1d(7, 0.0, 1.4, Boundary::neumann); }

double dip(double x, double) { return std::cos(3.0 * x) + 0.3; }

// u = 1 + 0.5 e^{-t} sin x on the periodic circle (no spatial error).
HeatModel surrogate(const GridPtr& g) {
  return HeatModel(
      g, [](double x, double) { return 1.0 + 0.5 * std::sin(x); },
      [g](double t) {
        return Field::sample(*g, [t](double x, double) { return 1.0 + 0.5 * std::exp(-t) * std::sin(x); });
      });
}

}  // namespace

TEST(Ledger, KindSelection) {
  EXPECT_EQ(ledger_kind_for(Variant::multiplier, 1), LedgerKind::first_order);
  EXPECT_EQ(ledger_kind_for(Variant::cutoff, 1), LedgerKind::first_order);
  EXPECT_EQ(ledger_kind_for(Variant::mass, 1), LedgerKind::first_order_mass);
  EXPECT_EQ(ledger_kind_for(Variant::multiplier, 2), LedgerKind::second_order);
  EXPECT_EQ(ledger_kind_for(Variant::mass, 2), LedgerKind::second_order_mass);
  EXPECT_FALSE(ledger_kind_for(Variant::none, 1).has_value());
  EXPECT_FALSE(ledger_kind_for(Variant::multiplier, 3).has_value());
}

TEST(Ledger, ZeroTrajectory) {
  auto g = small_grid();
  HeatModel model(g, [](double, double) { return 0.0; });
  StepOptions opt;
  opt.order = 2;
  opt.dt = 0.1;
  History hist(*g, model.initial_condition(), 2);
  EnergyLedger ledger(LedgerKind::second_order, hist.u(), *g, opt.dt);
  advance(hist, model, opt, 4, [&](const StepRecord& r, const Field& prev) { ledger.update(prev, r, *g); });
  EXPECT_EQ(ledger.lhs(), 0.0);
  EXPECT_EQ(ledger.rhs(), 0.0);
  EXPECT_EQ(ledger.residual(), 0.0);
}

TEST(Ledger, FirstOrderIdentityAgainstDenseArithmetic) {
  auto g = small_grid();
  HeatModel model(g, dip);
  const double dt = 0.05;
  History hist(*g, model.initial_condition(), 1);
  StepOptions opt;
  opt.order = 1;
  opt.dt = dt;
  opt.solver.tolerance = 1e-14;
  const Field u0 = hist.u();
  EnergyLedger ledger(LedgerKind::first_order, u0, *g, dt);
  const StepRecord rec = step(hist, model, opt);
  ledger.update(u0, rec, *g);
  ASSERT_GT(rec.active_count, 0u);

  const Eigen::VectorXd w = pt::weight_vector(*g);
  auto sq = [&](const Eigen::VectorXd& v) { return v.dot(w.asDiagonal() * v); };
  const Eigen::MatrixXd a = -pt::assemble(*g, [&](const Field& u) { return apply_laplacian(u, *g); });
  const Eigen::VectorXd ut = pt::to_vector(rec.u_tilde, *g);
  const Eigen::VectorXd v0 = pt::to_vector(u0, *g);
  const double lhs = sq(pt::to_vector(rec.u_next, *g)) + sq(ut - v0) +
                     dt * dt * sq(pt::to_vector(rec.lambda_next, *g)) + 2 * dt * ut.dot(w.asDiagonal() * a * ut);
  EXPECT_NEAR(ledger.lhs(), lhs, 1e-13);
  EXPECT_NEAR(ledger.rhs(), sq(v0), 1e-14);
  EXPECT_LE(ledger.residual(), 1e-12 * sq(v0));
}

TEST(Ledger, SecondOrderInequalityHolds) {
  auto g = small_grid();
  HeatModel model(g, dip);
  for (Variant v : {Variant::multiplier, Variant::mass}) {
    Field u0 = model.initial_condition();
    if (v == Variant::mass) {
      for (std::size_t i = 0; i < u0.size(); ++i) u0[i] = std::max(u0[i], 0.0);
    }
    History hist(*g, u0, 2);
    StepOptions opt;
    opt.order = 2;
    opt.dt = 0.01;
    opt.variant = v;
    EnergyLedger ledger(*ledger_kind_for(v, 2), u0, *g, opt.dt);
    advance(hist, model, opt, 50, [&](const StepRecord& r, const Field& prev) {
      ledger.update(prev, r, *g);
      EXPECT_LE(ledger.residual(), 1e-8 * ledger.scale());
    });
    EXPECT_GT(ledger.operator_sum(), 0.0);
  }
}

TEST(Kkt, FlagsViolations) {
  auto g = pt::bounded_1d(4, 0.0, 4.0, Boundary::dirichlet);
  Field u(*g, {0.0, 0.1, 0.0, 0.3, 0.0});
  Field lam(*g, {0.0, 0.1, 0.2, 0.0, 0.0});
  const KktReport bad = kkt_audit(u, lam, 0.0, *g);
  EXPECT_FALSE(bad.ok());
  EXPECT_EQ(bad.violating_nodes, 1u);
  EXPECT_NEAR(bad.worst_complementarity, 0.1, 1e-15);

  Field neg(*g, {0.0, -0.2, 0.0, 0.3, 0.0});
  const KktReport low = kkt_audit(neg, Field(*g), 0.0, *g);
  EXPECT_NEAR(low.worst_bound_violation, 0.2, 1e-15);

  Field ok_lam(*g, {0.0, 0.0, 0.2, 0.0, 0.0});
  EXPECT_TRUE(kkt_audit(u, ok_lam, 0.0, *g).ok());
}

TEST(Convergence, FitOrders) {
  std::vector<ConvergenceRow> rows{{0.2, 1.0, 0.0}, {0.1, 0.25, 0.0}, {0.05, 0.125, 0.0}};
  fit_orders(rows);
  EXPECT_TRUE(std::isnan(rows[0].order));
  EXPECT_NEAR(rows[1].order, 2.0, 1e-14);
  EXPECT_NEAR(rows[2].order, 1.0, 1e-14);
}

TEST(Convergence, StepsToReach) {
  EXPECT_EQ(steps_to_reach(0.01, 2.5e-6), 4000);
  EXPECT_EQ(steps_to_reach(1.0, 1e-3), 1000);
  EXPECT_THROW(steps_to_reach(1.0, 0.3), InvalidArgument);
}

TEST(Convergence, SurrogateLowOrders) {
  auto g = pt::periodic_1d(16);
  HeatModel model = surrogate(g);
  const double horizon = 1.0;
  const Field exact = *model.exact_solution(horizon);
  for (int k : {1, 2}) {
    StudySpec study;
    study.order = k;
    study.dts = {0.02, 0.01, 0.005, 0.0025};
    study.horizon = horizon;
    study.solver.tolerance = 1e-14;
    const auto rows = convergence_study(model, study, exact);
    ASSERT_EQ(rows.size(), 4u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      EXPECT_NEAR(rows[i].order, k, 0.05) << "k=" << k << " dt=" << rows[i].dt;
    }
  }
}

TEST(Convergence, SurrogateHighOrdersWithExactStart) {
  auto g = pt::periodic_1d(16);
  HeatModel model = surrogate(g);
  const double horizon = 1.0;
  for (int k : {3, 4}) {
    std::vector<ConvergenceRow> rows;
    for (double dt : {0.04, 0.02, 0.01, 0.005}) {
      History hist(*g, *model.exact_solution(0.0), static_cast<std::size_t>(k));
      for (int back = 1; back < k; ++back) hist.seed_older({*model.exact_solution(-back * dt), Field(*g), 0.0});
      StepOptions opt;
      opt.order = k;
      opt.dt = dt;
      opt.solver.tolerance = 1e-14;
      advance(hist, model, opt, steps_to_reach(horizon, dt));
      rows.push_back({dt, max_error(hist.u(), *model.exact_solution(horizon), *g), 0.0});
    }
    fit_orders(rows);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      EXPECT_NEAR(rows[i].order, k, 0.05) << "k=" << k << " dt=" << rows[i].dt;
    }
  }
}

TEST(StepLog, HeaderAndRow) {
  std::ostringstream out;
  write_step_log_header(out);
  EXPECT_EQ(out.str(), "t,mass,min_u,max_u,norm_u,xi,secant_iters,active_count,ledger_residual\n");
  auto g = pt::bounded_1d(4, 0.0, 4.0, Boundary::dirichlet);
  const StepDiagnostics d = summarize_initial(Field(*g, {0.0, 1.0, 2.0, 3.0, 0.0}), *g);
  EXPECT_EQ(d.mass, 6.0);
  EXPECT_EQ(d.min_u, 1.0);
  EXPECT_EQ(d.max_u, 3.0);
}
