#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "posikit/correction.hpp"
#include "posikit/diagnostics.hpp"
#include "posikit/error.hpp"
#include "test_support.hpp"

using namespace posikit;
namespace pt = posikit::testing;

namespace {

// Dirichlet [0, 4] with four intervals: three collocation nodes of weight 1.
GridPtr three_nodes() { return pt::bounded_1d(4, 0.0, 4.0, Boundary::dirichlet); }

Field interior(const Grid& g, double a, double b, double c) { return Field(g, {0.0, a, b, c, 0.0}); }

}  // namespace

TEST(Positivity, SpecExamples) {
  auto g = three_nodes();
  const auto t1 = bdf_tableau(1);
  auto out = correct_positivity(interior(*g, -0.3, 0.5, 0.0), Field(*g), t1, 0.1, 0.0, *g);
  EXPECT_EQ(out.u_next[1], 0.0);
  EXPECT_NEAR(out.lambda_next[1], 3.0, 1e-15);
  EXPECT_EQ(out.u_next[2], 0.5);
  EXPECT_EQ(out.lambda_next[2], 0.0);
  EXPECT_EQ(out.active_count, 1u);
  EXPECT_EQ(out.xi_next, 0.0);

  const auto t2 = bdf_tableau(2);
  Field lam(*g);
  lam[1] = 0.6;
  auto o2 = correct_positivity(interior(*g, 0.03, 0.0, 0.0), lam, t2, 0.1, 0.0, *g);
  EXPECT_EQ(o2.u_next[1], 0.0);
  EXPECT_NEAR(o2.lambda_next[1], 0.15, 1e-14);
}

TEST(Positivity, TieIsInactive) {
  auto g = three_nodes();
  auto out = correct_positivity(interior(*g, 0.01, 0.2, 0.3), Field(*g), bdf_tableau(1), 0.1, 0.01, *g);
  EXPECT_EQ(out.u_next[1], 0.01);
  EXPECT_EQ(out.lambda_next[1], 0.0);
  EXPECT_EQ(out.active_count, 0u);
}

TEST(Cutoff, SpecExamples) {
  auto g = three_nodes();
  auto out = correct_cutoff(interior(*g, -0.2, 0.4, 0.1), bdf_tableau(1), 0.1, 0.0, *g);
  EXPECT_EQ(out.u_next[1], 0.0);
  EXPECT_NEAR(out.lambda_next[1], 2.0, 1e-15);
  EXPECT_EQ(out.active_count, 1u);

  auto pos = correct_cutoff(interior(*g, 0.2, 0.4, 0.1), bdf_tableau(2), 0.1, 0.0, *g);
  EXPECT_EQ(pos.u_next, interior(*g, 0.2, 0.4, 0.1));
  EXPECT_EQ(pos.lambda_next, Field(*g));
  EXPECT_EQ(pos.active_count, 0u);
}

TEST(Cutoff, BitIdenticalToPositivityForFirstOrder) {
  std::mt19937_64 rng(17);
  auto g = Grid::build({AxisSpec{0.0, 1.0, 12, Boundary::neumann}, AxisSpec{0.0, 1.0, 9, Boundary::dirichlet}});
  const auto t1 = bdf_tableau(1);
  for (int trial = 0; trial < 50; ++trial) {
    Field ut = pt::random_field(*g, rng);
    const double lb = trial % 2 == 0 ? 0.0 : 0.05;
    auto a = correct_positivity(ut, Field(*g), t1, 0.01, lb, *g);
    auto b = correct_cutoff(ut, t1, 0.01, lb, *g);
    EXPECT_EQ(a.u_next, b.u_next);
    EXPECT_EQ(a.lambda_next, b.lambda_next);
    EXPECT_EQ(a.active_count, b.active_count);
  }
}

TEST(Positivity, KktHoldsExactly) {
  std::mt19937_64 rng(23);
  auto g = pt::bounded_1d(40, 0.0, 1.0, Boundary::neumann);
  for (int k = 1; k <= 4; ++k) {
    const auto tab = bdf_tableau(k);
    Field ut = pt::random_field(*g, rng);
    Field lam = pt::random_field(*g, rng, 0.0, 2.0);
    auto out = correct_positivity(ut, lam, tab, 0.05, 0.02, *g);
    EXPECT_TRUE(kkt_audit(out.u_next, out.lambda_next, 0.02, *g).ok());
    for (std::size_t i = 0; i < ut.size(); ++i) {
      EXPECT_TRUE(out.lambda_next[i] == 0.0 || out.u_next[i] == 0.02);
    }
  }
}

TEST(MassResidual, SpecExamples) {
  auto g = three_nodes();
  const auto t1 = bdf_tableau(1);
  Field ut = interior(*g, -0.5, 0.2, 0.6);
  Field base(*g);
  EXPECT_NEAR(residual_F(0.0, ut, base, 1.0, t1, 0.8, *g, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(residual_F(0.0, ut, base, 1.0, t1, 0.5, *g, 0.0), 0.3, 1e-15);
  EXPECT_NEAR(residual_F(-1e6, ut, base, 1.0, t1, 0.5, *g, 0.0), -0.5, 1e-15);
  EXPECT_NEAR(residual_F(-1e6, ut, base, 1.0, t1, 0.5, *g, 0.1), 0.3 - 0.5, 1e-15);
}

TEST(MassResidual, Nondecreasing) {
  std::mt19937_64 rng(31);
  auto g = pt::bounded_1d(30, 0.0, 1.0, Boundary::neumann);
  std::uniform_real_distribution<double> xi(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    Field ut = pt::random_field(*g, rng);
    Field base = pt::random_field(*g, rng);
    double a = xi(rng);
    double b = xi(rng);
    if (a > b) std::swap(a, b);
    const auto tab = bdf_tableau(1 + trial % 4);
    EXPECT_LE(residual_F(a, ut, base, 0.1, tab, 0.3, *g, 0.0),
              residual_F(b, ut, base, 0.1, tab, 0.3, *g, 0.0));
  }
}

TEST(Secant, AffineIsExactInOneUpdate) {
  auto res = solve_xi_secant([](double xi) { return xi + 0.15; }, 0.0, -0.1);
  EXPECT_NEAR(res.xi, -0.15, 1e-15);
  EXPECT_EQ(res.iterations, 1);
  EXPECT_FALSE(res.used_bisection);
}

TEST(Secant, ZeroResidualAtStartNeedsNoIterations) {
  auto res = solve_xi_secant([](double xi) { return 2.0 * xi; }, 0.0, -0.1);
  EXPECT_EQ(res.xi, 0.0);
  EXPECT_EQ(res.iterations, 0);
}

TEST(Secant, FlatStartFallsBackToBisection) {
  auto F = [](double xi) { return xi < 2.0 ? -1.0 : xi - 3.0; };
  auto res = solve_xi_secant(F, 0.0, -0.1);
  EXPECT_TRUE(res.used_bisection);
  EXPECT_NEAR(res.xi, 3.0, 1e-11);
}

TEST(Secant, FailureCarriesBestIterate) {
  auto F = [](double xi) { return xi * xi * xi - 2.0; };
  try {
    solve_xi_secant(F, 0.0, 0.1, SecantSettings{1e-14, 2});
    FAIL() << "expected SecantFailure";
  } catch (const SecantFailure& e) {
    EXPECT_NEAR(F(e.best_xi()), e.best_residual(), 1e-15);
    EXPECT_LT(std::abs(e.best_residual()), 2.0);
  }
}

TEST(Exact, ThreeNodeInstance) {
  auto g = three_nodes();
  const auto t1 = bdf_tableau(1);
  Field ut = interior(*g, -0.5, 0.2, 0.6);
  Field base(*g);
  const MassResidual F{&ut, &base, g.get(), 1.0, t1.alpha, 0.5, 0.0};
  EXPECT_NEAR(solve_xi_exact(F), -0.15, 1e-15);

  auto sec = solve_xi_secant(F, 0.0, -1.0, {}, 0.5);
  EXPECT_NEAR(sec.xi, -0.15, 1e-12);
}

TEST(Exact, SingleSegmentAndFloor) {
  auto g = three_nodes();
  Field ut = interior(*g, 0.3, 0.4, 0.5);
  Field base(*g);
  // All three nodes stay unclamped: (1.2 + 3 * dt/alpha * xi) = target.
  const MassResidual F{&ut, &base, g.get(), 0.5, 1.5, 1.5, 0.0};
  EXPECT_NEAR(solve_xi_exact(F), 0.3 * 1.5 / (3 * 0.5), 1e-14);

  const MassResidual floor{&ut, &base, g.get(), 0.5, 1.5, 0.3, 0.1};
  const double xi = solve_xi_exact(floor);
  EXPECT_NEAR(floor(xi), 0.0, 1e-15);

  const MassResidual below{&ut, &base, g.get(), 0.5, 1.5, 0.2, 0.1};
  EXPECT_THROW(solve_xi_exact(below), InvalidArgument);
}

TEST(Exact, AgreesWithSecantOnRandomInstances) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = pt::bounded_1d(4 + trial % 40, 0.0, 0.5 + 3 * unit(rng), Boundary::neumann);
    const auto tab = bdf_tableau(1 + trial % 4);
    const double dt = 1e-4 + 0.1 * unit(rng);
    const double lb = trial % 3 == 0 ? 0.0 : 0.05 * unit(rng);
    Field ut = pt::random_field(*g, rng, -1.0, 2.0);
    Field base = pt::random_field(*g, rng, 0.0, 1.0);
    const double target = lb * g->measure() + (0.05 + unit(rng)) * g->measure();
    const MassResidual F{&ut, &base, g.get(), dt, tab.alpha, target, lb};
    const double exact = solve_xi_exact(F);
    const auto sec = solve_xi_secant(F, 0.0, -dt, {}, target);
    EXPECT_LE(std::abs(F(sec.xi)), 1e-12 * std::max(1.0, target));
    // The nodal shift dt/alpha * xi is what reaches u.
    EXPECT_NEAR(dt / tab.alpha * sec.xi, dt / tab.alpha * exact, 1e-12 * std::max(1.0, target));
  }
}

TEST(MassCorrection, AlreadyOnTarget) {
  auto g = three_nodes();
  Field ut = interior(*g, 0.2, 0.3, 0.5);
  auto out = correct_mass_conserving(ut, Field(*g), bdf_tableau(1), 0.1, 1.0, 0.0, *g);
  EXPECT_EQ(out.xi_next, 0.0);
  EXPECT_EQ(out.u_next, ut);
  EXPECT_EQ(out.lambda_next, Field(*g));
  EXPECT_EQ(out.secant_iterations, 0);
}

TEST(MassCorrection, ThreeNodeInstance) {
  auto g = three_nodes();
  Field ut = interior(*g, -0.5, 0.2, 0.6);
  auto out = correct_mass_conserving(ut, Field(*g), bdf_tableau(1), 1.0, 0.5, 0.0, *g);
  EXPECT_NEAR(out.xi_next, -0.15, 1e-12);
  EXPECT_EQ(out.u_next[1], 0.0);
  EXPECT_NEAR(out.u_next[2], 0.05, 1e-12);
  EXPECT_NEAR(out.u_next[3], 0.45, 1e-12);
  EXPECT_NEAR(mass(out.u_next, *g), 0.5, 1e-12);
  EXPECT_NEAR(out.lambda_next[1], 0.65, 1e-12);
  EXPECT_EQ(out.lambda_next[2], 0.0);
  EXPECT_EQ(out.active_count, 1u);
  EXPECT_TRUE(kkt_audit(out.u_next, out.lambda_next, 0.0, *g).ok());
}

TEST(MassCorrection, TargetBelowFloorRejected) {
  auto g = three_nodes();
  Field ut = interior(*g, 0.2, 0.3, 0.5);
  EXPECT_THROW(correct_mass_conserving(ut, Field(*g), bdf_tableau(1), 0.1, 0.1, 0.1, *g),
               InvalidArgument);
}
