#include <gtest/gtest.h>

#include <numbers>
#include <random>
#include <sstream>

#include "posikit/error.hpp"
#include "posikit/field.hpp"
#include "posikit/grid.hpp"
#include "test_support.hpp"

using namespace posikit;
using posikit::testing::random_field;

TEST(Grid, PeriodicNodesAndWeights) {
  auto g = posikit::testing::periodic_1d(4);
  ASSERT_EQ(g->size(), 4u);
  const double pi = std::numbers::pi;
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(g->coordinate(i, 0), 0.5 * pi * static_cast<double>(i), 1e-15);
    EXPECT_NEAR(g->weights()[i], pi / 2, 1e-15);
    EXPECT_TRUE(g->is_active(i));
  }
}

TEST(Grid, DirichletExcludesBoundary) {
  auto g = posikit::testing::bounded_1d(10, -5.0, 5.0, Boundary::dirichlet);
  EXPECT_EQ(g->size(), 11u);
  EXPECT_EQ(g->active_count(), 9u);
  EXPECT_FALSE(g->is_active(0));
  EXPECT_FALSE(g->is_active(10));
  for (std::size_t i = 1; i < 10; ++i) EXPECT_DOUBLE_EQ(g->weights()[i], 1.0);
}

TEST(Grid, NeumannTrapezoidWeights) {
  auto g = posikit::testing::bounded_1d(4, -1.0, 1.0, Boundary::neumann);
  ASSERT_EQ(g->size(), 5u);
  const double expected[] = {0.25, 0.5, 0.5, 0.5, 0.25};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(g->weights()[i], expected[i]);
}

TEST(Grid, WeightsSumToMeasure) {
  for (Boundary bc : {Boundary::periodic, Boundary::neumann}) {
    auto g = Grid::build({AxisSpec{-1.0, 2.0, 12, bc}, AxisSpec{0.0, 0.5, 7, bc}});
    double total = 0.0;
    for (double w : g->weights()) total += w;
    EXPECT_NEAR(total, 1.5, 1e-12 * 1.5);
    EXPECT_NEAR(g->measure(), 1.5, 1e-12);
  }
}

TEST(Grid, RejectsBadSpecs) {
  EXPECT_THROW(Grid::build({AxisSpec{0.0, 1.0, 3, Boundary::periodic}}), InvalidArgument);
  EXPECT_THROW(Grid::build({AxisSpec{1.0, 1.0, 8, Boundary::neumann}}), InvalidArgument);
  EXPECT_THROW(Grid::build({AxisSpec{1.0, 0.0, 8, Boundary::dirichlet}}), InvalidArgument);
}

TEST(Grid, InnerProductExamples) {
  const double pi = std::numbers::pi;
  auto g = posikit::testing::periodic_1d(4);
  Field s = Field::sample(*g, [](double x, double) { return std::sin(x); });
  EXPECT_NEAR(inner(s, s, *g), pi, 1e-14);
  EXPECT_EQ(inner(s, Field(*g), *g), 0.0);
  EXPECT_EQ(norm(Field(*g), *g), 0.0);

  // u = [2, 4] with weights 1/2 on the two interior nodes of a Dirichlet grid.
  auto d = posikit::testing::bounded_1d(4, 0.0, 2.0, Boundary::dirichlet);
  Field u(*d, {0.0, 2.0, 4.0, 0.0, 0.0});
  Field one(*d, {0.0, 1.0, 1.0, 0.0, 0.0});
  // Three interior nodes at weight 0.5 each; the third holds zero.
  EXPECT_DOUBLE_EQ(inner(u, one, *d), 3.0);

  auto m = posikit::testing::bounded_1d(4, 0.0, 4.0, Boundary::dirichlet);
  EXPECT_DOUBLE_EQ(mass(Field(*m, {0.0, 1.0, 1.0, 1.0, 0.0}), *m), 3.0);
}

TEST(Grid, InnerIsSymmetricBilinearAndPositive) {
  std::mt19937_64 rng(7);
  auto g = Grid::build({AxisSpec{0.0, 1.0, 9, Boundary::neumann}, AxisSpec{0.0, 2.0, 6, Boundary::dirichlet}});
  for (int trial = 0; trial < 20; ++trial) {
    Field u = random_field(*g, rng);
    Field v = random_field(*g, rng);
    Field w = random_field(*g, rng);
    const double a = 0.37;
    EXPECT_NEAR(inner(u, v, *g), inner(v, u, *g), 1e-14);
    Field lin = u;
    lin.axpy(a, w);
    EXPECT_NEAR(inner(lin, v, *g), inner(u, v, *g) + a * inner(w, v, *g), 1e-13);
    EXPECT_GT(inner(u, u, *g), 0.0);
  }
}

TEST(Grid, Pythagoras) {
  auto g = posikit::testing::periodic_1d(8);
  Field s = Field::sample(*g, [](double x, double) { return std::sin(x); });
  Field c = Field::sample(*g, [](double x, double) { return std::cos(2 * x); });
  ASSERT_NEAR(inner(s, c, *g), 0.0, 1e-14);
  EXPECT_NEAR(norm_squared(s, *g) + norm_squared(c, *g), norm_squared(s + c, *g), 1e-13);
}

TEST(Grid, MismatchedGridsRejected) {
  auto a = posikit::testing::periodic_1d(8);
  auto b = posikit::testing::periodic_1d(8);
  EXPECT_THROW(inner(Field(*a), Field(*b), *a), InvalidArgument);
}

TEST(Grid, SnapshotRoundTrip) {
  std::mt19937_64 rng(3);
  auto g = Grid::build({AxisSpec{0.0, 1.0, 5, Boundary::periodic}, AxisSpec{0.0, 1.0, 4, Boundary::neumann}});
  Field u = random_field(*g, rng);
  std::stringstream ss;
  write_snapshot(ss, u, *g, 0.125);
  const Snapshot snap = read_snapshot(ss);
  ASSERT_EQ(snap.shape, (std::vector<int>{5, 5}));
  EXPECT_EQ(snap.time, 0.125);
  ASSERT_EQ(snap.values.size(), u.size());
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(snap.values[i], u[i]);
}
