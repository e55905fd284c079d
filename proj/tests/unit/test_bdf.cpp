#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "posikit/bdf.hpp"
#include "posikit/error.hpp"

using namespace posikit;

TEST(Bdf, PaperTableaux) {
  const auto t1 = bdf_tableau(1);
  EXPECT_EQ(t1.alpha, 1.0);
  EXPECT_EQ(t1.a, (std::vector<double>{1.0}));
  EXPECT_TRUE(t1.b.empty());

  const auto t2 = bdf_tableau(2);
  EXPECT_EQ(t2.alpha, 1.5);
  EXPECT_EQ(t2.a, (std::vector<double>{2.0, -0.5}));
  EXPECT_EQ(t2.b, (std::vector<double>{1.0}));

  const auto t3 = bdf_tableau(3);
  EXPECT_DOUBLE_EQ(t3.alpha, 11.0 / 6.0);
  EXPECT_EQ(t3.b, (std::vector<double>{2.0, -1.0}));

  const auto t4 = bdf_tableau(4);
  EXPECT_DOUBLE_EQ(t4.alpha, 25.0 / 12.0);
  ASSERT_EQ(t4.a.size(), 4u);
  EXPECT_DOUBLE_EQ(t4.a[0], 4.0);
  EXPECT_DOUBLE_EQ(t4.a[1], -3.0);
  EXPECT_DOUBLE_EQ(t4.a[2], 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(t4.a[3], -0.25);
  EXPECT_EQ(t4.b, (std::vector<double>{3.0, -3.0, 1.0}));
}

TEST(Bdf, Consistency) {
  for (int k = 1; k <= 4; ++k) {
    const auto t = bdf_tableau(k);
    EXPECT_NEAR(std::accumulate(t.a.begin(), t.a.end(), 0.0), t.alpha, 1e-15) << k;
    EXPECT_NEAR(std::accumulate(t.b.begin(), t.b.end(), 0.0), k == 1 ? 0.0 : 1.0, 1e-15) << k;
  }
}

TEST(Bdf, ExactOnPolynomials) {
  // alpha p(t_{n+1}) - sum a_i p(t_{n-i}) = dt p'(t_{n+1}) for deg p <= k, and
  // B_{k-1} reproduces p(t_{n+1}) for deg p <= k - 2.
  const double dt = 0.3;
  const double tn1 = 1.7;
  for (int k = 1; k <= 4; ++k) {
    const auto t = bdf_tableau(k);
    for (int deg = 0; deg <= k; ++deg) {
      auto p = [deg](double s) { return std::pow(s, deg); };
      auto dp = [deg](double s) { return deg == 0 ? 0.0 : deg * std::pow(s, deg - 1); };
      double lhs = t.alpha * p(tn1);
      for (std::size_t i = 0; i < t.a.size(); ++i) lhs -= t.a[i] * p(tn1 - dt * static_cast<double>(i + 1));
      EXPECT_NEAR(lhs, dt * dp(tn1), 1e-12) << "k=" << k << " deg=" << deg;
    }
    for (int deg = 0; deg + 2 <= k; ++deg) {
      double ext = 0.0;
      for (std::size_t i = 0; i < t.b.size(); ++i) {
        ext += t.b[i] * std::pow(tn1 - dt * static_cast<double>(i + 1), deg);
      }
      EXPECT_NEAR(ext, std::pow(tn1, deg), 1e-12) << "k=" << k << " deg=" << deg;
    }
  }
}

TEST(Bdf, RejectsOrderOutOfRange) {
  EXPECT_THROW(bdf_tableau(0), InvalidArgument);
  EXPECT_THROW(bdf_tableau(5), InvalidArgument);
}

TEST(Bdf, ScalarCombine) {
  const std::vector<double> coeffs{2.0, -0.5};
  const std::vector<double> levels{3.0, 4.0, 100.0};
  EXPECT_EQ(combine(coeffs, levels), 4.0);
}
