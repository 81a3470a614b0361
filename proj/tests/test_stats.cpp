#include <gtest/gtest.h>

#include <vector>

#include "ecm/error.hpp"
#include "ecm/stats.hpp"

using namespace ecm;

// Reference values below come from scipy.stats (mannwhitneyu with
// method='asymptotic', linregress).

TEST(Stats, MeanAndSampleSd) {
  const std::vector<double> xs{2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_DOUBLE_EQ(mean(xs), 5.0);
  EXPECT_NEAR(stddev(xs), 2.138089935299395, 1e-12);
  EXPECT_EQ(stddev(std::vector<double>{3.0}), 0.0);
  EXPECT_EQ(mean(std::vector<double>{}), 0.0);
}

TEST(Stats, LinearFit) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{2.1, 3.9, 6.2, 7.8, 10.1};
  const auto fit = linear_fit(x, y);
  EXPECT_NEAR(fit.slope, 1.99, 1e-12);
  EXPECT_NEAR(fit.intercept, 0.05, 1e-12);
  EXPECT_NEAR(fit.r_squared, 0.9986517555689656 * 0.9986517555689656, 1e-12);

  const std::vector<double> exact_y{1, 3, 5, 7, 9};
  EXPECT_NEAR(linear_fit(x, exact_y).r_squared, 1.0, 1e-15);
}

TEST(Stats, LinearFitRejectsDegenerateX) {
  EXPECT_THROW(linear_fit(std::vector<double>{3}, std::vector<double>{1}), ParameterError);
  EXPECT_THROW(linear_fit(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}), ParameterError);
  EXPECT_THROW(linear_fit(std::vector<double>{1, 2}, std::vector<double>{1}), ParameterError);
}

TEST(Stats, MannWhitneyReferenceValues) {
  auto r = mann_whitney(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6});
  EXPECT_DOUBLE_EQ(r.u, 0.0);
  EXPECT_NEAR(r.p_value, 0.08085559837005224, 1e-9);
  EXPECT_LT(r.z, 0.0);

  r = mann_whitney(std::vector<double>{1, 2, 2, 3, 5}, std::vector<double>{2, 3, 4, 4, 6, 7});
  EXPECT_DOUBLE_EQ(r.u, 6.5);
  EXPECT_NEAR(r.p_value, 0.13862587987892763, 1e-9);

  r = mann_whitney(std::vector<double>{3.1, 1.2, 5.5, 4.4, 2.0, 6.1, 7.7},
                   std::vector<double>{0.5, 1.1, 2.2, 0.9, 3.3});
  EXPECT_DOUBLE_EQ(r.u, 30.0);
  EXPECT_NEAR(r.p_value, 0.05131990358807116, 1e-9);
  EXPECT_GT(r.z, 0.0);
}

TEST(Stats, MannWhitneyDegenerateAndSymmetric) {
  const auto same = mann_whitney(std::vector<double>{1, 1, 1}, std::vector<double>{1, 1});
  EXPECT_EQ(same.p_value, 1.0);
  EXPECT_THROW(mann_whitney(std::vector<double>{}, std::vector<double>{1}), ParameterError);

  const std::vector<double> a{1, 4, 2, 8}, b{3, 5, 7};
  const auto ab = mann_whitney(a, b), ba = mann_whitney(b, a);
  EXPECT_DOUBLE_EQ(ab.u + ba.u, double(a.size() * b.size()));
  EXPECT_NEAR(ab.p_value, ba.p_value, 1e-15);
  EXPECT_NEAR(ab.z, -ba.z, 1e-15);
}
