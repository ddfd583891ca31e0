#include <doctest.h>

#include <cmath>

#include "organic/errors.hpp"
#include "organic/least_squares.hpp"
#include "organic/rng.hpp"
#include "test_util.hpp"

using namespace organic;

namespace {

DesignMatrix make_design(const Matrix& entries) {
  DesignMatrix design;
  design.entries = entries;
  for (Index c = 0; c < entries.cols(); ++c) {
    design.column_labels.push_back("x" + std::to_string(c));
  }
  return design;
}

}  // namespace

TEST_CASE("intercept-only fit returns the mean and the textbook residual sd") {
  const DesignMatrix design = make_design(Matrix::Ones(4, 1));
  Vector y(4);
  y << 1, 2, 3, 4;
  const auto fit = least_squares(design, y);
  CHECK(fit.rank_ok);
  CHECK(fit.coefficients[0] == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(fit.residual_sd == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("a response in the column span fits with zero residual sd") {
  Rng rng(3, 0);
  Matrix x(10, 3);
  for (Index r = 0; r < 10; ++r) {
    for (Index c = 0; c < 3; ++c) x(r, c) = rng.next_gaussian();
  }
  Vector beta(3);
  beta << 2.0, -1.0, 0.5;
  const Vector y = x * beta;
  const auto fit = least_squares(make_design(x), y);
  CHECK((fit.coefficients - beta).lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK(fit.residual_sd < 1e-10);
}

TEST_CASE("coefficients agree with the normal-equations route on a random instance") {
  Rng rng(5, 0);
  Matrix x(200, 5);
  x.col(0).setOnes();
  for (Index r = 0; r < 200; ++r) {
    for (Index c = 1; c < 5; ++c) x(r, c) = rng.next_gaussian();
  }
  Vector y(200);
  for (Index r = 0; r < 200; ++r) {
    y[r] = 1.0 + 0.5 * x(r, 1) - 2.0 * x(r, 2) + 0.1 * x(r, 3) + rng.next_gaussian();
  }
  const auto fit = least_squares(make_design(x), y);
  const auto oracle = test_util::normal_equations(x, y);
  CHECK((fit.coefficients - oracle.coefficients).norm() / oracle.coefficients.norm() < 1e-8);
  CHECK(fit.residual_sd == doctest::Approx(oracle.residual_sd).epsilon(1e-10));
}

TEST_CASE("residuals are orthogonal to the columns") {
  Rng rng(9, 0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix x(60, 4);
    x.col(0).setOnes();
    for (Index r = 0; r < 60; ++r) {
      for (Index c = 1; c < 4; ++c) x(r, c) = rng.next_gaussian();
    }
    Vector y(60);
    for (Index r = 0; r < 60; ++r) y[r] = rng.next_gaussian() * 3.0;
    const auto fit = least_squares(make_design(x), y);
    const Vector residuals = y - x * fit.coefficients;
    const double scale =
        x.colwise().norm().maxCoeff() * std::max(1.0, y.norm());
    CHECK((x.transpose() * residuals).lpNorm<Eigen::Infinity>() <= 1e-6 * scale);
  }
}

TEST_CASE("a duplicated column flags rank_ok and yields the minimum-norm solution") {
  Matrix x(6, 2);
  x.col(0) << 1, 1, 1, 1, 1, 1;
  x.col(1) = x.col(0);
  Vector y(6);
  y << 4, 4, 4, 4, 4, 4;
  const auto fit = least_squares(make_design(x), y);
  CHECK_FALSE(fit.rank_ok);
  CHECK(fit.rank == 1);
  // minimum-norm split of the intercept across the two identical columns
  CHECK(fit.coefficients[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.coefficients[1] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("dimension and shape errors are typed") {
  const DesignMatrix design = make_design(Matrix::Ones(3, 2));
  CHECK_THROWS_AS(least_squares(design, Vector::Ones(4)), DimensionMismatch);
  const DesignMatrix wide = make_design(Matrix::Ones(2, 3));
  CHECK_THROWS_AS(least_squares(wide, Vector::Ones(2)), DegenerateDesign);
}
