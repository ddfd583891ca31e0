#include <doctest.h>

#include <cmath>

#include "organic/bootstrap.hpp"
#include "organic/errors.hpp"
#include "organic/rng.hpp"
#include "test_util.hpp"

using namespace organic;
using test_util::dataset;
using test_util::record;

namespace {

Dataset two_point_dataset() {
  Dataset data;
  data.k = 0;
  data.p = 0;
  for (int i = 0; i < 6; ++i) data.records.push_back(record(0, {}, {}, 1.0, 2.0));
  for (int i = 0; i < 6; ++i) data.records.push_back(record(1, {}, {}, 3.0, 5.0));
  return data;
}

bool same_vector(const EstimandVector& a, const EstimandVector& b) {
  return a.ey0 == b.ey0 && a.ey1 == b.ey1 && a.ey1I == b.ey1I &&
         a.organic_direct == b.organic_direct && a.organic_indirect == b.organic_indirect;
}

}  // namespace

TEST_CASE("resampling a two-point population collapses se and intervals") {
  const FeatureSpec spec = parse_feature_spec("1,m", 0, 0);
  const BootstrapSummary summary = bootstrap_effects(two_point_dataset(), spec, 60, 0.05, 9);
  // arm means of exactly representable values collapse bitwise; the plug-in
  // passes through least squares, which rounds differently per resample arm
  // count, so those collapse only to machine epsilon
  CHECK(summary.se.ey0 == 0.0);
  CHECK(summary.se.ey1 == 0.0);
  CHECK(summary.ci_lower.ey0 == summary.point.ey0);
  CHECK(summary.ci_upper.ey0 == summary.point.ey0);
  CHECK(summary.ci_lower.ey1 == summary.point.ey1);
  CHECK(summary.ci_upper.ey1 == summary.point.ey1);
  CHECK(summary.se.ey1I <= 1e-13);
  CHECK(std::abs(summary.ci_lower.ey1I - summary.point.ey1I) <= 1e-13);
  CHECK(std::abs(summary.ci_upper.ey1I - summary.point.ey1I) <= 1e-13);
  CHECK(std::abs(summary.ci_lower.organic_direct - summary.point.organic_direct) <= 1e-13);
  CHECK(std::abs(summary.ci_upper.organic_direct - summary.point.organic_direct) <= 1e-13);
  CHECK(summary.failures + (summary.b - summary.failures) == summary.b);
}

TEST_CASE("identical inputs and seed reproduce the summary bitwise") {
  Rng rng(81, 0);
  const Dataset data = test_util::random_continuous_dataset(rng, 120, 1, 1);
  const FeatureSpec spec = default_feature_spec(1, 1);
  const BootstrapSummary a = bootstrap_effects(data, spec, 40, 0.05, 123);
  const BootstrapSummary b = bootstrap_effects(data, spec, 40, 0.05, 123);
  CHECK(a.point.ey1I == b.point.ey1I);
  CHECK(same_vector(a.se, b.se));
  CHECK(same_vector(a.ci_lower, b.ci_lower));
  CHECK(same_vector(a.ci_upper, b.ci_upper));
  CHECK(a.failures == b.failures);

  const BootstrapSummary c = bootstrap_effects(data, spec, 40, 0.05, 124);
  CHECK(a.se.ey1I != c.se.ey1I);  // a different seed actually resamples differently
}

TEST_CASE("widening the level never narrows the interval on the same replicates") {
  Rng rng(82, 0);
  const Dataset data = test_util::random_continuous_dataset(rng, 150, 1, 1);
  const FeatureSpec spec = default_feature_spec(1, 1);
  const BootstrapSummary narrow = bootstrap_effects(data, spec, 80, 0.05, 7);
  const BootstrapSummary wide = bootstrap_effects(data, spec, 80, 0.01, 7);
  CHECK(wide.ci_lower.organic_direct <= narrow.ci_lower.organic_direct);
  CHECK(wide.ci_upper.organic_direct >= narrow.ci_upper.organic_direct);
  CHECK(wide.ci_lower.ey1I <= narrow.ci_lower.ey1I);
  CHECK(wide.ci_upper.ey1I >= narrow.ci_upper.ey1I);
}

namespace {

// two treated rows among six: resamples frequently keep fewer than the two
// treated records the outcome fit needs, or none at all
Dataset fragile_dataset() {
  return dataset(0, 0,
                 {record(0, {}, {}, 1.0, 1.0), record(0, {}, {}, 2.0, 2.0),
                  record(0, {}, {}, 1.5, 1.2), record(0, {}, {}, 2.5, 2.2),
                  record(1, {}, {}, 3.0, 3.0), record(1, {}, {}, 3.5, 3.3)});
}

}  // namespace

TEST_CASE("losing an arm too often raises TooManyFailures") {
  const FeatureSpec spec = parse_feature_spec("1", 0, 0);
  CHECK_THROWS_AS(bootstrap_effects(fragile_dataset(), spec, 100, 0.05, 5), TooManyFailures);
}

TEST_CASE("failures are counted and recorded with causes") {
  const FeatureSpec spec = parse_feature_spec("1", 0, 0);
  BootstrapOptions options;
  options.max_failure_fraction = 1.0;  // tolerate everything so bookkeeping is observable
  const BootstrapSummary summary = bootstrap_effects(fragile_dataset(), spec, 100, 0.05, 5, options);
  CHECK(summary.failures > 0);
  CHECK(summary.failures < 100);
  CHECK(summary.failure_causes.size() == static_cast<std::size_t>(summary.failures));
}

TEST_CASE("input validation is typed") {
  const Dataset data = two_point_dataset();
  const FeatureSpec spec = parse_feature_spec("1,m", 0, 0);
  CHECK_THROWS_AS(bootstrap_effects(data, spec, 1, 0.05, 1), InvalidArgument);
  CHECK_THROWS_AS(bootstrap_effects(data, spec, 10, 0.0, 1), InvalidArgument);
  CHECK_THROWS_AS(bootstrap_effects(data, spec, 10, 1.0, 1), InvalidArgument);
}

TEST_CASE("the exact engine can be bootstrapped behind the same operation") {
  Rng rng(83, 0);
  // replicate every cell enough that resamples keep positivity
  const Dataset base = test_util::random_binary_dataset(rng, 0, 24);
  Dataset data = base;
  for (int copy = 1; copy < 10; ++copy) {
    for (const auto& rec : base.records) data.records.push_back(rec);
  }
  BootstrapOptions options;
  options.estimator = Estimator::Discrete;
  const BootstrapSummary summary = bootstrap_effects(data, {}, 50, 0.05, 11, options);
  const EffectEstimates direct = identify_effects(data);
  CHECK(summary.point.ey1I == direct.ey1I);
  CHECK(summary.se.ey1I >= 0.0);
  CHECK(summary.ci_lower.ey1I <= summary.ci_upper.ey1I);
}
