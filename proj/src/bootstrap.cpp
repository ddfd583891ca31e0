#include "organic/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "organic/errors.hpp"
#include "organic/rng.hpp"

namespace organic {

namespace {

double quantile(std::vector<double> sorted, double q) {
  // linear interpolation between order statistics
  const std::size_t n = sorted.size();
  const double h = q * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double w = h - std::floor(h);
  return sorted[lo] * (1.0 - w) + sorted[hi] * w;
}

double sample_sd(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  std::vector<double> copy = values;
  const double mean = sorted_mean(copy);
  std::vector<double> sq;
  sq.reserve(n);
  for (double v : values) sq.push_back((v - mean) * (v - mean));
  return std::sqrt(sorted_sum(std::move(sq)) / static_cast<double>(n - 1));
}

struct ReplicateSeries {
  std::vector<double> ey0, ey1, ey1I, organic_direct, organic_indirect;

  void push(const EffectEstimates& e) {
    ey0.push_back(e.ey0);
    ey1.push_back(e.ey1);
    ey1I.push_back(e.ey1I);
    organic_direct.push_back(e.organic_direct);
    organic_indirect.push_back(e.organic_indirect);
  }
};

}  // namespace

BootstrapSummary bootstrap_effects(const Dataset& dataset, const FeatureSpec& spec, int b,
                                   double alpha, std::uint64_t seed,
                                   const BootstrapOptions& options) {
  if (b < 2) throw InvalidArgument("bootstrap needs b >= 2 replicates");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  require_valid(dataset);

  const auto estimate = [&](const Dataset& data) -> EffectEstimates {
    if (options.estimator == Estimator::Parametric) {
      return estimate_effects(data, spec, options.fit, nullptr);
    }
    return identify_effects(data, options.discrete);
  };

  BootstrapSummary summary;
  summary.point = estimate(dataset);
  summary.b = b;
  summary.alpha = alpha;
  summary.seed = seed;

  const std::size_t n = dataset.records.size();
  ReplicateSeries series;
  Dataset resample = dataset;  // buffers reused across replicates
  for (int r = 0; r < b; ++r) {
    Rng rng(seed, static_cast<std::uint64_t>(r));
    for (std::size_t i = 0; i < n; ++i) {
      resample.records[i] = dataset.records[rng.next_below(n)];
    }
    try {
      series.push(estimate(resample));
    } catch (const Error& e) {
      ++summary.failures;
      summary.failure_causes.push_back("replicate " + std::to_string(r) + ": " + e.what());
    }
  }

  if (static_cast<double>(summary.failures) > options.max_failure_fraction * b ||
      series.ey0.empty()) {
    std::string detail = summary.failure_causes.empty() ? "" : " (" + summary.failure_causes.front() + ")";
    throw TooManyFailures(std::to_string(summary.failures) + " of " + std::to_string(b) +
                          " bootstrap replicates failed" + detail);
  }

  const auto reduce = [&](std::vector<double>& values, double& se, double& lo, double& hi) {
    se = sample_sd(values);
    std::sort(values.begin(), values.end());
    lo = quantile(values, alpha / 2.0);
    hi = quantile(values, 1.0 - alpha / 2.0);
  };
  reduce(series.ey0, summary.se.ey0, summary.ci_lower.ey0, summary.ci_upper.ey0);
  reduce(series.ey1, summary.se.ey1, summary.ci_lower.ey1, summary.ci_upper.ey1);
  reduce(series.ey1I, summary.se.ey1I, summary.ci_lower.ey1I, summary.ci_upper.ey1I);
  reduce(series.organic_direct, summary.se.organic_direct, summary.ci_lower.organic_direct,
         summary.ci_upper.organic_direct);
  reduce(series.organic_indirect, summary.se.organic_indirect, summary.ci_lower.organic_indirect,
         summary.ci_upper.organic_indirect);
  return summary;
}

}  // namespace organic
