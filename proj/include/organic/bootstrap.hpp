#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "organic/discrete.hpp"
#include "organic/parametric.hpp"
#include "organic/types.hpp"

namespace organic {

enum class Estimator { Parametric, Discrete };

struct BootstrapSummary {
  EffectEstimates point;  // full-data estimate
  int b = 0;              // requested replicate count
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int failures = 0;  // replicates that errored (failures + successes = b)

  EstimandVector se;
  EstimandVector ci_lower;
  EstimandVector ci_upper;

  std::vector<std::string> failure_causes;
};

struct BootstrapOptions {
  Estimator estimator = Estimator::Parametric;
  FitOptions fit;            // used by the parametric estimator
  DiscreteOptions discrete;  // used by the discrete estimator
  /// Error out when more than this fraction of replicates fails.
  double max_failure_fraction = 0.10;
};

/// Unit bootstrap: b resamples of size n with replacement, re-estimating
/// the effects on each. Replicate r draws from the stream (seed, r), and
/// the summary reduces replicates in index order, so the result is a pure
/// function of the inputs regardless of execution order.
///
/// se is the sample standard deviation across successful replicates;
/// intervals are the empirical (alpha/2, 1 - alpha/2) quantiles with
/// linear interpolation between order statistics.
///
/// Replicates that error (a resample losing an arm, a degenerate design,
/// an identification gap) are skipped and counted; more than
/// max_failure_fraction of b failing throws TooManyFailures.
BootstrapSummary bootstrap_effects(const Dataset& dataset, const FeatureSpec& spec, int b,
                                   double alpha, std::uint64_t seed,
                                   const BootstrapOptions& options = {});

}  // namespace organic
