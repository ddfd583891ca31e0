#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "organic/types.hpp"

namespace organic {

/// Structural-model coefficients for the generator. The topology is fixed:
/// C is exogenous, L depends on (A, C), M on (A, C, L), Y on (A, C, L, M).
///
/// With discretize set, C, L and M are thresholded to {0, 1} as they are
/// generated, and every downstream equation consumes the thresholded
/// values, so the binary variables themselves follow the same topology.
struct ScmSpec {
  Index k = 0;
  Index p = 0;
  double treat_prob = 0.5;

  Vector c_mean;  // k
  Vector c_sd;    // k

  Vector l_intercept;  // p
  Vector l_a_effect;   // p
  Matrix l_c_effect;   // p x k
  Vector l_noise_sd;   // p

  double m_beta0 = 0.0;
  double m_beta1 = 0.0;
  Vector m_beta2;  // k
  Vector m_beta3;  // p
  Vector m_beta4;  // k
  Vector m_beta5;  // p
  Matrix m_beta6;  // k x p
  double m_noise_sd = 0.0;

  double y_gamma0 = 0.0;
  double y_gamma_a = 0.0;
  double y_gamma_m = 0.0;
  Vector y_gamma_l;  // p
  Vector y_gamma_c;  // k
  double y_gamma_am = 0.0;
  Vector y_gamma_ml;  // p
  Vector y_gamma_mc;  // k
  double y_noise_sd = 0.0;

  bool discretize = false;
  Vector c_threshold;  // k
  Vector l_threshold;  // p
  double m_threshold = 0.0;

  /// Throws InvalidArgument on dimension mismatches, non-finite
  /// coefficients, negative noise sds, or treat_prob outside (0, 1).
  void validate() const;

  /// Zero coefficients everywhere, defaulted dimensions; a convenient
  /// starting point for building specs in code.
  static ScmSpec zeros(Index k, Index p);
};

/// All potential outcomes of one unit, plus the assigned arm. Within a
/// unit, l0/l1 share the L noise, m0/m1 share the M noise and y0/y1 share
/// the Y noise; m1I uses a fresh mediator noise draw and y1I reuses the
/// unit's Y noise.
struct CounterfactualDraw {
  Vector c;
  Vector l0, l1;
  double m0 = 0.0, m1 = 0.0, m1I = 0.0;
  double y0 = 0.0, y1 = 0.0, y1I = 0.0;
  int a = 0;

  /// The observed record of this unit: (l1, m1, y1) if a=1, else
  /// (l0, m0, y0).
  ObservedRecord observed() const;
};

/// n i.i.d. units; unit i is generated from the stream (seed, i), so the
/// output is a pure function of (spec, n, seed).
std::vector<CounterfactualDraw> draw_counterfactuals(const ScmSpec& spec, Index n,
                                                     std::uint64_t seed);

/// Projects draw_counterfactuals through the observed() mapping.
Dataset simulate_observed(const ScmSpec& spec, Index n, std::uint64_t seed);

struct OracleEffects {
  EffectEstimates effects;
  EstimandVector mc_se;  // sd / sqrt(n) per estimand
  Index n = 0;
};

/// Direct Monte Carlo means of y0, y1, y1I over counterfactual draws, with
/// per-estimand standard errors. The difference estimands use the paired
/// per-unit differences, which the shared-noise coupling makes tight.
OracleEffects oracle_effects(const ScmSpec& spec, Index n, std::uint64_t seed);

/// Exact expectations by linearity for the no-interaction subfamily
/// (beta4 = beta5 = beta6 = 0, no y interactions, no discretization).
/// Returns nullopt for specs outside the subfamily.
std::optional<EffectEstimates> closed_form_effects(const ScmSpec& spec);

}  // namespace organic
