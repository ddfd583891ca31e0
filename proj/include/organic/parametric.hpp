#pragma once

#include <string>
#include <vector>

#include "organic/features.hpp"
#include "organic/least_squares.hpp"
#include "organic/types.hpp"

namespace organic {

/// How the mediator regression is fitted.
///  Joint:      one regression m ~ [1, a, c, l, a*c, a*l, c(x)l] on all
///              records, with a common c(x)l coefficient across arms.
///  Stratified: per-arm regressions m ~ [1, c, l, c(x)l]; the shift
///              coefficients are the arm differences of intercept, c and l
///              terms, and beta6 is taken from the control-arm fit.
enum class ShiftFitMode { Joint, Stratified };

struct FitOptions {
  bool strict = false;  // error instead of warn on rank deficiency
  ShiftFitMode shift_mode = ShiftFitMode::Joint;
};

/// Builds the full-interaction mediator design over all records and maps
/// the OLS coefficients into ShiftModelFit by position. Warnings (rank
/// deficiency in default mode, per-arm residual variance ratio outside
/// [0.5, 2]) are appended to *warnings when given.
ShiftModelFit fit_shift_model(const Dataset& dataset, const FitOptions& options = {},
                              std::vector<std::string>* warnings = nullptr);

/// OLS of y on the spec's features over records with a=1.
OutcomeModelFit fit_outcome_model(const Dataset& dataset, const FeatureSpec& spec,
                                  const FitOptions& options = {},
                                  std::vector<std::string>* warnings = nullptr);

/// Sample mean, over records with a=1, of
///   f_theta(m - shift(c, l), l, c).
/// Throws EmptyArm when there are no treated records.
double plugin_ey1I(const Dataset& dataset, const ShiftModelFit& shift,
                   const OutcomeModelFit& outcome);

/// Full parametric pipeline: fit both models, evaluate the plug-in for
/// E(Y1^I), and take arm means for E(Y0) and E(Y1).
EffectEstimates estimate_effects(const Dataset& dataset, const FeatureSpec& spec,
                                 const FitOptions& options = {},
                                 std::vector<std::string>* warnings = nullptr);

}  // namespace organic
