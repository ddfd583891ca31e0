#include "organic/parametric.hpp"

#include <cmath>

#include "organic/errors.hpp"

namespace organic {

namespace {

// [1, a, c1..ck, l1..lp, a*c1.., a*l1.., c1*l1, c1*l2, ..., ck*lp]
DesignMatrix shift_design(const Dataset& dataset) {
  const Index k = dataset.k, p = dataset.p, n = dataset.n();
  const Index q = 2 + 2 * k + 2 * p + k * p;
  DesignMatrix design;
  design.entries.resize(n, q);
  design.column_labels.reserve(q);
  design.column_labels.push_back("1");
  design.column_labels.push_back("a");
  for (Index i = 0; i < k; ++i) design.column_labels.push_back("c" + std::to_string(i + 1));
  for (Index j = 0; j < p; ++j) design.column_labels.push_back("l" + std::to_string(j + 1));
  for (Index i = 0; i < k; ++i) design.column_labels.push_back("a*c" + std::to_string(i + 1));
  for (Index j = 0; j < p; ++j) design.column_labels.push_back("a*l" + std::to_string(j + 1));
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < p; ++j) {
      design.column_labels.push_back("c" + std::to_string(i + 1) + "*l" + std::to_string(j + 1));
    }
  }
  for (Index r = 0; r < n; ++r) {
    const ObservedRecord& rec = dataset.records[r];
    const double a = static_cast<double>(rec.a);
    Index col = 0;
    design.entries(r, col++) = 1.0;
    design.entries(r, col++) = a;
    for (Index i = 0; i < k; ++i) design.entries(r, col++) = rec.c[i];
    for (Index j = 0; j < p; ++j) design.entries(r, col++) = rec.l[j];
    for (Index i = 0; i < k; ++i) design.entries(r, col++) = a * rec.c[i];
    for (Index j = 0; j < p; ++j) design.entries(r, col++) = a * rec.l[j];
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < p; ++j) design.entries(r, col++) = rec.c[i] * rec.l[j];
    }
  }
  return design;
}

// [1, c1..ck, l1..lp, c1*l1, ..., ck*lp] over one arm
DesignMatrix arm_design(const Dataset& dataset, int arm, Vector* m_out) {
  const Index k = dataset.k, p = dataset.p;
  std::vector<const ObservedRecord*> rows;
  for (const auto& rec : dataset.records) {
    if (rec.a == arm) rows.push_back(&rec);
  }
  const Index n = static_cast<Index>(rows.size());
  const Index q = 1 + k + p + k * p;
  DesignMatrix design;
  design.entries.resize(n, q);
  design.column_labels.push_back("1");
  for (Index i = 0; i < k; ++i) design.column_labels.push_back("c" + std::to_string(i + 1));
  for (Index j = 0; j < p; ++j) design.column_labels.push_back("l" + std::to_string(j + 1));
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < p; ++j) {
      design.column_labels.push_back("c" + std::to_string(i + 1) + "*l" + std::to_string(j + 1));
    }
  }
  m_out->resize(n);
  for (Index r = 0; r < n; ++r) {
    const ObservedRecord& rec = *rows[r];
    Index col = 0;
    design.entries(r, col++) = 1.0;
    for (Index i = 0; i < k; ++i) design.entries(r, col++) = rec.c[i];
    for (Index j = 0; j < p; ++j) design.entries(r, col++) = rec.l[j];
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < p; ++j) design.entries(r, col++) = rec.c[i] * rec.l[j];
    }
    (*m_out)[r] = rec.m;
  }
  return design;
}

void warn(std::vector<std::string>* warnings, const std::string& message) {
  if (warnings != nullptr) warnings->push_back(message);
}

void handle_rank(const LeastSquaresFit& fit, const std::string& what, bool strict,
                 std::vector<std::string>* warnings) {
  if (fit.rank_ok) return;
  const std::string message =
      what + " design is rank-deficient (effective rank " + std::to_string(fit.rank) +
      " of " + std::to_string(fit.coefficients.size()) + "); using the minimum-norm solution";
  if (strict) throw DegenerateDesign(message);
  warn(warnings, message);
}

ShiftModelFit unpack_joint(const Vector& coef, Index k, Index p, double residual_sd) {
  ShiftModelFit fit;
  Index col = 0;
  fit.beta0 = coef[col++];
  fit.beta1 = coef[col++];
  fit.beta2 = coef.segment(col, k);
  col += k;
  fit.beta3 = coef.segment(col, p);
  col += p;
  fit.beta4 = coef.segment(col, k);
  col += k;
  fit.beta5 = coef.segment(col, p);
  col += p;
  fit.beta6.resize(k, p);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < p; ++j) fit.beta6(i, j) = coef[col++];
  }
  fit.residual_sd = residual_sd;
  return fit;
}

// Per-arm residual variance ratio as a cheap check that the mediator noise
// has the same spread under both arms.
void variance_diagnostic(const Dataset& dataset, const ShiftModelFit& fit,
                         std::vector<std::string>* warnings) {
  double rss[2] = {0.0, 0.0};
  Index count[2] = {0, 0};
  for (const auto& rec : dataset.records) {
    const double mean = fit.beta0 + fit.beta1 * rec.a + fit.beta2.dot(rec.c) +
                        fit.beta3.dot(rec.l) + rec.a * (fit.beta4.dot(rec.c) + fit.beta5.dot(rec.l)) +
                        rec.c.transpose() * fit.beta6 * rec.l;
    const double resid = rec.m - mean;
    rss[rec.a] += resid * resid;
    ++count[rec.a];
  }
  if (count[0] < 2 || count[1] < 2) return;
  const double var0 = rss[0] / static_cast<double>(count[0] - 1);
  const double var1 = rss[1] / static_cast<double>(count[1] - 1);
  if (var0 <= 0.0) return;
  const double ratio = var1 / var0;
  if (ratio < 0.5 || ratio > 2.0) {
    warn(warnings, "mediator residual variance ratio (treated/control) is " +
                       std::to_string(ratio) + ", outside [0.5, 2]");
  }
}

}  // namespace

ShiftModelFit fit_shift_model(const Dataset& dataset, const FitOptions& options,
                              std::vector<std::string>* warnings) {
  require_valid(dataset);
  const Index k = dataset.k, p = dataset.p;
  const Index q = 2 + 2 * k + 2 * p + k * p;
  if (dataset.n() <= q) {
    throw DegenerateDesign("mediator regression needs more than " + std::to_string(q) +
                           " records, got " + std::to_string(dataset.n()));
  }

  ShiftModelFit fit;
  if (options.shift_mode == ShiftFitMode::Joint) {
    const DesignMatrix design = shift_design(dataset);
    Vector m(dataset.n());
    for (Index r = 0; r < dataset.n(); ++r) m[r] = dataset.records[r].m;
    const LeastSquaresFit ls = least_squares(design, m);
    handle_rank(ls, "mediator", options.strict, warnings);
    fit = unpack_joint(ls.coefficients, k, p, ls.residual_sd);
  } else {
    Vector m0, m1;
    const DesignMatrix design0 = arm_design(dataset, 0, &m0);
    const DesignMatrix design1 = arm_design(dataset, 1, &m1);
    const LeastSquaresFit ls0 = least_squares(design0, m0);
    const LeastSquaresFit ls1 = least_squares(design1, m1);
    handle_rank(ls0, "control-arm mediator", options.strict, warnings);
    handle_rank(ls1, "treated-arm mediator", options.strict, warnings);

    const Vector& b0 = ls0.coefficients;
    const Vector& b1 = ls1.coefficients;
    fit.beta0 = b0[0];
    fit.beta1 = b1[0] - b0[0];
    fit.beta2 = b0.segment(1, k);
    fit.beta4 = b1.segment(1, k) - b0.segment(1, k);
    fit.beta3 = b0.segment(1 + k, p);
    fit.beta5 = b1.segment(1 + k, p) - b0.segment(1 + k, p);
    fit.beta6.resize(k, p);
    Index col = 1 + k + p;
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < p; ++j) fit.beta6(i, j) = b0[col++];
    }
    // pooled residual sd across the two arm fits
    const double rss0 = ls0.residual_sd * ls0.residual_sd *
                        std::max<Index>(design0.rows() - design0.cols(), 0);
    const double rss1 = ls1.residual_sd * ls1.residual_sd *
                        std::max<Index>(design1.rows() - design1.cols(), 0);
    const Index df = design0.rows() + design1.rows() - design0.cols() - design1.cols();
    fit.residual_sd = df > 0 ? std::sqrt((rss0 + rss1) / static_cast<double>(df)) : 0.0;
    if (k > 0 && p > 0) {
      warn(warnings,
           "stratified shift fit: c*l coefficients taken from the control arm; any arm "
           "difference in them is not representable in the shift");
    }
  }
  variance_diagnostic(dataset, fit, warnings);
  return fit;
}

OutcomeModelFit fit_outcome_model(const Dataset& dataset, const FeatureSpec& spec,
                                  const FitOptions& options,
                                  std::vector<std::string>* warnings) {
  if (spec.empty()) throw InvalidArgument("empty feature spec");
  std::vector<const ObservedRecord*> treated;
  for (const auto& rec : dataset.records) {
    if (rec.a == 1) treated.push_back(&rec);
  }
  if (treated.empty()) throw EmptyArm("no treated records to fit the outcome model on");
  const Index n = static_cast<Index>(treated.size());
  const Index q = static_cast<Index>(spec.size());
  if (n < q + 1) {
    throw DegenerateDesign("outcome model with " + std::to_string(q) + " features needs at least " +
                           std::to_string(q + 1) + " treated records, got " + std::to_string(n));
  }

  DesignMatrix design;
  design.entries.resize(n, q);
  for (const auto& feature : spec) design.column_labels.push_back(feature.label());
  Vector y(n);
  for (Index r = 0; r < n; ++r) {
    const ObservedRecord& rec = *treated[r];
    for (Index col = 0; col < q; ++col) {
      design.entries(r, col) = spec[static_cast<std::size_t>(col)].eval(rec.m, rec.l, rec.c);
    }
    y[r] = rec.y;
  }
  const LeastSquaresFit ls = least_squares(design, y);
  handle_rank(ls, "outcome", options.strict, warnings);

  OutcomeModelFit fit;
  fit.feature_spec = spec;
  fit.theta = ls.coefficients;
  return fit;
}

double plugin_ey1I(const Dataset& dataset, const ShiftModelFit& shift,
                   const OutcomeModelFit& outcome) {
  std::vector<double> values;
  values.reserve(dataset.records.size());
  for (const auto& rec : dataset.records) {
    if (rec.a != 1) continue;
    values.push_back(outcome.evaluate(rec.m - shift.shift(rec.c, rec.l), rec.l, rec.c));
  }
  if (values.empty()) throw EmptyArm("no treated records to average over");
  return sorted_mean(std::move(values));
}

EffectEstimates estimate_effects(const Dataset& dataset, const FeatureSpec& spec,
                                 const FitOptions& options,
                                 std::vector<std::string>* warnings) {
  require_valid(dataset);
  const ShiftModelFit shift = fit_shift_model(dataset, options, warnings);
  const OutcomeModelFit outcome = fit_outcome_model(dataset, spec, options, warnings);
  const double ey1I = plugin_ey1I(dataset, shift, outcome);
  const double ey1 = dataset.arm_mean_y(1);
  const double ey0 = dataset.arm_mean_y(0);
  return EffectEstimates::from_means(ey0, ey1, ey1I);
}

}  // namespace organic
