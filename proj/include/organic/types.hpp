#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace organic {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// One observational unit: binary treatment a, pre-treatment covariates c,
/// post-treatment covariates l, mediator m, outcome y.
struct ObservedRecord {
  int a = 0;
  Vector c;
  Vector l;
  double m = 0.0;
  double y = 0.0;
};

/// An ordered collection of records with fixed covariate dimensions.
/// k = dim(c), p = dim(l); either may be zero.
struct Dataset {
  std::vector<ObservedRecord> records;
  Index k = 0;
  Index p = 0;

  Index n() const { return static_cast<Index>(records.size()); }
  Index arm_count(int a) const;
  double arm_mean_y(int a) const;
};

/// Result of validate_dataset: ok iff no violations were found.
struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string joined() const;
};

/// Checks every Dataset invariant and reports all violations:
/// non-binary a, non-finite values, dimension mismatches, missing arm.
ValidationReport validate_dataset(const Dataset& dataset);

/// Throws ValidationError if the dataset is not valid.
void require_valid(const Dataset& dataset);

/// Coefficients of the mediator regression
///   m ~ beta0 + beta1 a + beta2.c + beta3.l + beta4.(a c) + beta5.(a l)
///       + sum_ij beta6(i,j) c_i l_j + eps,
/// where eps has standard deviation residual_sd.
struct ShiftModelFit {
  double beta0 = 0.0;
  double beta1 = 0.0;
  Vector beta2;  // k
  Vector beta3;  // p
  Vector beta4;  // k
  Vector beta5;  // p
  Matrix beta6;  // k x p
  double residual_sd = 0.0;

  /// Mediator shift between arms at (c, l): beta1 + beta4.c + beta5.l.
  double shift(const Vector& c, const Vector& l) const {
    return beta1 + beta4.dot(c) + beta5.dot(l);
  }
};

/// Point estimates of the three mean potential outcomes and the
/// direct/indirect decomposition. Construct via from_means so that
///   organic_direct   = ey1I - ey0   and
///   organic_indirect = ey1  - ey1I
/// hold as exact arithmetic identities of the stored fields.
struct EffectEstimates {
  double ey0 = 0.0;
  double ey1 = 0.0;
  double ey1I = 0.0;
  double organic_direct = 0.0;
  double organic_indirect = 0.0;

  static EffectEstimates from_means(double ey0, double ey1, double ey1I) {
    EffectEstimates e;
    e.ey0 = ey0;
    e.ey1 = ey1;
    e.ey1I = ey1I;
    e.organic_direct = ey1I - ey0;
    e.organic_indirect = ey1 - ey1I;
    return e;
  }
};

/// One number per estimand, with no identities imposed. Used for standard
/// errors and interval endpoints, where the decomposition identity of
/// EffectEstimates does not apply.
struct EstimandVector {
  double ey0 = 0.0;
  double ey1 = 0.0;
  double ey1I = 0.0;
  double organic_direct = 0.0;
  double organic_indirect = 0.0;
};

/// Sum of v accumulated in ascending value order. Makes reductions
/// invariant to the order the inputs arrived in.
double sorted_sum(std::vector<double> v);

/// sorted_sum(v) / v.size(); throws InvalidArgument on empty input.
double sorted_mean(std::vector<double> v);

}  // namespace organic
