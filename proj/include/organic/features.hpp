#pragma once

#include <string>
#include <vector>

#include "organic/types.hpp"

namespace organic {

/// One regressor over (m, l, c): the constant, a linear term, or one of the
/// pairwise products m*l_j, m*c_i, c_i*l_j.
struct Feature {
  enum class Kind { Constant, M, L, C, MxL, MxC, CxL };

  Kind kind = Kind::Constant;
  Index i = -1;  // index into c for C, MxC, CxL
  Index j = -1;  // index into l for L, MxL, CxL

  double eval(double m, const Vector& l, const Vector& c) const;
  std::string label() const;  // "1", "m", "l1", "c2", "m*l1", "c1*l2"
};

using FeatureSpec = std::vector<Feature>;

/// [1, m, l1..lp, c1..ck, m*l1..m*lp, m*c1..m*ck] -- the default regressors
/// of the treated-arm outcome model.
FeatureSpec default_feature_spec(Index k, Index p);

/// Parses a comma-separated list of feature labels ("1,m,l1,c1,m*l1").
/// Throws ParseError on unknown tokens, InvalidArgument on duplicates or
/// out-of-range indices.
FeatureSpec parse_feature_spec(const std::string& text, Index k, Index p);

std::string feature_spec_label(const FeatureSpec& spec);

/// Fitted treated-arm outcome model: E[y | m, l, c, a=1] = f_theta(m, l, c)
/// with f_theta linear in the features.
struct OutcomeModelFit {
  FeatureSpec feature_spec;
  Vector theta;

  double evaluate(double m, const Vector& l, const Vector& c) const;
};

}  // namespace organic
