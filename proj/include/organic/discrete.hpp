#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "organic/types.hpp"

namespace organic {

/// A point of the covariate support, compared lexicographically.
using CellKey = std::vector<double>;

/// Empirical frequency tables for exact evaluation of the identification
/// sum over finite-support (c, l, m):
///   f_C            from all records,
///   f_{L|C, A=1}   from treated records,
///   f_{M|L,C, A=0} from control records,
///   E[Y|M,L,C,A=1] from treated records.
///
/// Supports are sorted, and every (c, l, m) held in the nested tables has a
/// y_mean entry, so positivity holds by construction.
struct DiscreteLaw {
  std::vector<CellKey> c_support;  // sorted distinct c values
  std::vector<double> c_prob;      // aligned with c_support

  // per c cell
  std::vector<std::vector<CellKey>> l_support;  // [ci] sorted distinct l
  std::vector<std::vector<double>> l_prob;      // [ci][li]

  // per (c, l) cell
  std::vector<std::vector<std::vector<double>>> m_support;  // [ci][li] sorted distinct m
  std::vector<std::vector<std::vector<double>>> m_prob;     // [ci][li][mi]
  std::vector<std::vector<std::vector<double>>> y_mean;     // [ci][li][mi]

  /// Verifies probabilities are nonnegative and each table sums to 1
  /// within 1e-12 per conditioning cell. Throws InvalidArgument otherwise.
  void check() const;
};

struct DiscreteOptions {
  /// Laplace smoothing: add alpha to every cell count of the frequency
  /// tables, over the globally observed supports. 0 disables smoothing.
  /// With smoothing on, cells that gained probability but have no treated
  /// outcome data fall back to the treated mean of the enclosing (l, c),
  /// then c, then overall treated cell.
  double smoothing_alpha = 0.0;
};

/// Groups values by exact equality and tabulates the four empirical laws.
/// Throws IdentificationGap, naming the offending cell, when a cell that
/// receives positive weight in the identification sum has no records to
/// estimate it from.
DiscreteLaw fit_discrete_laws(const Dataset& dataset, const DiscreteOptions& options = {});

/// The identification sum
///   sum_{c,l,m} E[Y|M=m,L=l,C=c,A=1] f_{M|L,C,A=0}(m|l,c) f_{L|C,A=1}(l|c) f_C(c),
/// accumulated over the sorted supports.
double identify_ey1I(const DiscreteLaw& law);

/// fit_discrete_laws + identify_ey1I, with arm means for E(Y0) and E(Y1).
EffectEstimates identify_effects(const Dataset& dataset, const DiscreteOptions& options = {});

/// Per-variable bin counts for the equal-width binning transform.
/// Variable names are "m", "c1".."ck", "l1".."lp"; `all` applies to every
/// binnable variable not named explicitly.
struct BinningSpec {
  std::map<std::string, int> counts;
  std::optional<int> all;
};

/// Equal-width binning over the observed range of each selected variable;
/// binned values are replaced by their bin midpoint. Variables whose
/// observed range is a single point are left unchanged. Throws
/// InvalidArgument for bin counts < 2 or unknown variable names.
Dataset bin_dataset(const Dataset& dataset, const BinningSpec& spec);

}  // namespace organic
