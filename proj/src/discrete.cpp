#include "organic/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "organic/errors.hpp"

namespace organic {

namespace {

CellKey to_key(const Vector& v) {
  return CellKey(v.data(), v.data() + v.size());
}

std::string fmt_value(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::string fmt_key(const CellKey& key) {
  std::string out = "(";
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt_value(key[i]);
  }
  return out + ")";
}

std::string fmt_cell(double m, const CellKey& l, const CellKey& c) {
  return "m=" + fmt_value(m) + ", l=" + fmt_key(l) + ", c=" + fmt_key(c);
}

// counts over a fixed support -> probabilities, with additive smoothing
std::vector<double> to_probabilities(const std::vector<Index>& counts, double alpha) {
  Index total = 0;
  for (Index c : counts) total += c;
  const double denom = static_cast<double>(total) + alpha * static_cast<double>(counts.size());
  std::vector<double> probs(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    probs[i] = (static_cast<double>(counts[i]) + alpha) / denom;
  }
  return probs;
}

}  // namespace

void DiscreteLaw::check() const {
  const auto check_sum = [](const std::vector<double>& probs, const std::string& what) {
    double sum = 0.0;
    for (double prob : probs) {
      if (!(prob >= 0.0)) throw InvalidArgument(what + ": negative probability");
      sum += prob;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw InvalidArgument(what + ": probabilities sum to " + fmt_value(sum));
    }
  };
  check_sum(c_prob, "f_C");
  for (std::size_t ci = 0; ci < c_support.size(); ++ci) {
    check_sum(l_prob[ci], "f_{L|C} at c=" + fmt_key(c_support[ci]));
    for (std::size_t li = 0; li < l_support[ci].size(); ++li) {
      check_sum(m_prob[ci][li], "f_{M|L,C} at l=" + fmt_key(l_support[ci][li]) +
                                    ", c=" + fmt_key(c_support[ci]));
      if (y_mean[ci][li].size() != m_support[ci][li].size()) {
        throw InvalidArgument("y_mean table misaligned with mediator support");
      }
    }
  }
}

DiscreteLaw fit_discrete_laws(const Dataset& dataset, const DiscreteOptions& options) {
  require_valid(dataset);
  if (options.smoothing_alpha < 0.0) throw InvalidArgument("smoothing alpha must be >= 0");
  const double alpha = options.smoothing_alpha;
  const bool smoothed = alpha > 0.0;

  // one grouping pass over the records
  std::map<CellKey, Index> c_counts;                                         // pooled
  std::map<CellKey, std::map<CellKey, Index>> l_counts;                      // a=1: c -> l
  std::map<CellKey, std::map<CellKey, std::map<double, Index>>> m_counts;    // a=0: c -> l -> m
  std::map<CellKey, std::map<CellKey, std::map<double, std::vector<double>>>> y_treated;
  std::vector<double> y_all_treated;
  std::set<CellKey> l_values_all;
  std::set<double> m_values_all;

  for (const auto& rec : dataset.records) {
    const CellKey c = to_key(rec.c);
    const CellKey l = to_key(rec.l);
    ++c_counts[c];
    l_values_all.insert(l);
    m_values_all.insert(rec.m);
    if (rec.a == 1) {
      ++l_counts[c][l];
      y_treated[c][l][rec.m].push_back(rec.y);
      y_all_treated.push_back(rec.y);
    } else {
      ++m_counts[c][l][rec.m];
    }
  }
  const double y_mean_treated = sorted_mean(y_all_treated);

  DiscreteLaw law;
  law.c_support.reserve(c_counts.size());
  {
    std::vector<Index> counts;
    for (const auto& [c, count] : c_counts) {
      law.c_support.push_back(c);
      counts.push_back(count);
    }
    law.c_prob = to_probabilities(counts, alpha);
  }

  for (const CellKey& c : law.c_support) {
    const auto l_table_it = l_counts.find(c);
    if (l_table_it == l_counts.end() && !smoothed) {
      throw IdentificationGap("no treated records with c=" + fmt_key(c) +
                              " to estimate f_{L|C,A=1}");
    }
    static const std::map<CellKey, Index> kEmptyL;
    static const std::map<CellKey, std::map<double, std::vector<double>>> kEmptyY;
    const auto& l_table = l_table_it == l_counts.end() ? kEmptyL : l_table_it->second;
    const auto y_c_it = y_treated.find(c);
    const auto& y_at_c = y_c_it == y_treated.end() ? kEmptyY : y_c_it->second;

    double y_mean_at_c = y_mean_treated;
    if (!y_at_c.empty()) {
      std::vector<double> ys;
      for (const auto& [l, by_m] : y_at_c) {
        for (const auto& [m, values] : by_m) ys.insert(ys.end(), values.begin(), values.end());
      }
      y_mean_at_c = sorted_mean(std::move(ys));
    }

    std::vector<CellKey> l_support;
    if (smoothed) {
      l_support.assign(l_values_all.begin(), l_values_all.end());
    } else {
      for (const auto& [l, count] : l_table) l_support.push_back(l);
    }
    {
      std::vector<Index> counts;
      counts.reserve(l_support.size());
      for (const auto& l : l_support) {
        const auto it = l_table.find(l);
        counts.push_back(it == l_table.end() ? 0 : it->second);
      }
      law.l_prob.push_back(to_probabilities(counts, alpha));
    }

    std::vector<std::vector<double>> m_support_c, m_prob_c, y_mean_c;
    for (const CellKey& l : l_support) {
      static const std::map<double, Index> kEmptyM;
      static const std::map<double, std::vector<double>> kEmptyYM;
      const std::map<double, Index>* control = nullptr;
      if (const auto m_c_it = m_counts.find(c); m_c_it != m_counts.end()) {
        if (const auto it = m_c_it->second.find(l); it != m_c_it->second.end()) {
          control = &it->second;
        }
      }
      if (control == nullptr && !smoothed) {
        throw IdentificationGap("no control records with l=" + fmt_key(l) + ", c=" + fmt_key(c) +
                                " to estimate f_{M|L,C,A=0}");
      }
      const auto& m_table = control != nullptr ? *control : kEmptyM;
      const auto y_lc_it = y_at_c.find(l);
      const auto& y_at_lc = y_lc_it == y_at_c.end() ? kEmptyYM : y_lc_it->second;

      double y_mean_at_lc = y_mean_at_c;
      if (!y_at_lc.empty()) {
        std::vector<double> ys;
        for (const auto& [m, values] : y_at_lc) ys.insert(ys.end(), values.begin(), values.end());
        y_mean_at_lc = sorted_mean(std::move(ys));
      }

      std::vector<double> m_support;
      if (smoothed) {
        m_support.assign(m_values_all.begin(), m_values_all.end());
      } else {
        for (const auto& [m, count] : m_table) m_support.push_back(m);
      }
      std::vector<Index> mcounts;
      mcounts.reserve(m_support.size());
      for (double m : m_support) {
        const auto it = m_table.find(m);
        mcounts.push_back(it == m_table.end() ? 0 : it->second);
      }

      std::vector<double> means;
      means.reserve(m_support.size());
      for (double m : m_support) {
        const auto it = y_at_lc.find(m);
        if (it != y_at_lc.end()) {
          means.push_back(sorted_mean(it->second));
        } else if (smoothed) {
          means.push_back(y_mean_at_lc);
        } else {
          throw IdentificationGap("no treated records in cell " + fmt_cell(m, l, c) +
                                  " to estimate E[Y|M,L,C,A=1]");
        }
      }

      m_support_c.push_back(std::move(m_support));
      m_prob_c.push_back(to_probabilities(mcounts, alpha));
      y_mean_c.push_back(std::move(means));
    }
    law.l_support.push_back(std::move(l_support));
    law.m_support.push_back(std::move(m_support_c));
    law.m_prob.push_back(std::move(m_prob_c));
    law.y_mean.push_back(std::move(y_mean_c));
  }
  return law;
}

double identify_ey1I(const DiscreteLaw& law) {
  law.check();
  double total = 0.0;
  for (std::size_t ci = 0; ci < law.c_support.size(); ++ci) {
    double inner_c = 0.0;
    for (std::size_t li = 0; li < law.l_support[ci].size(); ++li) {
      double inner_l = 0.0;
      for (std::size_t mi = 0; mi < law.m_support[ci][li].size(); ++mi) {
        inner_l += law.y_mean[ci][li][mi] * law.m_prob[ci][li][mi];
      }
      inner_c += inner_l * law.l_prob[ci][li];
    }
    total += inner_c * law.c_prob[ci];
  }
  return total;
}

EffectEstimates identify_effects(const Dataset& dataset, const DiscreteOptions& options) {
  const DiscreteLaw law = fit_discrete_laws(dataset, options);
  const double ey1I = identify_ey1I(law);
  return EffectEstimates::from_means(dataset.arm_mean_y(0), dataset.arm_mean_y(1), ey1I);
}

namespace {

double binned_value(double x, double lo, double width, int bins) {
  int idx = static_cast<int>(std::floor((x - lo) / width));
  idx = std::clamp(idx, 0, bins - 1);
  return lo + (static_cast<double>(idx) + 0.5) * width;
}

}  // namespace

Dataset bin_dataset(const Dataset& dataset, const BinningSpec& spec) {
  require_valid(dataset);
  std::vector<std::string> names;
  for (Index i = 0; i < dataset.k; ++i) names.push_back("c" + std::to_string(i + 1));
  for (Index j = 0; j < dataset.p; ++j) names.push_back("l" + std::to_string(j + 1));
  names.push_back("m");

  for (const auto& [name, count] : spec.counts) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw InvalidArgument("unknown binning variable '" + name + "'");
    }
    if (count < 2) throw InvalidArgument("bin count for '" + name + "' must be >= 2");
  }
  if (spec.all && *spec.all < 2) throw InvalidArgument("bin count must be >= 2");

  Dataset out = dataset;
  for (const auto& name : names) {
    int bins = 0;
    if (const auto it = spec.counts.find(name); it != spec.counts.end()) {
      bins = it->second;
    } else if (spec.all) {
      bins = *spec.all;
    } else {
      continue;
    }

    const auto value_ref = [&](ObservedRecord& rec) -> double& {
      if (name == "m") return rec.m;
      if (name[0] == 'c') return rec.c[std::stoi(name.substr(1)) - 1];
      return rec.l[std::stoi(name.substr(1)) - 1];
    };
    double lo = out.records.front().m, hi = lo;
    {
      bool first = true;
      for (auto& rec : out.records) {
        const double v = value_ref(rec);
        if (first) {
          lo = hi = v;
          first = false;
        } else {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
    }
    if (lo == hi) continue;  // single-point range: nothing to bin
    const double width = (hi - lo) / static_cast<double>(bins);
    for (auto& rec : out.records) {
      double& v = value_ref(rec);
      v = binned_value(v, lo, width, bins);
    }
  }
  return out;
}

}  // namespace organic
