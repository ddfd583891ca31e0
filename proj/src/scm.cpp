#include "organic/scm.hpp"

#include <cmath>

#include "organic/errors.hpp"
#include "organic/rng.hpp"

namespace organic {

namespace {

void require_size(const Vector& v, Index size, const std::string& name) {
  if (v.size() != size) {
    throw InvalidArgument(name + " has length " + std::to_string(v.size()) + ", expected " +
                          std::to_string(size));
  }
  if (!v.allFinite()) throw InvalidArgument(name + " is not finite");
}

void require_nonneg(const Vector& v, const std::string& name) {
  if ((v.array() < 0.0).any()) throw InvalidArgument(name + " must be nonnegative");
}

}  // namespace

void ScmSpec::validate() const {
  if (k < 0 || p < 0) throw InvalidArgument("dimensions must be nonnegative");
  if (!(treat_prob > 0.0 && treat_prob < 1.0)) {
    throw InvalidArgument("treat_prob must lie strictly between 0 and 1");
  }
  require_size(c_mean, k, "c.mean");
  require_size(c_sd, k, "c.sd");
  require_nonneg(c_sd, "c.sd");
  require_size(l_intercept, p, "l.intercept");
  require_size(l_a_effect, p, "l.a_effect");
  require_size(l_noise_sd, p, "l.noise_sd");
  require_nonneg(l_noise_sd, "l.noise_sd");
  if (l_c_effect.rows() != p || l_c_effect.cols() != k) {
    throw InvalidArgument("l.c_effect must be p x k");
  }
  if (!l_c_effect.allFinite()) throw InvalidArgument("l.c_effect is not finite");
  require_size(m_beta2, k, "m.beta2");
  require_size(m_beta3, p, "m.beta3");
  require_size(m_beta4, k, "m.beta4");
  require_size(m_beta5, p, "m.beta5");
  if (m_beta6.rows() != k || m_beta6.cols() != p) throw InvalidArgument("m.beta6 must be k x p");
  if (!m_beta6.allFinite()) throw InvalidArgument("m.beta6 is not finite");
  require_size(y_gamma_l, p, "y.gamma_l");
  require_size(y_gamma_c, k, "y.gamma_c");
  require_size(y_gamma_ml, p, "y.gamma_ml");
  require_size(y_gamma_mc, k, "y.gamma_mc");
  for (double v : {m_beta0, m_beta1, m_noise_sd, y_gamma0, y_gamma_a, y_gamma_m, y_gamma_am,
                   y_noise_sd, treat_prob, m_threshold}) {
    if (!std::isfinite(v)) throw InvalidArgument("spec has a non-finite scalar coefficient");
  }
  if (m_noise_sd < 0.0 || y_noise_sd < 0.0) throw InvalidArgument("noise sd must be nonnegative");
  if (discretize) {
    require_size(c_threshold, k, "discretize.c_threshold");
    require_size(l_threshold, p, "discretize.l_threshold");
  }
}

ScmSpec ScmSpec::zeros(Index k, Index p) {
  ScmSpec spec;
  spec.k = k;
  spec.p = p;
  spec.c_mean = Vector::Zero(k);
  spec.c_sd = Vector::Zero(k);
  spec.l_intercept = Vector::Zero(p);
  spec.l_a_effect = Vector::Zero(p);
  spec.l_c_effect = Matrix::Zero(p, k);
  spec.l_noise_sd = Vector::Zero(p);
  spec.m_beta2 = Vector::Zero(k);
  spec.m_beta3 = Vector::Zero(p);
  spec.m_beta4 = Vector::Zero(k);
  spec.m_beta5 = Vector::Zero(p);
  spec.m_beta6 = Matrix::Zero(k, p);
  spec.y_gamma_l = Vector::Zero(p);
  spec.y_gamma_c = Vector::Zero(k);
  spec.y_gamma_ml = Vector::Zero(p);
  spec.y_gamma_mc = Vector::Zero(k);
  spec.c_threshold = Vector::Zero(k);
  spec.l_threshold = Vector::Zero(p);
  return spec;
}

ObservedRecord CounterfactualDraw::observed() const {
  ObservedRecord rec;
  rec.a = a;
  rec.c = c;
  if (a == 1) {
    rec.l = l1;
    rec.m = m1;
    rec.y = y1;
  } else {
    rec.l = l0;
    rec.m = m0;
    rec.y = y0;
  }
  return rec;
}

namespace {

Vector threshold(const Vector& v, const Vector& cut) {
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = v[i] > cut[i] ? 1.0 : 0.0;
  return out;
}

double mediator_mean(const ScmSpec& s, double a, const Vector& c, const Vector& l) {
  return s.m_beta0 + s.m_beta1 * a + s.m_beta2.dot(c) + s.m_beta3.dot(l) +
         a * (s.m_beta4.dot(c) + s.m_beta5.dot(l)) + c.transpose() * s.m_beta6 * l;
}

double outcome_mean(const ScmSpec& s, double a, const Vector& c, const Vector& l, double m) {
  return s.y_gamma0 + s.y_gamma_a * a + s.y_gamma_m * m + s.y_gamma_l.dot(l) +
         s.y_gamma_c.dot(c) + s.y_gamma_am * a * m + m * (s.y_gamma_ml.dot(l) + s.y_gamma_mc.dot(c));
}

CounterfactualDraw draw_unit(const ScmSpec& s, Rng& rng) {
  CounterfactualDraw d;

  // fixed draw order per unit: c, L noise, M noise, intervention M noise,
  // Y noise, treatment assignment
  Vector c_raw(s.k);
  for (Index i = 0; i < s.k; ++i) c_raw[i] = s.c_mean[i] + s.c_sd[i] * rng.next_gaussian();
  d.c = s.discretize ? threshold(c_raw, s.c_threshold) : c_raw;

  Vector l_noise(s.p);
  for (Index j = 0; j < s.p; ++j) l_noise[j] = s.l_noise_sd[j] * rng.next_gaussian();
  const Vector l_base = s.l_intercept + s.l_c_effect * d.c + l_noise;
  const Vector l0_raw = l_base;
  const Vector l1_raw = l_base + s.l_a_effect;
  d.l0 = s.discretize ? threshold(l0_raw, s.l_threshold) : l0_raw;
  d.l1 = s.discretize ? threshold(l1_raw, s.l_threshold) : l1_raw;

  const double m_noise = s.m_noise_sd * rng.next_gaussian();
  const double m_noise_int = s.m_noise_sd * rng.next_gaussian();  // fresh draw
  const double m0_raw = mediator_mean(s, 0.0, d.c, d.l0) + m_noise;
  const double m1_raw = mediator_mean(s, 1.0, d.c, d.l1) + m_noise;
  const double m1I_raw = mediator_mean(s, 0.0, d.c, d.l1) + m_noise_int;
  const auto cut_m = [&](double m) { return s.discretize ? (m > s.m_threshold ? 1.0 : 0.0) : m; };
  d.m0 = cut_m(m0_raw);
  d.m1 = cut_m(m1_raw);
  d.m1I = cut_m(m1I_raw);

  const double y_noise = s.y_noise_sd * rng.next_gaussian();
  d.y0 = outcome_mean(s, 0.0, d.c, d.l0, d.m0) + y_noise;
  d.y1 = outcome_mean(s, 1.0, d.c, d.l1, d.m1) + y_noise;
  d.y1I = outcome_mean(s, 1.0, d.c, d.l1, d.m1I) + y_noise;  // same Y noise

  d.a = rng.next_bernoulli(s.treat_prob) ? 1 : 0;
  return d;
}

}  // namespace

std::vector<CounterfactualDraw> draw_counterfactuals(const ScmSpec& spec, Index n,
                                                     std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw InvalidArgument("n must be >= 1");
  std::vector<CounterfactualDraw> draws;
  draws.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    draws.push_back(draw_unit(spec, rng));
  }
  return draws;
}

Dataset simulate_observed(const ScmSpec& spec, Index n, std::uint64_t seed) {
  Dataset dataset;
  dataset.k = spec.k;
  dataset.p = spec.p;
  const auto draws = draw_counterfactuals(spec, n, seed);
  dataset.records.reserve(draws.size());
  for (const auto& d : draws) dataset.records.push_back(d.observed());
  return dataset;
}

namespace {

// mean and sd/sqrt(n) accumulated in sorted order
std::pair<double, double> mean_se(std::vector<double> values) {
  const double n = static_cast<double>(values.size());
  const double mean = sorted_mean(values);
  std::vector<double> sq;
  sq.reserve(values.size());
  for (double v : values) sq.push_back((v - mean) * (v - mean));
  const double var = n > 1 ? sorted_sum(std::move(sq)) / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace

OracleEffects oracle_effects(const ScmSpec& spec, Index n, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("n must be >= 2");
  const auto draws = draw_counterfactuals(spec, n, seed);
  std::vector<double> y0s, y1s, y1Is, directs, indirects;
  y0s.reserve(draws.size());
  y1s.reserve(draws.size());
  y1Is.reserve(draws.size());
  directs.reserve(draws.size());
  indirects.reserve(draws.size());
  for (const auto& d : draws) {
    y0s.push_back(d.y0);
    y1s.push_back(d.y1);
    y1Is.push_back(d.y1I);
    directs.push_back(d.y1I - d.y0);
    indirects.push_back(d.y1 - d.y1I);
  }
  const auto [ey0, se0] = mean_se(std::move(y0s));
  const auto [ey1, se1] = mean_se(std::move(y1s));
  const auto [ey1I, se1I] = mean_se(std::move(y1Is));
  const auto [dmean, dse] = mean_se(std::move(directs));
  const auto [imean, ise] = mean_se(std::move(indirects));
  (void)dmean;
  (void)imean;

  OracleEffects out;
  out.effects = EffectEstimates::from_means(ey0, ey1, ey1I);
  out.mc_se = {se0, se1, se1I, dse, ise};
  out.n = n;
  return out;
}

std::optional<EffectEstimates> closed_form_effects(const ScmSpec& spec) {
  spec.validate();
  const bool linear = spec.m_beta4.isZero(0.0) && spec.m_beta5.isZero(0.0) &&
                      spec.m_beta6.isZero(0.0) && spec.y_gamma_am == 0.0 &&
                      spec.y_gamma_ml.isZero(0.0) && spec.y_gamma_mc.isZero(0.0) &&
                      !spec.discretize;
  if (!linear) return std::nullopt;

  const Vector ec = spec.c_mean;
  const Vector el0 = spec.l_intercept + spec.l_c_effect * ec;
  const Vector el1 = el0 + spec.l_a_effect;
  const double em0 = spec.m_beta0 + spec.m_beta2.dot(ec) + spec.m_beta3.dot(el0);
  const double em1I = spec.m_beta0 + spec.m_beta2.dot(ec) + spec.m_beta3.dot(el1);
  const double em1 = em1I + spec.m_beta1;

  const auto ey = [&](double a, const Vector& el, double em) {
    return spec.y_gamma0 + spec.y_gamma_a * a + spec.y_gamma_m * em + spec.y_gamma_l.dot(el) +
           spec.y_gamma_c.dot(ec);
  };
  return EffectEstimates::from_means(ey(0.0, el0, em0), ey(1.0, el1, em1), ey(1.0, el1, em1I));
}

}  // namespace organic
