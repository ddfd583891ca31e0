#include "organic/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "organic/errors.hpp"

namespace organic {

std::string json_number(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

namespace {

using nlohmann::json;

Vector get_vector(const json& obj, const std::string& key, Index size) {
  if (!obj.contains(key)) return Vector::Zero(size);
  const json& arr = obj.at(key);
  if (!arr.is_array()) throw ParseError("'" + key + "' must be an array");
  Vector out(static_cast<Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ParseError("'" + key + "' must contain numbers");
    out[static_cast<Index>(i)] = arr[i].get<double>();
  }
  return out;
}

Matrix get_matrix(const json& obj, const std::string& key, Index rows, Index cols) {
  if (!obj.contains(key)) return Matrix::Zero(rows, cols);
  const json& arr = obj.at(key);
  if (!arr.is_array()) throw ParseError("'" + key + "' must be an array of rows");
  Matrix out = Matrix::Zero(rows, cols);
  if (static_cast<Index>(arr.size()) != rows) {
    throw ParseError("'" + key + "' must have " + std::to_string(rows) + " rows");
  }
  for (Index r = 0; r < rows; ++r) {
    const json& row = arr[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw ParseError("'" + key + "' rows must have " + std::to_string(cols) + " entries");
    }
    for (Index c = 0; c < cols; ++c) {
      out(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return out;
}

double get_scalar(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) throw ParseError("'" + key + "' must be a number");
  return obj.at(key).get<double>();
}

// indentation helpers for the hand-written emitters
std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent), ' '); }

std::string vector_json(const Vector& v) {
  std::string out = "[";
  for (Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += json_number(v[i]);
  }
  return out + "]";
}

std::string matrix_json(const Matrix& m) {
  std::string out = "[";
  for (Index r = 0; r < m.rows(); ++r) {
    if (r > 0) out += ", ";
    out += vector_json(m.row(r));
  }
  return out + "]";
}

}  // namespace

ScmSpec scm_spec_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    ScmSpec spec;
    if (!doc.contains("k") || !doc.contains("p")) {
      throw ParseError("spec must declare 'k' and 'p'");
    }
    spec.k = doc.at("k").get<Index>();
    spec.p = doc.at("p").get<Index>();
    spec.treat_prob = get_scalar(doc, "treat_prob", 0.5);

    const json c = doc.value("c", json::object());
    spec.c_mean = get_vector(c, "mean", spec.k);
    spec.c_sd = get_vector(c, "sd", spec.k);

    const json l = doc.value("l", json::object());
    spec.l_intercept = get_vector(l, "intercept", spec.p);
    spec.l_a_effect = get_vector(l, "a_effect", spec.p);
    spec.l_c_effect = get_matrix(l, "c_effect", spec.p, spec.k);
    spec.l_noise_sd = get_vector(l, "noise_sd", spec.p);

    const json m = doc.value("m", json::object());
    spec.m_beta0 = get_scalar(m, "beta0", 0.0);
    spec.m_beta1 = get_scalar(m, "beta1", 0.0);
    spec.m_beta2 = get_vector(m, "beta2", spec.k);
    spec.m_beta3 = get_vector(m, "beta3", spec.p);
    spec.m_beta4 = get_vector(m, "beta4", spec.k);
    spec.m_beta5 = get_vector(m, "beta5", spec.p);
    spec.m_beta6 = get_matrix(m, "beta6", spec.k, spec.p);
    spec.m_noise_sd = get_scalar(m, "noise_sd", 0.0);

    const json y = doc.value("y", json::object());
    spec.y_gamma0 = get_scalar(y, "gamma0", 0.0);
    spec.y_gamma_a = get_scalar(y, "gamma_a", 0.0);
    spec.y_gamma_m = get_scalar(y, "gamma_m", 0.0);
    spec.y_gamma_l = get_vector(y, "gamma_l", spec.p);
    spec.y_gamma_c = get_vector(y, "gamma_c", spec.k);
    spec.y_gamma_am = get_scalar(y, "gamma_am", 0.0);
    spec.y_gamma_ml = get_vector(y, "gamma_ml", spec.p);
    spec.y_gamma_mc = get_vector(y, "gamma_mc", spec.k);
    spec.y_noise_sd = get_scalar(y, "noise_sd", 0.0);

    spec.c_threshold = Vector::Zero(spec.k);
    spec.l_threshold = Vector::Zero(spec.p);
    if (doc.contains("discretize") && !doc.at("discretize").is_null()) {
      const json d = doc.at("discretize");
      spec.discretize = true;
      spec.c_threshold = get_vector(d, "c_thresholds", spec.k);
      spec.l_threshold = get_vector(d, "l_thresholds", spec.p);
      spec.m_threshold = get_scalar(d, "m_threshold", 0.0);
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid spec JSON: ") + e.what());
  }
}

ScmSpec scm_spec_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "' for reading");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return scm_spec_from_json(buffer.str());
}

std::string scm_spec_to_json(const ScmSpec& spec) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"k\": " << spec.k << ",\n";
  out << "  \"p\": " << spec.p << ",\n";
  out << "  \"treat_prob\": " << json_number(spec.treat_prob) << ",\n";
  out << "  \"c\": {\"mean\": " << vector_json(spec.c_mean) << ", \"sd\": " << vector_json(spec.c_sd)
      << "},\n";
  out << "  \"l\": {\"intercept\": " << vector_json(spec.l_intercept)
      << ", \"a_effect\": " << vector_json(spec.l_a_effect)
      << ", \"c_effect\": " << matrix_json(spec.l_c_effect)
      << ", \"noise_sd\": " << vector_json(spec.l_noise_sd) << "},\n";
  out << "  \"m\": {\"beta0\": " << json_number(spec.m_beta0)
      << ", \"beta1\": " << json_number(spec.m_beta1) << ", \"beta2\": " << vector_json(spec.m_beta2)
      << ", \"beta3\": " << vector_json(spec.m_beta3) << ", \"beta4\": " << vector_json(spec.m_beta4)
      << ", \"beta5\": " << vector_json(spec.m_beta5) << ", \"beta6\": " << matrix_json(spec.m_beta6)
      << ", \"noise_sd\": " << json_number(spec.m_noise_sd) << "},\n";
  out << "  \"y\": {\"gamma0\": " << json_number(spec.y_gamma0)
      << ", \"gamma_a\": " << json_number(spec.y_gamma_a)
      << ", \"gamma_m\": " << json_number(spec.y_gamma_m)
      << ", \"gamma_l\": " << vector_json(spec.y_gamma_l)
      << ", \"gamma_c\": " << vector_json(spec.y_gamma_c)
      << ", \"gamma_am\": " << json_number(spec.y_gamma_am)
      << ", \"gamma_ml\": " << vector_json(spec.y_gamma_ml)
      << ", \"gamma_mc\": " << vector_json(spec.y_gamma_mc)
      << ", \"noise_sd\": " << json_number(spec.y_noise_sd) << "}";
  if (spec.discretize) {
    out << ",\n  \"discretize\": {\"c_thresholds\": " << vector_json(spec.c_threshold)
        << ", \"l_thresholds\": " << vector_json(spec.l_threshold)
        << ", \"m_threshold\": " << json_number(spec.m_threshold) << "}";
  }
  out << "\n}\n";
  return out.str();
}

std::string effects_to_json(const EffectEstimates& effects, int indent) {
  const std::string in = pad(indent);
  std::ostringstream out;
  out << "{\n";
  out << in << "  \"ey0\": " << json_number(effects.ey0) << ",\n";
  out << in << "  \"ey1\": " << json_number(effects.ey1) << ",\n";
  out << in << "  \"ey1I\": " << json_number(effects.ey1I) << ",\n";
  out << in << "  \"organic_direct\": " << json_number(effects.organic_direct) << ",\n";
  out << in << "  \"organic_indirect\": " << json_number(effects.organic_indirect) << "\n";
  out << in << "}";
  return out.str();
}

std::string estimand_vector_to_json(const EstimandVector& v, int indent) {
  const std::string in = pad(indent);
  std::ostringstream out;
  out << "{\n";
  out << in << "  \"ey0\": " << json_number(v.ey0) << ",\n";
  out << in << "  \"ey1\": " << json_number(v.ey1) << ",\n";
  out << in << "  \"ey1I\": " << json_number(v.ey1I) << ",\n";
  out << in << "  \"organic_direct\": " << json_number(v.organic_direct) << ",\n";
  out << in << "  \"organic_indirect\": " << json_number(v.organic_indirect) << "\n";
  out << in << "}";
  return out.str();
}

std::string bootstrap_to_json(const BootstrapSummary& summary, int indent) {
  const std::string in = pad(indent);
  std::ostringstream out;
  out << "{\n";
  out << in << "  \"b\": " << summary.b << ",\n";
  out << in << "  \"alpha\": " << json_number(summary.alpha) << ",\n";
  out << in << "  \"seed\": " << summary.seed << ",\n";
  out << in << "  \"failures\": " << summary.failures << ",\n";
  out << in << "  \"se\": " << estimand_vector_to_json(summary.se, indent + 2) << ",\n";
  out << in << "  \"ci_lower\": " << estimand_vector_to_json(summary.ci_lower, indent + 2) << ",\n";
  out << in << "  \"ci_upper\": " << estimand_vector_to_json(summary.ci_upper, indent + 2) << "\n";
  out << in << "}";
  return out.str();
}

std::string oracle_to_json(const OracleEffects& oracle,
                           const std::optional<EffectEstimates>& closed_form,
                           std::uint64_t seed) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"n\": " << oracle.n << ",\n";
  out << "  \"seed\": " << seed << ",\n";
  out << "  \"ey0\": " << json_number(oracle.effects.ey0) << ",\n";
  out << "  \"ey1\": " << json_number(oracle.effects.ey1) << ",\n";
  out << "  \"ey1I\": " << json_number(oracle.effects.ey1I) << ",\n";
  out << "  \"organic_direct\": " << json_number(oracle.effects.organic_direct) << ",\n";
  out << "  \"organic_indirect\": " << json_number(oracle.effects.organic_indirect) << ",\n";
  out << "  \"mc_se\": " << estimand_vector_to_json(oracle.mc_se, 2) << ",\n";
  out << "  \"closed_form\": "
      << (closed_form ? effects_to_json(*closed_form, 2) : std::string("null")) << "\n";
  out << "}\n";
  return out.str();
}

}  // namespace organic
