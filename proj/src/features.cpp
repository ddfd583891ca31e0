#include "organic/features.hpp"

#include <sstream>

#include "organic/errors.hpp"

namespace organic {

double Feature::eval(double m, const Vector& l, const Vector& c) const {
  switch (kind) {
    case Kind::Constant:
      return 1.0;
    case Kind::M:
      return m;
    case Kind::L:
      return l[j];
    case Kind::C:
      return c[i];
    case Kind::MxL:
      return m * l[j];
    case Kind::MxC:
      return m * c[i];
    case Kind::CxL:
      return c[i] * l[j];
  }
  return 0.0;
}

std::string Feature::label() const {
  switch (kind) {
    case Kind::Constant:
      return "1";
    case Kind::M:
      return "m";
    case Kind::L:
      return "l" + std::to_string(j + 1);
    case Kind::C:
      return "c" + std::to_string(i + 1);
    case Kind::MxL:
      return "m*l" + std::to_string(j + 1);
    case Kind::MxC:
      return "m*c" + std::to_string(i + 1);
    case Kind::CxL:
      return "c" + std::to_string(i + 1) + "*l" + std::to_string(j + 1);
  }
  return "?";
}

FeatureSpec default_feature_spec(Index k, Index p) {
  FeatureSpec spec;
  spec.push_back({Feature::Kind::Constant, -1, -1});
  spec.push_back({Feature::Kind::M, -1, -1});
  for (Index j = 0; j < p; ++j) spec.push_back({Feature::Kind::L, -1, j});
  for (Index i = 0; i < k; ++i) spec.push_back({Feature::Kind::C, i, -1});
  for (Index j = 0; j < p; ++j) spec.push_back({Feature::Kind::MxL, -1, j});
  for (Index i = 0; i < k; ++i) spec.push_back({Feature::Kind::MxC, i, -1});
  return spec;
}

namespace {

// "l3" -> 2; throws on anything else
Index parse_index(const std::string& token, char prefix, Index bound, const std::string& full) {
  if (token.size() < 2 || token[0] != prefix) {
    throw ParseError("unknown feature token '" + full + "'");
  }
  Index idx = 0;
  for (std::size_t i = 1; i < token.size(); ++i) {
    if (token[i] < '0' || token[i] > '9') {
      throw ParseError("unknown feature token '" + full + "'");
    }
    idx = idx * 10 + (token[i] - '0');
  }
  if (idx < 1 || idx > bound) {
    throw InvalidArgument("feature '" + full + "' is out of range (dimension " +
                          std::to_string(bound) + ")");
  }
  return idx - 1;
}

Feature parse_token(const std::string& token, Index k, Index p) {
  if (token == "1") return {Feature::Kind::Constant, -1, -1};
  if (token == "m") return {Feature::Kind::M, -1, -1};
  const auto star = token.find('*');
  if (star == std::string::npos) {
    if (token[0] == 'l') return {Feature::Kind::L, -1, parse_index(token, 'l', p, token)};
    if (token[0] == 'c') return {Feature::Kind::C, parse_index(token, 'c', k, token), -1};
    throw ParseError("unknown feature token '" + token + "'");
  }
  const std::string left = token.substr(0, star);
  const std::string right = token.substr(star + 1);
  if (left == "m" && !right.empty() && right[0] == 'l') {
    return {Feature::Kind::MxL, -1, parse_index(right, 'l', p, token)};
  }
  if (left == "m" && !right.empty() && right[0] == 'c') {
    return {Feature::Kind::MxC, parse_index(right, 'c', k, token), -1};
  }
  if (!left.empty() && left[0] == 'c' && !right.empty() && right[0] == 'l') {
    return {Feature::Kind::CxL, parse_index(left, 'c', k, token),
            parse_index(right, 'l', p, token)};
  }
  throw ParseError("unknown feature token '" + token + "'");
}

}  // namespace

FeatureSpec parse_feature_spec(const std::string& text, Index k, Index p) {
  FeatureSpec spec;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    // trim blanks
    while (!token.empty() && token.front() == ' ') token.erase(token.begin());
    while (!token.empty() && token.back() == ' ') token.pop_back();
    if (token.empty()) throw ParseError("empty feature token");
    spec.push_back(parse_token(token, k, p));
  }
  if (spec.empty()) throw InvalidArgument("empty feature spec");
  for (std::size_t i = 0; i < spec.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.size(); ++j) {
      if (spec[i].label() == spec[j].label()) {
        throw InvalidArgument("duplicate feature '" + spec[i].label() + "'");
      }
    }
  }
  return spec;
}

std::string feature_spec_label(const FeatureSpec& spec) {
  std::string out;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (i > 0) out += ",";
    out += spec[i].label();
  }
  return out;
}

double OutcomeModelFit::evaluate(double m, const Vector& l, const Vector& c) const {
  double value = 0.0;
  for (std::size_t i = 0; i < feature_spec.size(); ++i) {
    value += theta[static_cast<Index>(i)] * feature_spec[i].eval(m, l, c);
  }
  return value;
}

}  // namespace organic
