#pragma once

#include <optional>
#include <string>

#include "organic/bootstrap.hpp"
#include "organic/scm.hpp"
#include "organic/types.hpp"

namespace organic {

/// Formats a double with up to 17 significant digits (round-trippable).
std::string json_number(double v);

/// Parses a generator spec from its JSON configuration text / file.
/// Throws ParseError on malformed JSON or wrong field types and
/// InvalidArgument when the resulting spec fails validation.
ScmSpec scm_spec_from_json(const std::string& text);
ScmSpec scm_spec_from_json_file(const std::string& path);

/// Serializes a spec back to the same JSON schema.
std::string scm_spec_to_json(const ScmSpec& spec);

/// {"ey0": ..., "ey1": ..., "ey1I": ..., "organic_direct": ...,
///  "organic_indirect": ...} -- the stable estimate schema. `extra_indent`
/// nests the object inside a larger document.
std::string effects_to_json(const EffectEstimates& effects, int indent = 0);

std::string estimand_vector_to_json(const EstimandVector& v, int indent = 0);

std::string bootstrap_to_json(const BootstrapSummary& summary, int indent = 0);

std::string oracle_to_json(const OracleEffects& oracle,
                           const std::optional<EffectEstimates>& closed_form,
                           std::uint64_t seed);

}  // namespace organic
