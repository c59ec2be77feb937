#pragma once

#include <string>

#include "json.hpp"
#include "lmo/element.hpp"
#include "lmo/lmo.hpp"

namespace lmo {

using Json = nlohmann::ordered_json;

// "CI" style skeleton strings.
std::string skeleton_string(const Skeleton& s);
Skeleton parse_skeleton(const std::string& text);

// {"text", "rational", "z3", "formal"}; only "text" is read back.
Json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j);

// {"skeleton", "terms": [{"diagram_code", "coefficient"}]}
Json element_to_json(const Element& e);
// Throws ParseError on malformed documents; codes are re-canonicalized.
Element element_from_json(const Json& j);

// {degree_0, terms, theta_coefficient, sigma_plus, sigma_minus, caps_used}
Json omega_to_json(const OmegaResult& r, int n);

// One term per line: "<coefficient>  <diagram_code>".
std::string element_to_text(const Element& e);

}  // namespace lmo
