#include "lmo/io.hpp"

#include <sstream>

#include "lmo/links.hpp"

namespace lmo {

std::string skeleton_string(const Skeleton& s) {
  std::string out;
  for (auto k : s) out += k == ComponentKind::Circle ? 'C' : 'I';
  return out;
}

Skeleton parse_skeleton(const std::string& text) {
  Skeleton s;
  for (char ch : text) {
    if (ch == 'C') s.push_back(ComponentKind::Circle);
    else if (ch == 'I') s.push_back(ComponentKind::Interval);
    else throw ParseError("bad skeleton: " + text);
  }
  return s;
}

Json scalar_to_json(const Scalar& s) {
  Json j;
  j["text"] = s.to_string();
  j["rational"] = s.constant().get_str();
  j["z3"] = s.coefficient(Monomial{*SymbolRegistry::instance().find("z3")}).get_str();
  j["formal"] = s.formal_symbols();
  return j;
}

Scalar scalar_from_json(const Json& j) {
  if (j.is_string()) return Scalar::parse(j.get<std::string>());
  if (!j.is_object() || !j.contains("text")) throw ParseError("coefficient needs \"text\"");
  return Scalar::parse(j["text"].get<std::string>());
}

Json element_to_json(const Element& e) {
  Json j;
  j["skeleton"] = skeleton_string(e.skeleton());
  Json terms = Json::array();
  for (auto& [code, c] : e.terms()) terms.push_back({{"diagram_code", code}, {"coefficient", scalar_to_json(c)}});
  j["terms"] = std::move(terms);
  return j;
}

Element element_from_json(const Json& j) {
  try {
    Element e(parse_skeleton(j.at("skeleton").get<std::string>()));
    for (auto& t : j.at("terms")) {
      Diagram d = decode_diagram(t.at("diagram_code").get<std::string>());
      if (d.skeleton_kinds() != e.skeleton()) throw ParseError("term skeleton mismatch");
      e.add(d, scalar_from_json(t.at("coefficient")));
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("bad element document: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw ParseError(std::string("bad element document: ") + ex.what());
  }
}

Json omega_to_json(const OmegaResult& r, int n) {
  Json j;
  j["n"] = n;
  j["degree_0"] = scalar_to_json(r.value.constant());
  j["terms"] = element_to_json(r.value)["terms"];
  j["theta_coefficient"] = scalar_to_json(theta_coefficient(r.value));
  j["sigma_plus"] = r.sigma.positive;
  j["sigma_minus"] = r.sigma.negative;
  j["caps_used"] = {{"degree", r.degree_cap}, {"legs", r.leg_cap}};
  return j;
}

std::string element_to_text(const Element& e) {
  std::ostringstream os;
  if (e.is_zero()) os << "0\n";
  for (auto& [code, c] : e.terms()) os << c.to_string() << "  [" << code << "]\n";
  return os.str();
}

}  // namespace lmo
