#include "lmo/scalar.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace lmo {

namespace {
std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

int symbol_weight_from_name(const std::string& name) {
  if (name == "z3") return 3;
  if (name.rfind("zeta(", 0) == 0 && name.back() == ')')
    return MzvIndex::parse(name.substr(5, name.size() - 6)).weight();
  throw std::invalid_argument("unknown scalar symbol: " + name);
}
}  // namespace

int MzvIndex::weight() const {
  int w = 0;
  for (int e : entries) w += e;
  return w;
}

bool MzvIndex::convergent() const {
  if (entries.empty()) return false;
  for (int e : entries)
    if (e < 1) return false;
  return entries.back() >= 2;
}

std::string MzvIndex::to_string() const {
  std::string out;
  for (size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(entries[i]);
  }
  return out;
}

MzvIndex MzvIndex::parse(std::string_view text) {
  MzvIndex idx;
  std::string s = trim(text);
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (part.empty() || !std::all_of(part.begin(), part.end(), ::isdigit))
      throw std::invalid_argument("bad MZV index: " + s);
    idx.entries.push_back(std::stoi(part));
  }
  if (idx.entries.empty()) throw std::invalid_argument("empty MZV index");
  return idx;
}

SymbolRegistry::SymbolRegistry() { intern("z3", 3); }

SymbolRegistry& SymbolRegistry::instance() {
  static SymbolRegistry r;
  return r;
}

uint32_t SymbolRegistry::intern(const std::string& name, int weight) {
  std::lock_guard<std::mutex> lk(registry_mutex());
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(names_.size());
  names_.push_back(name);
  weights_.push_back(weight);
  ids_[name] = id;
  return id;
}

const std::string& SymbolRegistry::name(uint32_t id) const {
  std::lock_guard<std::mutex> lk(registry_mutex());
  return names_.at(id);
}

int SymbolRegistry::weight(uint32_t id) const {
  std::lock_guard<std::mutex> lk(registry_mutex());
  return weights_.at(id);
}

std::optional<uint32_t> SymbolRegistry::find(const std::string& name) const {
  std::lock_guard<std::mutex> lk(registry_mutex());
  auto it = ids_.find(name);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

Scalar Scalar::symbol(uint32_t id) {
  Scalar s;
  s.symbolic_[Monomial{id}] = 1;
  return s;
}

Scalar Scalar::named(const std::string& name, int weight) {
  return symbol(SymbolRegistry::instance().intern(name, weight));
}

Rational Scalar::coefficient(const Monomial& m) const {
  if (m.empty()) return constant_;
  auto it = symbolic_.find(m);
  return it == symbolic_.end() ? Rational(0) : it->second;
}

std::vector<std::string> Scalar::formal_symbols() const {
  std::vector<std::string> out;
  auto& reg = SymbolRegistry::instance();
  for (auto& [m, c] : symbolic_)
    for (uint32_t id : m) {
      const std::string& n = reg.name(id);
      if (n != "z3" && std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    }
  std::sort(out.begin(), out.end());
  return out;
}

void Scalar::add_symbolic(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  if (m.empty()) {
    constant_ += c;
    return;
  }
  auto [it, fresh] = symbolic_.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) symbolic_.erase(it);
  }
}

Scalar& Scalar::operator+=(const Scalar& o) {
  constant_ += o.constant_;
  for (auto& [m, c] : o.symbolic_) add_symbolic(m, c);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  constant_ -= o.constant_;
  for (auto& [m, c] : o.symbolic_) add_symbolic(m, -c);
  return *this;
}

Scalar& Scalar::operator*=(const Rational& r) {
  if (r == 0) {
    constant_ = 0;
    symbolic_.clear();
    return *this;
  }
  constant_ *= r;
  for (auto& [m, c] : symbolic_) c *= r;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (o.symbolic_.empty()) return *this *= o.constant_;
  if (symbolic_.empty()) {
    Rational k = constant_;
    *this = o;
    return *this *= k;
  }
  Scalar out;
  out.constant_ = constant_ * o.constant_;
  for (auto& [m, c] : symbolic_) out.add_symbolic(m, c * o.constant_);
  for (auto& [m, c] : o.symbolic_) out.add_symbolic(m, c * constant_);
  for (auto& [m1, c1] : symbolic_)
    for (auto& [m2, c2] : o.symbolic_) {
      Monomial m;
      m.reserve(m1.size() + m2.size());
      std::merge(m1.begin(), m1.end(), m2.begin(), m2.end(), std::back_inserter(m));
      out.add_symbolic(m, c1 * c2);
    }
  *this = std::move(out);
  return *this;
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  s *= Rational(-1);
  return s;
}

bool Scalar::operator==(const Scalar& o) const {
  return constant_ == o.constant_ && symbolic_ == o.symbolic_;
}

std::string Scalar::to_string() const {
  auto& reg = SymbolRegistry::instance();
  std::vector<std::pair<std::string, Rational>> parts;
  if (constant_ != 0 || symbolic_.empty()) parts.push_back({"", constant_});
  for (auto& [m, c] : symbolic_) {
    std::string mono;
    for (size_t i = 0; i < m.size();) {
      size_t j = i;
      while (j < m.size() && m[j] == m[i]) ++j;
      if (!mono.empty()) mono += '*';
      mono += reg.name(m[i]);
      if (j - i > 1) mono += "^" + std::to_string(j - i);
      i = j;
    }
    parts.push_back({mono, c});
  }
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    auto [mono, c] = parts[i];
    bool neg = c < 0;
    Rational a = neg ? Rational(-c) : c;
    if (i == 0)
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    if (mono.empty())
      out += a.get_str();
    else if (a == 1)
      out += mono;
    else
      out += a.get_str() + "*" + mono;
  }
  return out;
}

Scalar Scalar::parse(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty scalar");
  Scalar out;
  // split on top-level " + " / " - " and a leading sign
  std::vector<std::pair<int, std::string>> terms;
  int sign = 1;
  size_t pos = 0;
  if (s[0] == '-') {
    sign = -1;
    pos = 1;
  }
  size_t start = pos;
  for (size_t i = pos; i + 2 < s.size(); ++i) {
    if (s[i] == ' ' && (s[i + 1] == '+' || s[i + 1] == '-') && s[i + 2] == ' ') {
      terms.push_back({sign, s.substr(start, i - start)});
      sign = s[i + 1] == '-' ? -1 : 1;
      start = i + 3;
      i += 2;
    }
  }
  terms.push_back({sign, s.substr(start)});
  for (auto& [sg, t] : terms) {
    std::vector<std::string> factors;
    std::string cur;
    int depth = 0;
    for (char ch : t) {
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (ch == '*' && depth == 0) {
        factors.push_back(trim(cur));
        cur.clear();
      } else {
        cur += ch;
      }
    }
    factors.push_back(trim(cur));
    Scalar term{Rational(sg)};
    for (auto& f : factors) {
      if (f.empty()) throw std::invalid_argument("bad scalar: " + s);
      if (std::isdigit(static_cast<unsigned char>(f[0]))) {
        Rational r;
        if (r.set_str(f, 10) != 0) throw std::invalid_argument("bad rational: " + f);
        r.canonicalize();
        term *= r;
      } else {
        int power = 1;
        std::string name = f;
        auto caret = f.rfind('^');
        if (caret != std::string::npos && f.find(')', caret) == std::string::npos) {
          power = std::stoi(f.substr(caret + 1));
          name = f.substr(0, caret);
        }
        Scalar sym = Scalar::named(name, symbol_weight_from_name(name));
        for (int k = 0; k < power; ++k) term *= sym;
      }
    }
    out += term;
  }
  return out;
}

}  // namespace lmo
