#pragma once

#include <map>
#include <string>
#include <vector>

#include "lmo/scalar.hpp"

namespace lmo {

// Truncated power series in the non-commuting letters A and B; words are
// strings over {'A','B'}.
class FreeSeries {
 public:
  explicit FreeSeries(int max_weight = 0) : max_weight_(max_weight) {}
  static FreeSeries one(int max_weight);

  int max_weight() const { return max_weight_; }
  const std::map<std::string, Scalar>& terms() const { return terms_; }
  Scalar coefficient(const std::string& word) const;
  void add(const std::string& word, const Scalar& c);
  FreeSeries& operator+=(const FreeSeries& o);
  FreeSeries operator*(const FreeSeries& o) const;
  FreeSeries weight_part(int w) const;

 private:
  int max_weight_;
  std::map<std::string, Scalar> terms_;
};

// eta(p; q) = zeta(1_{p_1-1}, q_1+1, ..., 1_{p_k-1}, q_k+1), normalized; zero if
// any entry is 0.
Scalar eta(const std::vector<int>& p, const std::vector<int>& q);

// Normalized associator up to the given weight, and its inverse.
const FreeSeries& phi(int max_weight);
const FreeSeries& phi_inverse(int max_weight);

// f(a, b) in an algebra with unit, product and scalar multiplication. Words are
// evaluated through a prefix cache.
template <class Alg, class MulFn, class ScaleFn>
Alg substitute(const FreeSeries& f, const Alg& unit, const Alg& a, const Alg& b, MulFn mul,
               ScaleFn scale) {
  std::map<std::string, Alg> prefix;
  prefix.emplace("", unit);
  Alg out = scale(unit, Scalar(0));
  for (auto& [word, c] : f.terms()) {
    // longest cached prefix, then extend
    size_t len = word.size();
    while (!prefix.count(word.substr(0, len))) --len;
    for (; len < word.size(); ++len) {
      const Alg& base = prefix.at(word.substr(0, len));
      prefix.emplace(word.substr(0, len + 1), mul(base, word[len] == 'A' ? a : b));
    }
    out += scale(prefix.at(word), c);
  }
  return out;
}

}  // namespace lmo
