#pragma once

#include <map>
#include <string>
#include <utility>

#include "lmo/diagram.hpp"
#include "lmo/scalar.hpp"

namespace lmo {

// Linear combination of diagrams on a fixed skeleton, keyed by canonical code
// (the canonical sign is folded into the coefficient).
class Element {
 public:
  static constexpr int kNoCap = 1 << 20;

  Element() = default;
  explicit Element(Skeleton s, int max_degree = kNoCap) : skeleton_(std::move(s)), max_degree_(max_degree) {}
  static Element one(Skeleton s, int max_degree = kNoCap);
  static Element of(const Diagram& d, const Scalar& c = Scalar(1), int max_degree = kNoCap);

  const Skeleton& skeleton() const { return skeleton_; }
  int max_degree() const { return max_degree_; }
  const std::map<std::string, Scalar>& terms() const { return terms_; }

  void add(const Diagram& d, const Scalar& c);
  void add_code(const std::string& code, const Scalar& c);  // code must be canonical
  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  Element scaled(const Scalar& s) const;
  Scalar coefficient(const Diagram& d) const;
  Scalar constant() const;  // coefficient of the empty diagram
  Element degree_part(int d) const;
  Element truncated(int d) const;
  int top_degree() const;  // -1 for zero
  bool is_zero() const { return terms_.empty(); }
  bool operator==(const Element& o) const;

 private:
  Skeleton skeleton_;
  int max_degree_ = kNoCap;
  std::map<std::string, Scalar> terms_;
};

// Degree of a canonical code without decoding the edges.
int code_degree(const std::string& code);

// Orientation reversal of component c: sites reversed, sign (-1)^{legs on c}.
Element s_map(const Element& e, int c);
// Sum over lifts of the legs on c to two parallel copies (copy inserted at c+1).
Element delta_map(const Element& e, int c);
// Splice circle cb of b into circle ca of a after the last site; b's other
// components follow a's.
Element connect_sum(const Element& a, int ca, const Element& b, int cb);
// Disjoint union of skeletons and graphs.
Element tensor_union(const Element& a, const Element& b);
// Product in A(empty): disjoint union of graphs.
Element graph_product(const Element& a, const Element& b);
// Degree d scaled by (-1)^d.
Element shat(const Element& e);
// Reorder skeleton components: new component i is old component perm[i].
Element permute_components(const Element& e, const std::vector<int>& perm);

// x in A(empty) with constant term c0 != 0: inverse, log and exp up to the cap.
Element graded_invert(const Element& x, int max_degree);
Element log_group_like(const Element& x, int max_degree);
Element exp_primitive(const Element& x, int max_degree);
Element graded_power(const Element& x, long k, int max_degree);  // k may be negative

// Sum of (left code, right code) pairs: an element of A(X) (x) A(Y).
class TensorElement {
 public:
  TensorElement() = default;
  TensorElement(Skeleton left, Skeleton right) : left_(std::move(left)), right_(std::move(right)) {}
  static TensorElement of(const Element& a, const Element& b);

  const Skeleton& left() const { return left_; }
  const Skeleton& right() const { return right_; }
  const std::map<std::pair<std::string, std::string>, Scalar>& terms() const { return terms_; }
  void add(const std::string& l, const std::string& r, const Scalar& c);
  void add(const Diagram& l, const Diagram& r, const Scalar& c);
  TensorElement& operator-=(const TensorElement& o);
  TensorElement swapped() const;
  // Expand each factor through a linear map given on single codes.
  template <class F>
  TensorElement map_factors(F&& f) const;
  bool is_zero() const { return terms_.empty(); }
  bool operator==(const TensorElement& o) const { return left_ == o.left_ && right_ == o.right_ && terms_ == o.terms_; }

 private:
  Skeleton left_, right_;
  std::map<std::pair<std::string, std::string>, Scalar> terms_;
};

// Sum over subsets of connected dashed components (free loops count as components).
TensorElement comultiply(const Element& e);

template <class F>
TensorElement TensorElement::map_factors(F&& f) const {
  TensorElement out(left_, right_);
  std::map<std::string, Element> cache;
  auto image = [&](const std::string& code, const Skeleton& s) -> const Element& {
    auto it = cache.find(code);
    if (it != cache.end()) return it->second;
    return cache.emplace(code, f(code, s)).first->second;
  };
  for (auto& [k, c] : terms_) {
    const Element& l = image(k.first, left_);
    const Element& r = image(k.second, right_);
    for (auto& [lc, ls] : l.terms())
      for (auto& [rc, rs] : r.terms()) out.add(lc, rc, c * ls * rs);
  }
  return out;
}

}  // namespace lmo
