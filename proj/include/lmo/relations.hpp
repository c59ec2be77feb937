#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lmo/element.hpp"

namespace lmo {

struct ClosureBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// AS is built into the canonical codes and always holds. The integer
// parameters are off when 0 (degree_above: when negative).
struct RelationSet {
  bool ihx = true;
  bool stu = false;
  int pairing = 0;        // P_k: sum over pairings of 2k cut points vanishes
  int loop = 0;           // O_n: free loop -> -2n
  int few_legs = 0;       // L_{<2n}: a circle with fewer than 2n legs -> 0
  int degree_above = -1;  // D_{>n}
  int closure_rounds = 4;
  std::size_t max_diagrams = 200000;

  std::string key() const;
  static RelationSet tree() { return {}; }  // AS + IHX
  static RelationSet skeleton() {
    RelationSet r;
    r.stu = true;
    return r;
  }
};

// Linear relation among canonical codes, sign folded.
using Relation = std::map<std::string, Rational>;
using Combination = std::vector<std::pair<Diagram, Rational>>;

// Single-step relations around one diagram, before quotients.
std::vector<Combination> ihx_relations(const Diagram& d);
std::vector<Combination> stu_relations(const Diagram& d);
std::vector<Combination> pairing_relations(const Diagram& d, int k);

// O_n, L_{<2n} and D_{>n} as substitutions on terms.
Element apply_quotients(const Element& e, const RelationSet& r);

// Normal form modulo R. Throws ClosureBudgetExceeded when the closure did not
// saturate and the residue is nonzero.
Element reduce_mod(const Element& e, const RelationSet& r);
bool equal_mod(const Element& a, const Element& b, const RelationSet& r);

// Closure of the seeds under R (saturated, ignoring the round budget but not
// max_diagrams): number of diagrams and rank of the relations among them.
struct SpanInfo {
  std::size_t diagrams = 0;
  std::size_t rank = 0;
  std::size_t dimension() const { return diagrams - rank; }
};
SpanInfo relation_span(const std::vector<std::string>& seeds, const RelationSet& r);

// Coefficients x with target = sum x_i basis_i modulo R; nullopt when target
// is not in the span. Basis elements must be independent modulo R.
std::optional<std::vector<Scalar>> solve_in_span(const Element& target, const std::vector<Element>& basis,
                                                 const RelationSet& r);

}  // namespace lmo
