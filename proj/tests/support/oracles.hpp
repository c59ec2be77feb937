#pragma once

// Independent constructions used only to check the library.

#include <string>
#include <vector>

#include "lmo/lmo.hpp"

namespace oracle {

using lmo::Element;
using lmo::Rational;

Rational factorial(int n);
Rational binomial(int n, int k);
// (-1)^r / ((m-1) C(m-2, r))
Rational tree_coefficient(int m, int r);

// Relabel points: leg i of the result is leg perm[i] of e.
Element relabel(const Element& e, const std::vector<int>& perm);
Element swap_legs(const Element& e, int k);
// i -> m-1-i, and i -> m-2-i with m-1 fixed.
Element reflect_all(const Element& e);
Element reflect_fixing_last(const Element& e);

// e on m-1 points; point k becomes a vertex (stem, leg k, leg k+1).
Element bracket(const Element& e, int k);

// Small branch at the last leg: vertex (old edge, new leg m, leg m-1).
Element branch_map(const Element& e);
// Caterpillar on m+1 points, spine from leg m-1 to leg m, branch j -> sigma[j].
Element s_sigma(const std::vector<int>& sigma, int m);

// All permutations of 0..k-1 in lexicographic order.
std::vector<std::vector<int>> permutations(int k);

// Circle carrying n isolated chords.
Element isolated_chords(int n);

// Integer determinant by cofactor expansion (small matrices).
long cofactor_det(const lmo::IntMatrix& m);

}  // namespace oracle

namespace fixture {

lmo::LinkDiagram round_unknot();
lmo::LinkDiagram hopf(int sign);  // closure of sigma_1^{2 sign}
lmo::SurgeryPresentation unknot(int framing);
lmo::SurgeryPresentation hopf(int a, int b, int sign = 1);
lmo::SurgeryPresentation split(const lmo::SurgeryPresentation& a, const lmo::SurgeryPresentation& b);
lmo::SurgeryPresentation mirror(const lmo::SurgeryPresentation& p);
lmo::SurgeryPresentation reverse(const lmo::SurgeryPresentation& p, int c);
// Right-handed trefoil with the given framing.
lmo::SurgeryPresentation trefoil(int framing);

struct Named {
  std::string name;
  lmo::SurgeryPresentation p;
};
// Small fixture set for determinism and cap cross-checks.
std::vector<Named> standard_set();

}  // namespace fixture
