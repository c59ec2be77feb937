#pragma once

#include <vector>

#include "lmo/element.hpp"
#include "lmo/kontsevich.hpp"
#include "lmo/links.hpp"
#include "lmo/relations.hpp"

namespace lmo {

// Trees live on m points (intervals with one leg each), point i = leg i.
Skeleton points(int m);

// Descents of a sequence.
int descents(const std::vector<int>& seq);

// Caterpillar: spine from leg 0 to leg m-1, the j-th spine vertex carries leg
// tau[j-1]; each spine vertex is ordered (towards 0, branch, towards m-1).
// tau is a permutation of 1..m-2.
Diagram t_tau(const std::vector<int>& tau, int m);
// Caterpillar on given leg half-edges of d: spine from legs[0] to
// legs.back(), branch j goes to legs[order[j]] (order indexes into legs).
void attach_caterpillar(Diagram& d, const std::vector<int>& legs, const std::vector<int>& order);

Element t_m(int m);
// Forests of n trees T_{m_i} (m_i >= 2) over all set partitions of the m
// legs; each tree keeps the order of its legs. Zero when m < 2n. Cached.
const Element& t_n_m(int n, int m);

// Replace circle c (m legs) of d by the forest f on m points: leg i of the
// circle is joined to point i. Dashed circles produced are added to free_loops.
Diagram glue_circle(const Diagram& d, int c, const Diagram& f);

struct IotaOptions {
  int workers = 1;
  int closure_rounds = 4;
};
// Every circle replaced by T^n_m, free loops -> -2n, reduced modulo AS, IHX
// and D_{>n}. The input skeleton must consist of circles.
Element iota(const Element& e, int n, const IotaOptions& opt = {});

RelationSet phi_relations(int n, int rounds = 4);

struct OmegaResult {
  Element value;  // in A(empty)/D_{>n}, normal form
  Signature sigma;
  int degree_cap = 0;  // cap used for the check-Z computation
  int leg_cap = 0;
};
// Caps may be raised above the minimal n(l+1), 4n for cross-checks.
OmegaResult omega_n(const SurgeryPresentation& p, int n, const IotaOptions& opt = {}, int extra_degree = 0);
// iota_n of check-Z of the unknot with framing +-1.
const Element& iota_unknot(int sign, int n, const IotaOptions& opt = {});

// 1 + sum_{n <= dmax} Omega_n^{(n)}.
Element omega_series(const SurgeryPresentation& p, int dmax, const IotaOptions& opt = {});

// log of a group-like series, reduced; throws unless the constant term is 1.
Element omega_log(const Element& big_omega, int dmax, int rounds = 4);
Scalar epsilon(const Element& e);
// Coefficient of the planar theta in a normal form.
Scalar theta_coefficient(const Element& e);

// Coproduct with the factors cut at degrees n1 and n2, each reduced mod
// AS, IHX and D_{>n_i}.
TensorElement split_coproduct(const Element& e, int n1, int n2, int rounds = 4);

}  // namespace lmo
