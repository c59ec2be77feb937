#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "lmo/diagram.hpp"

using namespace lmo;

namespace {
const Skeleton kCircle{ComponentKind::Circle};
}

TEST_CASE("chord diagrams on a circle up to rotation") {
  auto a = chord_diagram(kCircle, {{1, 2, 1, 2}});
  auto b = chord_diagram(kCircle, {{2, 1, 2, 1}});
  auto c = chord_diagram(kCircle, {{1, 1, 2, 2}});
  auto d = chord_diagram(kCircle, {{1, 2, 2, 1}});
  CHECK(canonical_form(a).code == canonical_form(b).code);
  CHECK(canonical_form(c).code == canonical_form(d).code);
  CHECK(canonical_form(a).code != canonical_form(c).code);
  CHECK(canonical_form(a).sign == 1);
}

TEST_CASE("intervals are not rotated") {
  Skeleton iv{ComponentKind::Interval};
  auto c = chord_diagram(iv, {{1, 1, 2, 2}});
  auto d = chord_diagram(iv, {{1, 2, 2, 1}});
  CHECK(canonical_form(c).code != canonical_form(d).code);
}

TEST_CASE("antisymmetry sign") {
  Diagram t = theta_graph();
  Diagram u = flip_all(t);  // two flips: same element
  CHECK(canonical_form(t).code == canonical_form(u).code);
  CHECK(canonical_form(t).sign == canonical_form(u).sign);
  // flipping a single vertex negates
  Diagram w = t;
  w.partner.assign(6, -1);
  w.connect(0, 5);
  w.connect(1, 3);
  w.connect(2, 4);
  auto ft = canonical_form(t), fw = canonical_form(w);
  CHECK(ft.code == fw.code);
  CHECK(ft.sign == -fw.sign);
}

TEST_CASE("self-loop vanishes") {
  // tripod-ish: vertex with a loop and a leg to a circle
  Diagram d = Diagram::on(kCircle);
  int v = d.add_vertex(3);
  d.connect(3 * v + 0, 3 * v + 1);
  int h = d.add_leg(0);
  d.connect(3 * v + 2, h);
  CHECK(canonical_form(d).sign == 0);
}

TEST_CASE("decode round trip") {
  auto a = chord_diagram({ComponentKind::Circle, ComponentKind::Interval}, {{1, 2, 1}, {2, 3, 3}});
  Diagram t = disjoint_union(a, theta_graph());
  auto f = canonical_form(t);
  Diagram r = decode_diagram(f.code);
  auto g = canonical_form(r);
  CHECK(g.code == f.code);
  CHECK(g.sign == 1);
  CHECK(degree(r) == 4);
}

namespace {

// Renumber vertices by perm and, at each trivalent vertex, rotate the ports
// by rot[v] and reflect them when refl[v]. Returns the relabelled diagram.
Diagram relabel(const Diagram& d, const std::vector<int>& perm, const std::vector<int>& rot,
                const std::vector<bool>& refl) {
  const int V = d.vertex_count();
  auto port = [&](int v, int p) {
    if (d.valence[v] != 3) return p;
    int q = (p + rot[v]) % 3;
    return refl[v] ? (3 - q) % 3 : q;
  };
  Diagram x;
  x.skeleton = d.skeleton;
  for (auto& c : x.skeleton)
    for (int& s : c.sites) s = perm[s];
  x.valence.assign(V, 0);
  x.partner.assign(3 * V, -1);
  x.free_loops = d.free_loops;
  for (int v = 0; v < V; ++v) x.valence[perm[v]] = d.valence[v];
  for (int h = 0; h < 3 * V; ++h) {
    const int q = d.partner[h];
    if (q < 0) continue;
    x.partner[3 * perm[h / 3] + port(h / 3, h % 3)] = 3 * perm[q / 3] + port(q / 3, q % 3);
  }
  return x;
}

// Random connected-ish diagram: a few trivalent vertices joined at random,
// remaining ports sent to legs on two circles.
Diagram random_diagram(std::mt19937& rng) {
  const Skeleton two{ComponentKind::Circle, ComponentKind::Circle};
  for (;;) {
    Diagram d = Diagram::on(two);
    const int T = 2 * (1 + rng() % 2);
    std::vector<int> open;
    for (int i = 0; i < T; ++i) {
      int v = d.add_vertex(3);
      for (int p = 0; p < 3; ++p) open.push_back(3 * v + p);
    }
    std::shuffle(open.begin(), open.end(), rng);
    const int internal = 2 * (rng() % 3);
    for (int i = 0; i + 1 < internal; i += 2) d.connect(open[i], open[i + 1]);
    for (size_t i = internal; i < open.size(); ++i) d.connect(open[i], d.add_leg(rng() % 2));
    d.connect(d.add_leg(rng() % 2), d.add_leg(rng() % 2));  // one chord
    validate(d);
    if (canonical_form(d).sign != 0) return d;
  }
}

}  // namespace

TEST_CASE("canonical form is invariant under relabelling, with the AS sign") {
  std::mt19937 rng(11);
  for (int it = 0; it < 200; ++it) {
    Diagram d = random_diagram(rng);
    const CanonicalForm base = canonical_form(d);
    const int V = d.vertex_count();
    std::vector<int> perm(V);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> rot(V);
    std::vector<bool> refl(V);
    int parity = 0;
    for (int v = 0; v < V; ++v) {
      rot[v] = rng() % 3;
      refl[v] = d.valence[v] == 3 && rng() % 2;
      parity ^= refl[v];
    }
    const CanonicalForm f = canonical_form(relabel(d, perm, rot, refl));
    CHECK(f.code == base.code);
    CHECK(f.sign == (parity ? -base.sign : base.sign));
    // idempotent: the decoded representative is its own canonical form
    const CanonicalForm again = canonical_form(decode_diagram(base.code));
    CHECK(again.code == base.code);
    CHECK(again.sign == 1);
  }
}
