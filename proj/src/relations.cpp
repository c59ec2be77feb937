#include "lmo/relations.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_set>

namespace lmo {

namespace {

// Drop dead vertices and renumber; live half-edges must not point at dead ones.
Diagram compact(const Diagram& d, const std::vector<char>& dead) {
  Diagram out;
  out.free_loops = d.free_loops;
  std::vector<int> id(d.vertex_count(), -1);
  for (int v = 0; v < d.vertex_count(); ++v)
    if (!dead[v]) id[v] = out.add_vertex(d.valence[v]);
  for (int v = 0; v < d.vertex_count(); ++v) {
    if (dead[v]) continue;
    for (int p = 0; p < d.valence[v]; ++p) {
      int h = d.partner[3 * v + p];
      out.partner[3 * id[v] + p] = 3 * id[h / 3] + h % 3;
    }
  }
  for (auto& c : d.skeleton) {
    SkeletonComponent nc{c.kind, {}};
    for (int v : c.sites)
      if (!dead[v]) nc.sites.push_back(id[v]);
    out.skeleton.push_back(std::move(nc));
  }
  return out;
}

std::pair<int, int> site_of(const Diagram& d, int v) {
  for (size_t c = 0; c < d.skeleton.size(); ++c) {
    auto& s = d.skeleton[c].sites;
    auto it = std::find(s.begin(), s.end(), v);
    if (it != s.end()) return {static_cast<int>(c), static_cast<int>(it - s.begin())};
  }
  throw std::logic_error("univalent vertex not on skeleton");
}

// Legs at sites i, j (cyclically adjacent, i earlier) merged into one trivalent
// vertex ordered (leg i's partner, leg j's partner, new leg).
Diagram merge_legs(const Diagram& d, int c, int i, int j) {
  Diagram x = d;
  const int l1 = x.skeleton[c].sites[i], l2 = x.skeleton[c].sites[j];
  const int a = x.partner[3 * l1], b = x.partner[3 * l2];
  int w = x.add_vertex(3);
  int l = x.add_vertex(1);
  x.connect(3 * w, a);
  x.connect(3 * w + 1, b);
  x.connect(3 * w + 2, 3 * l);
  x.skeleton[c].sites[i] = l;
  std::vector<char> dead(x.vertex_count(), 0);
  dead[l1] = dead[l2] = 1;
  return compact(x, dead);
}

// Leg list with sites i and j swapped.
Diagram swap_sites(const Diagram& d, int c, int i, int j) {
  Diagram x = d;
  std::swap(x.skeleton[c].sites[i], x.skeleton[c].sites[j]);
  return x;
}

std::vector<std::pair<int, int>> edges(const Diagram& d) {
  std::vector<std::pair<int, int>> out;
  for (int h = 0; h < static_cast<int>(d.partner.size()); ++h)
    if (d.partner[h] > h) out.push_back({h, d.partner[h]});
  return out;
}

int header_int(const std::string& code, int field) {
  int f = 0, value = 0;
  for (size_t i = 0; i <= code.size(); ++i) {
    if (i == code.size() || code[i] == ',') {
      if (f == field) return value;
      ++f;
      value = 0;
    } else {
      value = value * 10 + (code[i] - '0');
    }
  }
  throw std::invalid_argument("bad diagram code");
}

int trivalent_in_code(const std::string& code) {
  const int nc = header_int(code, 0);
  int legs = 0;
  for (int c = 0; c < nc; ++c) legs += header_int(code, 2 + 2 * c);
  return header_int(code, 2 * nc + 2) - legs;
}

// Diagrams with more trivalent vertices sort higher and are eliminated first.
struct ColKey {
  int tri;
  std::string code;
  bool operator<(const ColKey& o) const { return tri != o.tri ? tri < o.tri : code < o.code; }
  bool operator>(const ColKey& o) const { return o < *this; }
};
ColKey col_key(const std::string& code) { return {trivalent_in_code(code), code}; }

// Apply O/L/D to one diagram: nullopt when it vanishes, else (diagram, factor).
std::optional<std::pair<Diagram, Rational>> quotient_term(Diagram d, const RelationSet& r) {
  if (r.degree_above >= 0 && degree(d) > r.degree_above) return std::nullopt;
  if (r.few_legs > 0)
    for (auto& c : d.skeleton)
      if (c.kind == ComponentKind::Circle && static_cast<int>(c.sites.size()) < 2 * r.few_legs) return std::nullopt;
  Rational f = 1;
  if (r.loop > 0) {
    for (int i = 0; i < d.free_loops; ++i) f *= -2 * r.loop;
    d.free_loops = 0;
  }
  return std::make_pair(std::move(d), f);
}

Relation to_relation(const Combination& comb, const RelationSet& r) {
  Relation rel;
  for (auto& [d, c] : comb) {
    auto q = quotient_term(d, r);
    if (!q) continue;
    auto f = canonical_form(q->first);
    if (f.sign == 0) continue;
    Rational v = c * q->second * f.sign;
    auto [it, fresh] = rel.try_emplace(f.code, v);
    if (!fresh) {
      it->second += v;
      if (it->second == 0) rel.erase(it);
    }
  }
  return rel;
}

using Row = std::vector<std::pair<ColKey, Rational>>;  // descending, leading entry 1

class Echelon {
 public:
  // Returns true when the relation raised the rank.
  bool insert(const Relation& rel) {
    std::map<ColKey, Rational, std::greater<>> w;
    for (auto& [code, c] : rel) w.emplace(col_key(code), c);
    while (!w.empty()) {
      auto it = w.begin();
      auto p = pivots_.find(it->first);
      if (p == pivots_.end()) {
        Rational lead = it->second;
        Row row;
        for (auto& [k, c] : w) row.push_back({k, c / lead});
        pivots_.emplace(it->first, std::move(row));
        return true;
      }
      Rational f = it->second;
      for (auto& [k, c] : p->second) {
        auto [jt, fresh] = w.try_emplace(k, -f * c);
        if (!fresh) {
          jt->second -= f * c;
          if (jt->second == 0) w.erase(jt);
        }
      }
    }
    return false;
  }

  std::map<ColKey, Scalar, std::greater<>> reduce(std::map<ColKey, Scalar, std::greater<>> w) const {
    auto it = w.begin();
    while (it != w.end()) {
      auto p = pivots_.find(it->first);
      if (p == pivots_.end()) {
        ++it;
        continue;
      }
      const ColKey key = it->first;
      const Scalar f = it->second;
      for (auto& [k, c] : p->second) {
        Scalar delta = f * Scalar(c);
        auto [jt, fresh] = w.try_emplace(k, -delta);
        if (!fresh) {
          jt->second -= delta;
          if (jt->second.is_zero()) w.erase(jt);
        }
      }
      it = w.upper_bound(key);
    }
    return w;
  }

  size_t rank() const { return pivots_.size(); }

 private:
  std::map<ColKey, Row> pivots_;
};

class Reducer {
 public:
  explicit Reducer(RelationSet r) : r_(r) {}

  // Expand the closure from the seeds for at most `rounds` rounds; returns
  // whether the closure is saturated afterwards.
  bool expand(const std::vector<std::string>& seeds, int rounds) {
    for (auto& s : seeds)
      if (known_.insert(s).second) pending_.push_back(s);
    for (int round = 0; round < rounds && !pending_.empty(); ++round) {
      std::vector<std::string> next;
      std::sort(pending_.begin(), pending_.end());
      for (auto& code : pending_) {
        for (auto& rel : relations_of(code)) {
          for (auto& [c, q] : rel)
            if (known_.insert(c).second) {
              next.push_back(c);
              if (known_.size() > r_.max_diagrams)
                throw ClosureBudgetExceeded("relation closure exceeded " + std::to_string(r_.max_diagrams) +
                                            " diagrams");
            }
          echelon_.insert(rel);
        }
      }
      pending_ = std::move(next);
    }
    return pending_.empty();
  }

  Element reduce(const Element& e) {
    std::vector<std::string> seeds;
    for (auto& [k, c] : e.terms()) seeds.push_back(k);
    bool saturated = expand(seeds, r_.closure_rounds);
    std::map<ColKey, Scalar, std::greater<>> w;
    for (auto& [k, c] : e.terms()) w.emplace(col_key(k), c);
    w = echelon_.reduce(std::move(w));
    Element out(e.skeleton(), e.max_degree());
    for (auto& [k, c] : w) out.add_code(k.code, c);
    if (!out.is_zero() && !saturated)
      throw ClosureBudgetExceeded("relation closure did not saturate within " + std::to_string(r_.closure_rounds) +
                                  " rounds");
    return out;
  }

  SpanInfo span(const std::vector<std::string>& seeds) {
    expand(seeds, 1 << 30);
    return {known_.size(), echelon_.rank()};
  }

  std::mutex mu;

 private:
  std::vector<Relation> relations_of(const std::string& code) const {
    Diagram d = decode_diagram(code);
    std::vector<Combination> combs;
    if (r_.ihx) {
      auto v = ihx_relations(d);
      combs.insert(combs.end(), v.begin(), v.end());
    }
    if (r_.stu) {
      auto v = stu_relations(d);
      combs.insert(combs.end(), v.begin(), v.end());
    }
    if (r_.pairing > 0) {
      auto v = pairing_relations(d, r_.pairing);
      combs.insert(combs.end(), v.begin(), v.end());
    }
    std::vector<Relation> out;
    for (auto& c : combs) {
      Relation rel = to_relation(c, r_);
      if (!rel.empty()) out.push_back(std::move(rel));
    }
    return out;
  }

  RelationSet r_;
  std::unordered_set<std::string> known_;
  std::vector<std::string> pending_;
  Echelon echelon_;
};

std::string skeleton_key(const Skeleton& s) {
  std::string k;
  for (auto c : s) k += c == ComponentKind::Circle ? 'o' : '|';
  return k;
}

Reducer& shared_reducer(const Skeleton& s, const RelationSet& r) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<Reducer>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[skeleton_key(s) + "/" + r.key()];
  if (!slot) slot = std::make_unique<Reducer>(r);
  return *slot;
}

bool has_generators(const RelationSet& r) { return r.ihx || r.stu || r.pairing > 0; }

}  // namespace

std::string RelationSet::key() const {
  std::ostringstream s;
  s << ihx << stu << ',' << pairing << ',' << loop << ',' << few_legs << ',' << degree_above << ','
    << closure_rounds << ',' << max_diagrams;
  return s.str();
}

std::vector<Combination> ihx_relations(const Diagram& d) {
  std::vector<Combination> out;
  for (auto [hu, hv] : edges(d)) {
    const int u = hu / 3, v = hv / 3;
    if (u == v || d.valence[u] != 3 || d.valence[v] != 3) continue;
    const int p = hu % 3, q = hv % 3;
    // slots: u's ports after p, then v's ports after q
    const int slot[4] = {3 * u + (p + 1) % 3, 3 * u + (p + 2) % 3, 3 * v + (q + 1) % 3, 3 * v + (q + 2) % 3};
    int target[4];  // outside half-edge, or -(slot index)-1
    for (int i = 0; i < 4; ++i) {
      int t = d.partner[slot[i]];
      target[i] = t;
      for (int j = 0; j < 4; ++j)
        if (slot[j] == t) target[i] = -j - 1;
    }
    auto build = [&](const int sigma[4]) {
      Diagram x = d;
      int where[4];  // slot index -> new port
      for (int k = 0; k < 4; ++k) where[sigma[k]] = slot[k];
      for (int k = 0; k < 4; ++k) {
        int t = target[sigma[k]];
        if (t >= 0)
          x.connect(slot[k], t);
        else
          x.connect(slot[k], where[-t - 1]);
      }
      return x;
    };
    static const int s0[4] = {0, 1, 2, 3}, s1[4] = {1, 2, 0, 3}, s2[4] = {2, 0, 1, 3};
    out.push_back({{build(s0), 1}, {build(s1), 1}, {build(s2), 1}});
  }
  return out;
}

std::vector<Combination> stu_relations(const Diagram& d) {
  std::vector<Combination> out;
  // d as the T term: adjacent legs i, i+1 (with wrap on circles)
  for (size_t c = 0; c < d.skeleton.size(); ++c) {
    const auto& s = d.skeleton[c].sites;
    const int n = static_cast<int>(s.size());
    if (n < 2) continue;
    const int pairs = d.skeleton[c].kind == ComponentKind::Circle ? n : n - 1;
    for (int i = 0; i < pairs; ++i) {
      int j = (i + 1) % n;
      if (d.partner[3 * s[i]] / 3 == s[j]) continue;  // isolated chord: T = U
      out.push_back({{d, 1}, {swap_sites(d, c, i, j), -1}, {merge_legs(d, c, i, j), -1}});
    }
  }
  // d as the S term: trivalent vertex next to a leg
  for (int w = 0; w < d.vertex_count(); ++w) {
    if (d.valence[w] != 3) continue;
    for (int p = 0; p < 3; ++p) {
      int l = d.partner[3 * w + p] / 3;
      if (d.valence[l] != 1) continue;
      int a = d.partner[3 * w + (p + 1) % 3], b = d.partner[3 * w + (p + 2) % 3];
      if (a / 3 == w || b / 3 == w) continue;
      auto [c, i] = site_of(d, l);
      auto make = [&](bool a_first) {
        Diagram x = d;
        int na = x.add_vertex(1), nb = x.add_vertex(1);
        x.connect(3 * na, a);
        x.connect(3 * nb, b);
        auto& s = x.skeleton[c].sites;
        s[i] = a_first ? na : nb;
        s.insert(s.begin() + i + 1, a_first ? nb : na);
        std::vector<char> dead(x.vertex_count(), 0);
        dead[w] = dead[l] = 1;
        return compact(x, dead);
      };
      out.push_back({{make(true), 1}, {make(false), -1}, {d, -1}});
    }
  }
  return out;
}

std::vector<Combination> pairing_relations(const Diagram& d, int k) {
  std::vector<Combination> out;
  const auto es = edges(d);
  const int E = static_cast<int>(es.size()), items = E + d.free_loops;
  if (items == 0 || k <= 0) return out;
  // multisets of k items as nondecreasing sequences
  std::vector<int> choice(k, 0);
  std::function<void(int, int)> rec = [&](int pos, int from) {
    if (pos < k) {
      for (int i = from; i < items; ++i) {
        choice[pos] = i;
        rec(pos + 1, i);
      }
      return;
    }
    std::vector<int> cuts(items, 0);
    for (int i : choice) ++cuts[i];
    // nodes: ends 0..2k-1, then diagram half-edges as 2k + h
    const int nends = 2 * k;
    std::map<int, int> seg;  // node -> node along the original dashed line
    auto link = [&](int a, int b) {
      seg[a] = b;
      seg[b] = a;
    };
    int next = 0, loops_cut = 0;
    std::vector<int> touched;
    for (int i = 0; i < items; ++i) {
      if (!cuts[i]) continue;
      const int c = cuts[i], first = next;
      next += 2 * c;
      if (i < E) {
        auto [h1, h2] = es[i];
        touched.push_back(h1);
        touched.push_back(h2);
        link(nends + h1, first);
        for (int t = 1; t < c; ++t) link(first + 2 * t - 1, first + 2 * t);
        link(first + 2 * c - 1, nends + h2);
      } else {
        ++loops_cut;
        for (int t = 1; t < c; ++t) link(first + 2 * t - 1, first + 2 * t);
        link(first + 2 * c - 1, first);
      }
    }
    // all perfect matchings of the ends
    std::vector<int> mate(nends, -1);
    std::function<void()> match = [&]() {
      int a = 0;
      while (a < nends && mate[a] >= 0) ++a;
      if (a == nends) {
        Diagram x = d;
        x.free_loops -= loops_cut;
        std::vector<char> seen(nends, 0);
        for (int h : touched) x.partner[h] = -1;
        for (int h : touched) {
          if (x.partner[h] >= 0) continue;
          int node = seg.at(nends + h);
          while (true) {
            seen[node] = 1;
            int m = mate[node];
            seen[m] = 1;
            int after = seg.at(m);
            if (after >= nends) {
              x.connect(h, after - nends);
              break;
            }
            node = after;
          }
        }
        for (int e = 0; e < nends; ++e) {
          if (seen[e]) continue;
          ++x.free_loops;
          int node = e;
          while (!seen[node]) {
            seen[node] = 1;
            int m = mate[node];
            seen[m] = 1;
            node = seg.at(m);
          }
        }
        out.back().push_back({std::move(x), 1});
        return;
      }
      for (int b = a + 1; b < nends; ++b) {
        if (mate[b] >= 0) continue;
        mate[a] = b;
        mate[b] = a;
        match();
        mate[a] = mate[b] = -1;
      }
    };
    out.emplace_back();
    match();
  };
  rec(0, 0);
  return out;
}

Element apply_quotients(const Element& e, const RelationSet& r) {
  if (r.loop <= 0 && r.few_legs <= 0 && r.degree_above < 0) return e;
  int cap = e.max_degree();
  if (r.degree_above >= 0) cap = std::min(cap, r.degree_above);
  Element out(e.skeleton(), cap);
  for (auto& [k, c] : e.terms()) {
    auto q = quotient_term(decode_diagram(k), r);
    if (q) out.add(q->first, c * Scalar(q->second));
  }
  return out;
}

Element reduce_mod(const Element& e, const RelationSet& r) {
  Element q = apply_quotients(e, r);
  if (q.is_zero() || !has_generators(r)) return q;
  Reducer& red = shared_reducer(q.skeleton(), r);
  std::lock_guard lock(red.mu);
  return red.reduce(q);
}

bool equal_mod(const Element& a, const Element& b, const RelationSet& r) { return reduce_mod(a - b, r).is_zero(); }

SpanInfo relation_span(const std::vector<std::string>& seeds, const RelationSet& r) {
  Reducer red(r);
  return red.span(seeds);
}

std::optional<std::vector<Scalar>> solve_in_span(const Element& target, const std::vector<Element>& basis,
                                                 const RelationSet& r) {
  RelationSet sat = r;
  sat.closure_rounds = 1 << 30;
  Reducer red(sat);
  auto nf = [&](const Element& e) {
    Element q = apply_quotients(e, r);
    return has_generators(r) ? red.reduce(q) : q;
  };
  // columns: codes; unknowns: basis coefficients; eliminate on augmented rows
  const size_t n = basis.size();
  std::vector<Element> b;
  for (auto& x : basis) b.push_back(nf(x));
  Element t = nf(target);
  std::set<std::string> codes;
  for (auto& x : b)
    for (auto& [k, c] : x.terms()) codes.insert(k);
  for (auto& [k, c] : t.terms()) codes.insert(k);
  // one equation per code: sum_i x_i b_i[code] = t[code]; basis entries may be
  // non-rational only through the target
  std::vector<std::vector<Rational>> a;
  std::vector<Scalar> rhs;
  for (auto& code : codes) {
    std::vector<Rational> row(n);
    for (size_t i = 0; i < n; ++i) {
      auto it = b[i].terms().find(code);
      if (it == b[i].terms().end()) continue;
      if (!it->second.is_rational()) throw std::invalid_argument("solve_in_span: basis must be rational");
      row[i] = it->second.constant();
    }
    auto it = t.terms().find(code);
    a.push_back(std::move(row));
    rhs.push_back(it == t.terms().end() ? Scalar(0) : it->second);
  }
  const size_t m = a.size();
  std::vector<size_t> pivot_col;
  size_t rank = 0;
  for (size_t col = 0; col < n && rank < m; ++col) {
    size_t p = rank;
    while (p < m && a[p][col] == 0) ++p;
    if (p == m) continue;
    std::swap(a[p], a[rank]);
    std::swap(rhs[p], rhs[rank]);
    Rational lead = a[rank][col];
    for (auto& v : a[rank]) v /= lead;
    rhs[rank] = rhs[rank] * Scalar(1 / lead);
    for (size_t i = 0; i < m; ++i) {
      if (i == rank || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (size_t j = 0; j < n; ++j) a[i][j] -= f * a[rank][j];
      rhs[i] -= rhs[rank] * Scalar(f);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  if (rank < n) throw std::invalid_argument("solve_in_span: basis is dependent");
  for (size_t i = rank; i < m; ++i)
    if (!rhs[i].is_zero()) return std::nullopt;
  std::vector<Scalar> x(n);
  for (size_t i = 0; i < rank; ++i) x[pivot_col[i]] = rhs[i];
  return x;
}

}  // namespace lmo
