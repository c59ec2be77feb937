#include "lmo/lmo.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace lmo {

Skeleton points(int m) { return Skeleton(static_cast<size_t>(m), ComponentKind::Interval); }

int descents(const std::vector<int>& seq) {
  int r = 0;
  for (size_t k = 1; k < seq.size(); ++k)
    if (seq[k - 1] > seq[k]) ++r;
  return r;
}

void attach_caterpillar(Diagram& d, const std::vector<int>& legs, const std::vector<int>& order) {
  const int k = static_cast<int>(legs.size());
  if (k < 2) throw std::invalid_argument("caterpillar needs two legs");
  if (static_cast<int>(order.size()) != k - 2) throw std::invalid_argument("caterpillar: bad branch order");
  int prev = legs[0];
  for (int j = 0; j < k - 2; ++j) {
    const int v = d.add_vertex(3);
    d.connect(prev, 3 * v);
    d.connect(3 * v + 1, legs.at(order[j]));
    prev = 3 * v + 2;
  }
  d.connect(prev, legs[k - 1]);
}

Diagram t_tau(const std::vector<int>& tau, int m) {
  if (m < 2 || static_cast<int>(tau.size()) != m - 2) throw std::invalid_argument("t_tau: need |tau| = m - 2 >= 0");
  std::vector<int> s = tau;
  std::sort(s.begin(), s.end());
  for (int j = 0; j < m - 2; ++j)
    if (s[j] != j + 1) throw std::invalid_argument("t_tau: not a permutation of 1..m-2");
  Diagram d = Diagram::on(points(m));
  std::vector<int> legs;
  for (int i = 0; i < m; ++i) legs.push_back(d.add_leg(i));
  attach_caterpillar(d, legs, tau);
  return d;
}

namespace {

Rational binom(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

Rational t_coefficient(int m, int r) {
  Rational c = 1 / (Rational(m - 1) * binom(m - 2, r));
  return r % 2 ? -c : c;
}

// T_k as (branch order, coefficient) pairs.
const std::vector<std::pair<std::vector<int>, Rational>>& tree_terms(int k) {
  static std::mutex mu;
  static std::map<int, std::vector<std::pair<std::vector<int>, Rational>>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<std::vector<int>, Rational>> out;
  std::vector<int> tau(k - 2);
  std::iota(tau.begin(), tau.end(), 1);
  do out.push_back({tau, t_coefficient(k, descents(tau))});
  while (std::next_permutation(tau.begin(), tau.end()));
  return cache.emplace(k, std::move(out)).first->second;
}

// Set partitions of 0..m-1 into exactly n blocks of size >= 2.
void partitions(int m, int n, std::vector<int>& label, std::vector<int>& size, int i,
                std::vector<std::vector<std::vector<int>>>& out) {
  const int used = static_cast<int>(size.size());
  int short_of_two = 0;
  for (int s : size) short_of_two += std::max(0, 2 - s);
  if (short_of_two + 2 * (n - used) > m - i) return;
  if (i == m) {
    std::vector<std::vector<int>> blocks(n);
    for (int j = 0; j < m; ++j) blocks[label[j]].push_back(j);
    out.push_back(std::move(blocks));
    return;
  }
  for (int b = 0; b < used; ++b) {
    label[i] = b;
    ++size[b];
    partitions(m, n, label, size, i + 1, out);
    --size[b];
  }
  if (used < n) {
    label[i] = used;
    size.push_back(1);
    partitions(m, n, label, size, i + 1, out);
    size.pop_back();
  }
}

}  // namespace

Element t_m(int m) {
  if (m < 2) throw std::invalid_argument("t_m: m >= 2");
  Element out(points(m));
  for (auto& [tau, c] : tree_terms(m)) out.add(t_tau(tau, m), Scalar(c));
  return out;
}

const Element& t_n_m(int n, int m) {
  if (n < 1 || m < 0) throw std::invalid_argument("t_n_m: n >= 1, m >= 0");
  static std::mutex mu;
  static std::map<std::pair<int, int>, Element> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find({n, m});
    if (it != cache.end()) return it->second;
  }
  Element out(points(m));
  std::vector<std::vector<std::vector<int>>> parts;
  if (m >= 2 * n) {
    std::vector<int> label(m), size;
    partitions(m, n, label, size, 0, parts);
  }
  for (auto& blocks : parts) {
    // odometer over one tree term per block
    std::vector<size_t> pick(n, 0);
    while (true) {
      Diagram d = Diagram::on(points(m));
      std::vector<int> legs;
      for (int i = 0; i < m; ++i) legs.push_back(d.add_leg(i));
      Rational c = 1;
      for (int b = 0; b < n; ++b) {
        auto& [order, cb] = tree_terms(static_cast<int>(blocks[b].size()))[pick[b]];
        std::vector<int> bl;
        for (int j : blocks[b]) bl.push_back(legs[j]);
        attach_caterpillar(d, bl, order);
        c *= cb;
      }
      out.add(d, Scalar(c));
      int b = 0;
      for (; b < n; ++b) {
        if (++pick[b] < tree_terms(static_cast<int>(blocks[b].size())).size()) break;
        pick[b] = 0;
      }
      if (b == n) break;
    }
  }
  std::lock_guard lock(mu);
  return cache.emplace(std::make_pair(n, m), std::move(out)).first->second;
}

Diagram glue_circle(const Diagram& d, int c, const Diagram& f) {
  const auto& circle = d.skeleton.at(c);
  if (circle.kind != ComponentKind::Circle) throw std::invalid_argument("glue_circle: not a circle");
  const int m = static_cast<int>(circle.sites.size());
  if (static_cast<int>(f.skeleton.size()) != m) throw std::invalid_argument("glue_circle: leg count mismatch");
  const int Vd = d.vertex_count(), Vf = f.vertex_count(), V = Vd + Vf;
  // combined vertex numbering: d first, then f
  auto partner = [&](int h) { return h < 3 * Vd ? d.partner[h] : f.partner[h - 3 * Vd] + 3 * Vd; };
  std::vector<int> bridge(V, -1);
  for (int i = 0; i < m; ++i) {
    if (f.skeleton[i].sites.size() != 1) throw std::invalid_argument("glue_circle: forest must sit on points");
    const int u = circle.sites[i], t = Vd + f.skeleton[i].sites[0];
    bridge[u] = t;
    bridge[t] = u;
  }
  std::vector<int> id(V, -1);
  int kept = 0;
  for (int v = 0; v < V; ++v)
    if (bridge[v] < 0) id[v] = kept++;
  Diagram out;
  out.valence.resize(kept);
  out.partner.assign(3 * kept, -1);
  for (int v = 0; v < V; ++v)
    if (id[v] >= 0) out.valence[id[v]] = v < Vd ? d.valence[v] : f.valence[v - Vd];
  std::vector<bool> seen(V, false);
  for (int v = 0; v < V; ++v) {
    if (id[v] < 0) continue;
    const int val = out.valence[id[v]];
    for (int p = 0; p < val; ++p) {
      int q = partner(3 * v + p);
      while (bridge[q / 3] >= 0) {
        seen[q / 3] = true;
        const int w = bridge[q / 3];
        seen[w] = true;
        q = partner(3 * w);
      }
      out.partner[3 * id[v] + p] = 3 * id[q / 3] + q % 3;
    }
  }
  int loops = 0;
  for (int v = 0; v < V; ++v) {
    if (bridge[v] < 0 || seen[v]) continue;
    ++loops;
    int r = v;
    do {
      seen[r] = true;
      seen[bridge[r]] = true;
      r = partner(3 * bridge[r]) / 3;
    } while (!seen[r]);
  }
  for (int k = 0; k < static_cast<int>(d.skeleton.size()); ++k) {
    if (k == c) continue;
    SkeletonComponent sc{d.skeleton[k].kind, {}};
    for (int s : d.skeleton[k].sites) sc.sites.push_back(id[s]);
    out.skeleton.push_back(std::move(sc));
  }
  out.free_loops = d.free_loops + f.free_loops + loops;
  return out;
}

RelationSet phi_relations(int n, int rounds) {
  RelationSet r = RelationSet::tree();
  r.degree_above = n;
  r.closure_rounds = rounds;
  return r;
}

namespace {

Scalar loop_factor(int n, int loops) {
  Rational x = 1;
  for (int i = 0; i < loops; ++i) x *= -2 * n;
  return Scalar(x);
}

// Forest terms of T^n_m as diagrams, decoded once.
const std::vector<std::pair<Diagram, Scalar>>& forest_terms(int n, int m) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<std::pair<Diagram, Scalar>>> cache;
  const Element& t = t_n_m(n, m);
  std::lock_guard lock(mu);
  auto it = cache.find({n, m});
  if (it != cache.end()) return it->second;
  std::vector<std::pair<Diagram, Scalar>> out;
  for (auto& [k, c] : t.terms()) out.push_back({decode_diagram(k), c});
  return cache.emplace(std::make_pair(n, m), std::move(out)).first->second;
}

// One gluing stage: circle 0 of every term replaced.
Element glue_stage(const Element& in, int n, int remaining_after, int workers) {
  Skeleton sk(in.skeleton().begin() + 1, in.skeleton().end());
  std::vector<std::pair<std::string, Scalar>> terms(in.terms().begin(), in.terms().end());
  const int W = std::max(1, std::min<int>(workers, static_cast<int>(terms.size())));
  std::vector<Element> part(W, Element(sk));
  auto run = [&](int w) {
    for (size_t t = w; t < terms.size(); t += W) {
      Diagram d = decode_diagram(terms[t].first);
      const int m = static_cast<int>(d.skeleton[0].sites.size());
      if (m < 2 * n) continue;
      // final degree = degree - n (this circle) - n * remaining circles
      if (degree(d) - n * (1 + remaining_after) > n) continue;
      for (auto& [f, cf] : forest_terms(n, m)) {
        Diagram g = glue_circle(d, 0, f);
        Scalar c = terms[t].second * cf * loop_factor(n, g.free_loops);
        g.free_loops = 0;
        part[w].add(g, c);
      }
    }
  };
  if (W == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < W; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  Element out(sk);
  for (auto& p : part) out += p;
  return out;
}

}  // namespace

Element iota(const Element& e, int n, const IotaOptions& opt) {
  if (n < 1) throw std::invalid_argument("iota: n >= 1");
  for (auto k : e.skeleton())
    if (k != ComponentKind::Circle) throw std::invalid_argument("iota: skeleton must consist of circles");
  const int L = static_cast<int>(e.skeleton().size());
  // free loops already present
  Element cur(e.skeleton());
  for (auto& [k, c] : e.terms()) {
    Diagram d = decode_diagram(k);
    if (d.free_loops == 0) {
      cur.add_code(k, c);
      continue;
    }
    Scalar f = loop_factor(n, d.free_loops);
    d.free_loops = 0;
    cur.add(d, c * f);
  }
  for (int s = 0; s < L; ++s) cur = glue_stage(cur, n, L - s - 1, opt.workers);
  Element capped({}, n);
  for (auto& [k, c] : cur.terms())
    if (code_degree(k) <= n) capped.add_code(k, c);
  return reduce_mod(capped, phi_relations(n, opt.closure_rounds));
}

const Element& iota_unknot(int sign, int n, const IotaOptions& opt) {
  static std::mutex mu;
  static std::map<std::tuple<uint64_t, int, int>, Element> cache;
  auto key = std::make_tuple(active_table_generation(), sign, n);
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  LinkDiagram u = add_framing_curls(parse_tokens("MAX 1 2\nMIN 1 2\n"), {sign > 0 ? 1 : -1});
  Element v = iota(check_z(u, {2 * n, 4 * n}), n, opt);
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(v)).first->second;
}

OmegaResult omega_n(const SurgeryPresentation& p, int n, const IotaOptions& opt, int extra_degree) {
  if (n < 1) throw std::invalid_argument("omega_n: n >= 1");
  OmegaResult res;
  const int L = p.diagram.components;
  if (static_cast<int>(p.framings.size()) != L) throw std::invalid_argument("omega_n: one framing per component");
  res.degree_cap = n * (L + 1) + extra_degree;
  res.leg_cap = 4 * n + 2 * extra_degree;
  if (L == 0) {
    res.value = Element::one({}, n);
    return res;
  }
  LinkDiagram d = add_framing_curls(p.diagram, p.framings);
  res.sigma = signature(linking_matrix(d, p.framings));
  Element z = check_z(d, {res.degree_cap, res.leg_cap});
  Element v = iota(z, n, opt);
  v = graph_product(v, graded_power(iota_unknot(+1, n, opt), -res.sigma.positive, n)).truncated(n);
  v = graph_product(v, graded_power(iota_unknot(-1, n, opt), -res.sigma.negative, n)).truncated(n);
  res.value = reduce_mod(v, phi_relations(n, opt.closure_rounds));
  return res;
}

Element omega_series(const SurgeryPresentation& p, int dmax, const IotaOptions& opt) {
  Element out = Element::one({}, dmax);
  for (int n = 1; n <= dmax; ++n) out += omega_n(p, n, opt).value.degree_part(n);
  return out;
}

Element omega_log(const Element& big_omega, int dmax, int rounds) {
  return reduce_mod(log_group_like(big_omega, dmax), phi_relations(dmax, rounds));
}

Scalar epsilon(const Element& e) { return e.constant(); }

Scalar theta_coefficient(const Element& e) { return e.coefficient(theta_graph()); }

TensorElement split_coproduct(const Element& e, int n1, int n2, int rounds) {
  TensorElement all = comultiply(e);
  TensorElement cut(all.left(), all.right());
  for (auto& [k, c] : all.terms())
    if (code_degree(k.first) <= n1 && code_degree(k.second) <= n2) cut.add(k.first, k.second, c);
  const RelationSet r = phi_relations(std::max(n1, n2), rounds);
  return cut.map_factors([&](const std::string& code, const Skeleton& s) {
    Element x(s);
    x.add_code(code, Scalar(1));
    return reduce_mod(x, r);
  });
}

}  // namespace lmo
