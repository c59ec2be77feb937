#include "lmo/diagram.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace lmo {

Diagram Diagram::on(const Skeleton& s) {
  Diagram d;
  for (auto k : s) d.skeleton.push_back({k, {}});
  return d;
}

int Diagram::add_vertex(int val) {
  valence.push_back(static_cast<uint8_t>(val));
  partner.insert(partner.end(), 3, -1);
  return vertex_count() - 1;
}

int Diagram::add_leg(int component) {
  int v = add_vertex(1);
  skeleton.at(component).sites.push_back(v);
  return 3 * v;
}

void Diagram::connect(int h1, int h2) {
  partner[h1] = h2;
  partner[h2] = h1;
}

int Diagram::univalent_count() const {
  return static_cast<int>(std::count(valence.begin(), valence.end(), 1));
}

int Diagram::trivalent_count() const {
  return static_cast<int>(std::count(valence.begin(), valence.end(), 3));
}

Skeleton Diagram::skeleton_kinds() const {
  Skeleton s;
  for (auto& c : skeleton) s.push_back(c.kind);
  return s;
}

int degree(const Diagram& d) { return d.vertex_count() / 2; }

void validate(const Diagram& d) {
  const int V = d.vertex_count();
  if (static_cast<int>(d.partner.size()) != 3 * V) throw std::invalid_argument("diagram: partner size");
  std::vector<int> on_site(V, 0);
  for (auto& c : d.skeleton) {
    for (int v : c.sites) {
      if (v < 0 || v >= V || d.valence[v] != 1) throw std::invalid_argument("diagram: bad site");
      ++on_site[v];
    }
  }
  for (int v = 0; v < V; ++v) {
    if (d.valence[v] != 1 && d.valence[v] != 3) throw std::invalid_argument("diagram: bad valence");
    if (d.valence[v] == 1 && on_site[v] != 1) throw std::invalid_argument("diagram: univalent vertex off skeleton");
    for (int p = 0; p < 3; ++p) {
      int h = 3 * v + p, q = d.partner[h];
      if (p >= d.valence[v]) {
        if (q != -1) throw std::invalid_argument("diagram: unused port connected");
        continue;
      }
      if (q < 0 || q >= 3 * V || q == h || d.partner[q] != h || (q % 3) >= d.valence[q / 3])
        throw std::invalid_argument("diagram: inconsistent edge");
    }
  }
  if (d.free_loops < 0) throw std::invalid_argument("diagram: negative loops");
}

namespace {

struct Traverser {
  const Diagram& d;
  std::vector<int> label, entry;
  std::vector<uint8_t> flip;
  std::vector<int> seq;

  explicit Traverser(const Diagram& dd)
      : d(dd), label(dd.vertex_count(), -1), entry(dd.vertex_count(), 0), flip(dd.vertex_count(), 0) {}

  void reset(const std::vector<int>& verts) {
    for (int v : verts) label[v] = -1;
    seq.clear();
  }
  int port_at(int v, int k) const {
    if (d.valence[v] == 1) return 0;
    int e = entry[v];
    return flip[v] ? (e + 3 - k) % 3 : (e + k) % 3;
  }
  int pos_of(int v, int p) const {
    if (d.valence[v] == 1) return 0;
    int k = (p - entry[v] + 3) % 3;
    return flip[v] ? (3 - k) % 3 : k;
  }
  void visit(int v, int e) {
    label[v] = static_cast<int>(seq.size());
    seq.push_back(v);
    entry[v] = e;
    if (d.valence[v] == 1) {
      int h = d.partner[3 * v];
      if (label[h / 3] < 0) visit(h / 3, h % 3);
      return;
    }
    for (int k = 1; k <= 2; ++k) {
      int h = d.partner[3 * v + port_at(v, k)];
      int w = h / 3;
      if (label[w] < 0) visit(w, h % 3);
    }
  }
  // per vertex: valence, [site], then (label, position) of each partner; labels shifted by base
  void emit(std::vector<int>& out, const std::vector<int>& site_index, int base) const {
    for (int v : seq) {
      out.push_back(d.valence[v]);
      if (d.valence[v] == 1) out.push_back(site_index[v]);
      for (int k = 0; k < d.valence[v]; ++k) {
        int h = d.partner[3 * v + port_at(v, k)];
        out.push_back(label[h / 3] + base);
        out.push_back(pos_of(h / 3, h % 3));
      }
    }
  }
};

std::string join(const std::vector<int>& v) {
  std::string s;
  s.reserve(v.size() * 3);
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string raw_key(const Diagram& d) {
  std::vector<int> k;
  k.push_back(static_cast<int>(d.skeleton.size()));
  for (auto& c : d.skeleton) {
    k.push_back(static_cast<int>(c.kind));
    k.push_back(static_cast<int>(c.sites.size()));
    k.insert(k.end(), c.sites.begin(), c.sites.end());
  }
  k.push_back(d.free_loops);
  for (int v = 0; v < d.vertex_count(); ++v) k.push_back(d.valence[v]);
  k.insert(k.end(), d.partner.begin(), d.partner.end());
  return std::string(reinterpret_cast<const char*>(k.data()), k.size() * sizeof(int));
}

std::mutex cache_mutex;
std::unordered_map<std::string, CanonicalForm>& cache() {
  static std::unordered_map<std::string, CanonicalForm> c;
  return c;
}
constexpr size_t kCacheLimit = 1u << 20;

CanonicalForm compute_canonical(const Diagram& d) {
  const int V = d.vertex_count();
  // connected components of the graph
  std::vector<int> comp(V, -1);
  int ncomp = 0;
  for (int s = 0; s < V; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> st{s};
    comp[s] = ncomp;
    while (!st.empty()) {
      int v = st.back();
      st.pop_back();
      for (int p = 0; p < d.valence[v]; ++p) {
        int w = d.partner[3 * v + p] / 3;
        if (comp[w] < 0) {
          comp[w] = ncomp;
          st.push_back(w);
        }
      }
    }
    ++ncomp;
  }
  std::vector<char> attached(ncomp, 0);
  for (int v = 0; v < V; ++v)
    if (d.valence[v] == 1) attached[comp[v]] = 1;

  std::vector<int> header;
  header.push_back(static_cast<int>(d.skeleton.size()));
  for (auto& c : d.skeleton) {
    header.push_back(static_cast<int>(c.kind));
    header.push_back(static_cast<int>(c.sites.size()));
  }
  header.push_back(d.free_loops);
  header.push_back(V);

  Traverser tr(d);
  int sign = 1;

  // attached part: rotations of circles x flips of attached trivalent vertices
  std::vector<int> att_vertices, att_tri;
  for (int v = 0; v < V; ++v)
    if (attached[comp[v]]) {
      att_vertices.push_back(v);
      if (d.valence[v] == 3) att_tri.push_back(v);
    }
  std::vector<int> best_att;
  int att_labels = static_cast<int>(att_vertices.size());
  if (!att_vertices.empty()) {
    const int nc = static_cast<int>(d.skeleton.size());
    std::vector<int> rot(nc, 0), period(nc, 1);
    for (int c = 0; c < nc; ++c)
      if (d.skeleton[c].kind == ComponentKind::Circle && !d.skeleton[c].sites.empty())
        period[c] = static_cast<int>(d.skeleton[c].sites.size());
    std::vector<int> site_index(V, -1), order;
    bool seen_plus = false, seen_minus = false;
    std::vector<int> code;
    const uint64_t masks = 1ull << att_tri.size();
    while (true) {
      order.clear();
      for (int c = 0; c < nc; ++c) {
        auto& s = d.skeleton[c].sites;
        for (size_t i = 0; i < s.size(); ++i) {
          int v = s[(i + rot[c]) % s.size()];
          site_index[v] = static_cast<int>(order.size());
          order.push_back(v);
        }
      }
      for (uint64_t m = 0; m < masks; ++m) {
        int parity = 0;
        for (size_t i = 0; i < att_tri.size(); ++i) {
          tr.flip[att_tri[i]] = (m >> i) & 1;
          parity ^= tr.flip[att_tri[i]];
        }
        tr.reset(att_vertices);
        for (int v : order)
          if (tr.label[v] < 0) tr.visit(v, 0);
        code.clear();
        tr.emit(code, site_index, 0);
        if (best_att.empty() || code < best_att) {
          best_att = code;
          seen_plus = parity == 0;
          seen_minus = parity == 1;
        } else if (code == best_att) {
          (parity ? seen_minus : seen_plus) = true;
        }
      }
      int c = 0;
      while (c < nc && ++rot[c] == period[c]) rot[c++] = 0;
      if (c == nc) break;
    }
    if (seen_plus && seen_minus) return {"", 0};
    sign = seen_plus ? 1 : -1;
  }

  // closed components, each canonicalized on its own
  std::vector<std::vector<int>> members(ncomp);
  for (int v = 0; v < V; ++v)
    if (!attached[comp[v]]) members[comp[v]].push_back(v);
  std::vector<std::vector<int>> closed_codes;
  std::vector<int> none(V, -1);
  for (int c = 0; c < ncomp; ++c) {
    if (attached[c]) continue;
    auto& mem = members[c];
    std::vector<int> best, code;
    bool seen_plus = false, seen_minus = false;
    const uint64_t masks = 1ull << mem.size();
    for (int s : mem)
      for (int e = 0; e < 3; ++e)
        for (uint64_t m = 0; m < masks; ++m) {
          int parity = 0;
          for (size_t i = 0; i < mem.size(); ++i) {
            tr.flip[mem[i]] = (m >> i) & 1;
            parity ^= tr.flip[mem[i]];
          }
          tr.reset(mem);
          tr.visit(s, e);
          code.clear();
          tr.emit(code, none, 0);
          if (best.empty() || code < best) {
            best = code;
            seen_plus = parity == 0;
            seen_minus = parity == 1;
          } else if (code == best) {
            (parity ? seen_minus : seen_plus) = true;
          }
        }
    if (seen_plus && seen_minus) return {"", 0};
    if (seen_minus) sign = -sign;
    closed_codes.push_back(std::move(best));
  }
  std::sort(closed_codes.begin(), closed_codes.end());

  std::vector<int> full = header;
  full.insert(full.end(), best_att.begin(), best_att.end());
  int base = att_labels;
  for (auto& cc : closed_codes) {
    // records are (3, l,p, l,p, l,p); shift labels
    int nv = static_cast<int>(cc.size()) / 7;
    for (size_t i = 0; i < cc.size(); i += 7) {
      full.push_back(3);
      for (int k = 0; k < 3; ++k) {
        full.push_back(cc[i + 1 + 2 * k] + base);
        full.push_back(cc[i + 2 + 2 * k]);
      }
    }
    base += nv;
  }
  return {join(full), sign};
}

}  // namespace

CanonicalForm canonical_form(const Diagram& d) {
  std::string key = raw_key(d);
  {
    std::lock_guard<std::mutex> lk(cache_mutex);
    auto it = cache().find(key);
    if (it != cache().end()) return it->second;
  }
  CanonicalForm f = compute_canonical(d);
  std::lock_guard<std::mutex> lk(cache_mutex);
  if (cache().size() >= kCacheLimit) cache().clear();
  cache().emplace(std::move(key), f);
  return f;
}

Diagram decode_diagram(const std::string& code) {
  std::vector<int> x;
  {
    std::stringstream ss(code);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) throw std::invalid_argument("bad diagram code");
      x.push_back(std::stoi(tok));
    }
  }
  size_t i = 0;
  auto next = [&]() {
    if (i >= x.size()) throw std::invalid_argument("truncated diagram code");
    return x[i++];
  };
  Diagram d;
  int nc = next();
  std::vector<int> offsets;
  int total = 0;
  for (int c = 0; c < nc; ++c) {
    int kind = next();
    int ns = next();
    if (kind != 0 && kind != 1) throw std::invalid_argument("bad component kind");
    d.skeleton.push_back({static_cast<ComponentKind>(kind), std::vector<int>(ns, -1)});
    offsets.push_back(total);
    total += ns;
  }
  d.free_loops = next();
  int V = next();
  d.valence.assign(V, 0);
  d.partner.assign(3 * V, -1);
  for (int v = 0; v < V; ++v) {
    int val = next();
    if (val != 1 && val != 3) throw std::invalid_argument("bad valence in code");
    d.valence[v] = static_cast<uint8_t>(val);
    if (val == 1) {
      int g = next();
      int c = static_cast<int>(std::upper_bound(offsets.begin(), offsets.end(), g) - offsets.begin()) - 1;
      if (c < 0 || g >= total) throw std::invalid_argument("bad site in code");
      d.skeleton[c].sites[g - offsets[c]] = v;
    }
    for (int k = 0; k < val; ++k) {
      int l = next(), p = next();
      d.partner[3 * v + k] = 3 * l + p;
    }
  }
  if (i != x.size()) throw std::invalid_argument("trailing data in diagram code");
  validate(d);
  return d;
}

Diagram disjoint_union(const Diagram& a, const Diagram& b) {
  Diagram d = a;
  const int off = a.vertex_count();
  d.valence.insert(d.valence.end(), b.valence.begin(), b.valence.end());
  for (int h : b.partner) d.partner.push_back(h < 0 ? -1 : h + 3 * off);
  for (auto c : b.skeleton) {
    for (int& v : c.sites) v += off;
    d.skeleton.push_back(std::move(c));
  }
  d.free_loops += b.free_loops;
  return d;
}

Diagram flip_all(const Diagram& d) {
  Diagram out = d;
  auto map = [&](int h) {
    if (h < 0 || d.valence[h / 3] != 3) return h;
    int p = h % 3;
    static const int swap[3] = {0, 2, 1};
    return 3 * (h / 3) + swap[p];
  };
  for (int h = 0; h < static_cast<int>(d.partner.size()); ++h)
    out.partner[map(h)] = d.partner[h] < 0 ? -1 : map(d.partner[h]);
  return out;
}

Diagram chord_diagram(const Skeleton& s, const std::vector<std::vector<int>>& pieces) {
  if (pieces.size() != s.size()) throw std::invalid_argument("chord_diagram: piece count");
  Diagram d = Diagram::on(s);
  std::map<int, int> first;
  for (size_t c = 0; c < pieces.size(); ++c)
    for (int lab : pieces[c]) {
      int h = d.add_leg(static_cast<int>(c));
      auto it = first.find(lab);
      if (it == first.end()) {
        first[lab] = h;
      } else {
        if (it->second < 0) throw std::invalid_argument("chord_diagram: label used thrice");
        d.connect(it->second, h);
        it->second = -1;
      }
    }
  for (auto& [lab, h] : first)
    if (h >= 0) throw std::invalid_argument("chord_diagram: unpaired label");
  return d;
}

Diagram theta_graph() {
  Diagram d;
  int u = d.add_vertex(3), v = d.add_vertex(3);
  d.connect(3 * u + 0, 3 * v + 2);
  d.connect(3 * u + 1, 3 * v + 1);
  d.connect(3 * u + 2, 3 * v + 0);
  return d;
}

}  // namespace lmo
