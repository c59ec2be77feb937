#include "lmo/element.hpp"

#include <algorithm>
#include <stdexcept>

namespace lmo {

namespace {

void accumulate(std::map<std::string, Scalar>& terms, const std::string& code, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms.try_emplace(code, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

// Sub-diagram on the given vertices; the skeleton keeps all components.
Diagram restrict_to(const Diagram& d, const std::vector<char>& keep) {
  Diagram out;
  std::vector<int> id(d.vertex_count(), -1);
  for (int v = 0; v < d.vertex_count(); ++v)
    if (keep[v]) id[v] = out.add_vertex(d.valence[v]);
  for (int v = 0; v < d.vertex_count(); ++v) {
    if (!keep[v]) continue;
    for (int p = 0; p < d.valence[v]; ++p) {
      int h = d.partner[3 * v + p];
      out.partner[3 * id[v] + p] = 3 * id[h / 3] + h % 3;
    }
  }
  for (auto& c : d.skeleton) {
    SkeletonComponent nc{c.kind, {}};
    for (int v : c.sites)
      if (keep[v]) nc.sites.push_back(id[v]);
    out.skeleton.push_back(std::move(nc));
  }
  return out;
}

Rational binom(long n, long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

}  // namespace

Element Element::one(Skeleton s, int max_degree) {
  Element e(s, max_degree);
  e.add(Diagram::on(s), Scalar(1));
  return e;
}

Element Element::of(const Diagram& d, const Scalar& c, int max_degree) {
  Element e(d.skeleton_kinds(), max_degree);
  e.add(d, c);
  return e;
}

void Element::add(const Diagram& d, const Scalar& c) {
  if (c.is_zero() || degree(d) > max_degree_) return;
  if (d.skeleton.size() != skeleton_.size()) throw std::invalid_argument("Element::add: skeleton mismatch");
  for (size_t i = 0; i < skeleton_.size(); ++i)
    if (d.skeleton[i].kind != skeleton_[i]) throw std::invalid_argument("Element::add: skeleton mismatch");
  CanonicalForm f = canonical_form(d);
  if (f.sign == 0) return;
  accumulate(terms_, f.code, f.sign > 0 ? c : -c);
}

void Element::add_code(const std::string& code, const Scalar& c) {
  if (code_degree(code) > max_degree_) return;
  accumulate(terms_, code, c);
}

Element& Element::operator+=(const Element& o) {
  if (o.skeleton_ != skeleton_) throw std::invalid_argument("Element: skeleton mismatch");
  for (auto& [k, c] : o.terms_) add_code(k, c);
  return *this;
}

Element& Element::operator-=(const Element& o) {
  if (o.skeleton_ != skeleton_) throw std::invalid_argument("Element: skeleton mismatch");
  for (auto& [k, c] : o.terms_) add_code(k, -c);
  return *this;
}

Element Element::scaled(const Scalar& s) const {
  Element out(skeleton_, max_degree_);
  if (s.is_zero()) return out;
  for (auto& [k, c] : terms_) out.terms_.emplace(k, c * s);
  return out;
}

Scalar Element::coefficient(const Diagram& d) const {
  CanonicalForm f = canonical_form(d);
  if (f.sign == 0) return Scalar(0);
  auto it = terms_.find(f.code);
  if (it == terms_.end()) return Scalar(0);
  return f.sign > 0 ? it->second : -it->second;
}

Scalar Element::constant() const { return coefficient(Diagram::on(skeleton_)); }

Element Element::degree_part(int d) const {
  Element out(skeleton_, max_degree_);
  for (auto& [k, c] : terms_)
    if (code_degree(k) == d) out.terms_.emplace(k, c);
  return out;
}

Element Element::truncated(int d) const {
  Element out(skeleton_, std::min(d, max_degree_));
  for (auto& [k, c] : terms_)
    if (code_degree(k) <= d) out.terms_.emplace(k, c);
  return out;
}

int Element::top_degree() const {
  int t = -1;
  for (auto& [k, c] : terms_) t = std::max(t, code_degree(k));
  return t;
}

bool Element::operator==(const Element& o) const { return skeleton_ == o.skeleton_ && terms_ == o.terms_; }

int code_degree(const std::string& code) {
  // header: ncomp, (kind, nsites)*, loops, V
  int field = 0, nc = -1, value = 0;
  bool neg = false;
  for (size_t i = 0; i <= code.size(); ++i) {
    if (i == code.size() || code[i] == ',') {
      int v = neg ? -value : value;
      if (field == 0) nc = v;
      if (field == 2 * nc + 2) return v / 2;
      ++field;
      value = 0;
      neg = false;
    } else if (code[i] == '-') {
      neg = true;
    } else {
      value = value * 10 + (code[i] - '0');
    }
  }
  throw std::invalid_argument("bad diagram code");
}

Element s_map(const Element& e, int c) {
  if (c < 0 || c >= static_cast<int>(e.skeleton().size())) throw std::out_of_range("s_map: unknown component");
  Element out(e.skeleton(), e.max_degree());
  for (auto& [k, coeff] : e.terms()) {
    Diagram d = decode_diagram(k);
    auto& s = d.skeleton[c].sites;
    std::reverse(s.begin(), s.end());
    out.add(d, s.size() % 2 ? -coeff : coeff);
  }
  return out;
}

Element delta_map(const Element& e, int c) {
  if (c < 0 || c >= static_cast<int>(e.skeleton().size())) throw std::out_of_range("delta_map: unknown component");
  Skeleton sk = e.skeleton();
  sk.insert(sk.begin() + c + 1, sk[c]);
  Element out(sk, e.max_degree());
  for (auto& [k, coeff] : e.terms()) {
    Diagram d = decode_diagram(k);
    const auto sites = d.skeleton[c].sites;
    const size_t m = sites.size();
    if (m > 30) throw std::length_error("delta_map: too many legs");
    for (uint64_t mask = 0; mask < (1ull << m); ++mask) {
      Diagram x = d;
      SkeletonComponent a{sk[c], {}}, b{sk[c], {}};
      for (size_t i = 0; i < m; ++i) ((mask >> i) & 1 ? b : a).sites.push_back(sites[i]);
      x.skeleton[c] = a;
      x.skeleton.insert(x.skeleton.begin() + c + 1, b);
      out.add(x, coeff);
    }
  }
  return out;
}

Element connect_sum(const Element& a, int ca, const Element& b, int cb) {
  if (a.skeleton().at(ca) != ComponentKind::Circle || b.skeleton().at(cb) != ComponentKind::Circle)
    throw std::invalid_argument("connect_sum: components must be circles");
  Skeleton sk = a.skeleton();
  for (size_t i = 0; i < b.skeleton().size(); ++i)
    if (static_cast<int>(i) != cb) sk.push_back(b.skeleton()[i]);
  Element out(sk, std::min(a.max_degree(), b.max_degree()));
  const int na = static_cast<int>(a.skeleton().size());
  for (auto& [ka, x] : a.terms()) {
    Diagram da = decode_diagram(ka);
    for (auto& [kb, y] : b.terms()) {
      Diagram u = disjoint_union(da, decode_diagram(kb));
      auto& merged = u.skeleton[ca].sites;
      auto& other = u.skeleton[na + cb].sites;
      merged.insert(merged.end(), other.begin(), other.end());
      u.skeleton.erase(u.skeleton.begin() + na + cb);
      out.add(u, x * y);
    }
  }
  return out;
}

Element tensor_union(const Element& a, const Element& b) {
  Skeleton sk = a.skeleton();
  sk.insert(sk.end(), b.skeleton().begin(), b.skeleton().end());
  Element out(sk, std::min(a.max_degree(), b.max_degree()));
  for (auto& [ka, x] : a.terms()) {
    Diagram da = decode_diagram(ka);
    for (auto& [kb, y] : b.terms()) out.add(disjoint_union(da, decode_diagram(kb)), x * y);
  }
  return out;
}

Element graph_product(const Element& a, const Element& b) {
  if (!a.skeleton().empty() || !b.skeleton().empty())
    throw std::invalid_argument("graph_product: skeleton-free elements only");
  return tensor_union(a, b);
}

Element shat(const Element& e) {
  Element out(e.skeleton(), e.max_degree());
  for (auto& [k, c] : e.terms()) out.add_code(k, code_degree(k) % 2 ? -c : c);
  return out;
}

Element permute_components(const Element& e, const std::vector<int>& perm) {
  Skeleton sk;
  for (int p : perm) sk.push_back(e.skeleton().at(p));
  Element out(sk, e.max_degree());
  for (auto& [k, c] : e.terms()) {
    Diagram d = decode_diagram(k);
    Diagram x = d;
    for (size_t i = 0; i < perm.size(); ++i) x.skeleton[i] = d.skeleton[perm[i]];
    out.add(x, c);
  }
  return out;
}

namespace {
Element skeleton_free_one(int max_degree) { return Element::one({}, max_degree); }

Element product_capped(const Element& a, const Element& b, int max_degree) {
  Element out({}, max_degree);
  for (auto& [ka, x] : a.terms()) {
    int da = code_degree(ka);
    Diagram d1 = decode_diagram(ka);
    for (auto& [kb, y] : b.terms())
      if (da + code_degree(kb) <= max_degree) out.add(disjoint_union(d1, decode_diagram(kb)), x * y);
  }
  return out;
}
}  // namespace

Element graded_invert(const Element& x, int max_degree) {
  Scalar c0 = x.constant();
  if (!c0.is_rational() || c0.constant() == 0)
    throw std::domain_error("graded_invert: constant term must be a nonzero rational");
  Rational inv = 1 / c0.constant();
  // x = c0 (1 + y)
  Element y = x.truncated(max_degree).scaled(Scalar(inv));
  y -= skeleton_free_one(max_degree);
  Element neg_y = y.scaled(Scalar(-1));
  Element out = skeleton_free_one(max_degree), power = skeleton_free_one(max_degree);
  for (int k = 1; k <= max_degree; ++k) {
    power = product_capped(power, neg_y, max_degree);
    if (power.is_zero()) break;
    out += power;
  }
  return out.scaled(Scalar(inv));
}

Element log_group_like(const Element& x, int max_degree) {
  if (x.constant() != Scalar(1)) throw std::domain_error("log_group_like: constant term must be 1");
  Element y = x.truncated(max_degree);
  y -= skeleton_free_one(max_degree);
  Element out({}, max_degree), power = skeleton_free_one(max_degree);
  for (int k = 1; k <= max_degree; ++k) {
    power = product_capped(power, y, max_degree);
    if (power.is_zero()) break;
    out += power.scaled(Scalar(Rational(k % 2 ? 1 : -1, k)));
  }
  return out;
}

Element exp_primitive(const Element& x, int max_degree) {
  if (!x.constant().is_zero()) throw std::domain_error("exp_primitive: constant term must vanish");
  Element y = x.truncated(max_degree);
  Element out = skeleton_free_one(max_degree), power = skeleton_free_one(max_degree);
  Rational fact = 1;
  for (int k = 1; k <= max_degree; ++k) {
    power = product_capped(power, y, max_degree);
    if (power.is_zero()) break;
    fact *= k;
    out += power.scaled(Scalar(1 / fact));
  }
  return out;
}

Element graded_power(const Element& x, long k, int max_degree) {
  Element base = k < 0 ? graded_invert(x, max_degree) : x.truncated(max_degree);
  Element out = skeleton_free_one(max_degree);
  for (long i = 0; i < std::labs(k); ++i) out = product_capped(out, base, max_degree);
  return out;
}

TensorElement TensorElement::of(const Element& a, const Element& b) {
  TensorElement t(a.skeleton(), b.skeleton());
  for (auto& [ka, x] : a.terms())
    for (auto& [kb, y] : b.terms()) t.add(ka, kb, x * y);
  return t;
}

void TensorElement::add(const std::string& l, const std::string& r, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace({l, r}, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void TensorElement::add(const Diagram& l, const Diagram& r, const Scalar& c) {
  auto fl = canonical_form(l), fr = canonical_form(r);
  if (fl.sign == 0 || fr.sign == 0) return;
  add(fl.code, fr.code, fl.sign * fr.sign > 0 ? c : -c);
}

TensorElement& TensorElement::operator-=(const TensorElement& o) {
  for (auto& [k, c] : o.terms_) add(k.first, k.second, -c);
  return *this;
}

TensorElement TensorElement::swapped() const {
  TensorElement t(right_, left_);
  for (auto& [k, c] : terms_) t.add(k.second, k.first, c);
  return t;
}

TensorElement comultiply(const Element& e) {
  TensorElement out(e.skeleton(), e.skeleton());
  for (auto& [code, coeff] : e.terms()) {
    Diagram d = decode_diagram(code);
    const int V = d.vertex_count();
    std::vector<int> comp(V, -1);
    int nc = 0;
    for (int s = 0; s < V; ++s) {
      if (comp[s] >= 0) continue;
      std::vector<int> st{s};
      comp[s] = nc;
      while (!st.empty()) {
        int v = st.back();
        st.pop_back();
        for (int p = 0; p < d.valence[v]; ++p) {
          int w = d.partner[3 * v + p] / 3;
          if (comp[w] < 0) {
            comp[w] = nc;
            st.push_back(w);
          }
        }
      }
      ++nc;
    }
    if (nc > 24) throw std::length_error("comultiply: too many components");
    const int loops = d.free_loops;
    for (uint64_t mask = 0; mask < (1ull << nc); ++mask) {
      std::vector<char> left(V), right(V);
      for (int v = 0; v < V; ++v) ((mask >> comp[v]) & 1 ? left : right)[v] = 1;
      Diagram l = restrict_to(d, left), r = restrict_to(d, right);
      for (int j = 0; j <= loops; ++j) {
        l.free_loops = j;
        r.free_loops = loops - j;
        out.add(l, r, coeff * binom(loops, j));
      }
    }
  }
  return out;
}

}  // namespace lmo
