#include "lmo/kontsevich.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "lmo/associator.hpp"

namespace lmo {

namespace {

ChordSeries sum_chords(int to, int n, int max_degree) {
  // sum over i < to of Omega_{i,to}, 0-based strands
  ChordSeries s(n, max_degree);
  for (int i = 0; i < to; ++i) s += ChordSeries::chord(n, i, to, max_degree);
  return s;
}

ChordSeries eval(const FreeSeries& f, const ChordSeries& a, const ChordSeries& b) {
  ChordSeries unit = ChordSeries::one(a.pieces(), a.max_degree());
  return substitute(
      f, unit, a, b, [](const ChordSeries& x, const ChordSeries& y) { return x * y; },
      [](const ChordSeries& x, const Scalar& c) { return x.scaled(c); });
}

ChordSeries compute_token(TokenKind kind, int k, int n, int cap) {
  // k is 1-based; strands k-1, k in 0-based terms
  const int l = k - 1, r = k;
  ChordSeries b = ChordSeries::chord(n, l, r, cap);
  ChordSeries a_left = sum_chords(l, n, cap);
  switch (kind) {
    case TokenKind::Max:
      return eval(phi(cap), a_left, b);
    case TokenKind::Min:
      return eval(phi_inverse(cap), a_left, b);
    default: {
      ChordSeries a_right(n, cap);
      for (int i = 0; i < l; ++i) a_right += ChordSeries::chord(n, i, r, cap);
      Scalar half(Rational(kind == TokenKind::CrossPos ? 1 : -1, 2));
      return eval(phi_inverse(cap), a_right, b) * exp_series(b.scaled(half)) * eval(phi(cap), a_left, b);
    }
  }
}

// Strand bookkeeping while the diagram is read top to bottom.
class Engine {
 public:
  explicit Engine(const ZCaps& caps) : caps_(caps), z_(0, caps.degree) {
    z_ = ChordSeries::one(0, caps.degree);
    z_.set_piece_cap(caps.legs_per_circle);
  }

  void token(const TangleToken& t, int index) {
    const int l = t.k - 1;
    switch (t.kind) {
      case TokenKind::Max: {
        const int p = static_cast<int>(comp_.size());
        comp_.push_back(index);
        closed_.push_back(false);
        const bool left_down = t.orient[l] == Orient::Down;
        pos_piece_.insert(pos_piece_.begin() + l, {p, p});
        pos_back_.insert(pos_back_.begin() + l, {left_down, !left_down});
        add_piece();
        stack(token_chords(TokenKind::Max, t.k, t.n, caps_.degree));
        break;
      }
      case TokenKind::Min: {
        stack(token_chords(TokenKind::Min, t.k, t.n, caps_.degree));
        const int bpos = pos_back_[l] ? l : l + 1, fpos = bpos == l ? l + 1 : l;
        const int pb = pos_piece_[bpos], pf = pos_piece_[fpos];
        pos_piece_.erase(pos_piece_.begin() + l, pos_piece_.begin() + l + 2);
        pos_back_.erase(pos_back_.begin() + l, pos_back_.begin() + l + 2);
        if (pb == pf)
          closed_[pb] = true;
        else
          merge(pb, pf);
        break;
      }
      default:
        std::swap(pos_piece_[l], pos_piece_[l + 1]);
        std::swap(pos_back_[l], pos_back_[l + 1]);
        stack(token_chords(t.kind, t.k, t.n, caps_.degree));
    }
  }

  // Pieces reordered by component (first MAX).
  ChordSeries finish() const {
    const int P = static_cast<int>(comp_.size());
    std::vector<int> order(P);
    for (int i = 0; i < P; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return comp_[x] < comp_[y]; });
    ChordSeries out(P, caps_.degree);
    out.set_piece_cap(caps_.legs_per_circle);
    for (auto& [k, c] : z_.terms()) {
      Pieces a = decode_pieces(k, P), b(P);
      for (int i = 0; i < P; ++i) b[i] = std::move(a[order[i]]);
      out.add(std::move(b), c);
    }
    return out;
  }

 private:
  void add_piece() {
    ChordSeries out(z_.pieces() + 1, caps_.degree);
    out.set_piece_cap(caps_.legs_per_circle);
    for (auto& [k, c] : z_.terms()) out.add(k + std::string(1, '\0'), c);
    z_ = std::move(out);
  }

  void merge(int pb, int pf) {
    const int P = z_.pieces();
    ChordSeries out(P - 1, caps_.degree);
    out.set_piece_cap(caps_.legs_per_circle);
    for (auto& [k, c] : z_.terms()) {
      Pieces a = decode_pieces(k, P);
      a[pb].insert(a[pb].end(), a[pf].begin(), a[pf].end());
      a.erase(a.begin() + pf);
      out.add(std::move(a), c);
    }
    z_ = std::move(out);
    comp_[pb] = std::min(comp_[pb], comp_[pf]);
    comp_.erase(comp_.begin() + pf);
    closed_.erase(closed_.begin() + pf);
    for (auto& p : pos_piece_) {
      if (p == pf) p = pb;
      if (p > pf) --p;
    }
  }

  // Value below the current state: appended on downward strands, prepended in
  // reverse on upward ones, with a sign per leg on an upward strand.
  void stack(const ChordSeries& v) {
    const int n = v.pieces(), P = z_.pieces();
    std::vector<std::pair<Pieces, const Scalar*>> vals;
    std::vector<int> vdeg;
    for (auto& [k, c] : v.terms()) {
      vals.push_back({decode_pieces(k, n), &c});
      vdeg.push_back(key_degree(k, n));
    }
    ChordSeries out(P, caps_.degree);
    out.set_piece_cap(caps_.legs_per_circle);
    for (auto& [kz, cz] : z_.terms()) {
      const int dz = key_degree(kz, P);
      const Pieces a = decode_pieces(kz, P);
      for (size_t t = 0; t < vals.size(); ++t) {
        if (dz + vdeg[t] > caps_.degree) continue;
        Pieces p = a;
        int up_legs = 0;
        bool over = false;
        for (int j = 0; j < n && !over; ++j) {
          const auto& legs = vals[t].first[j];
          if (legs.empty()) continue;
          auto& piece = p[pos_piece_[j]];
          if (pos_back_[j]) {
            for (uint8_t x : legs) piece.push_back(static_cast<uint8_t>(x + dz));
          } else {
            for (uint8_t x : legs) piece.insert(piece.begin(), static_cast<uint8_t>(x + dz));
            up_legs += static_cast<int>(legs.size());
          }
          if (caps_.legs_per_circle > 0 && static_cast<int>(piece.size()) > caps_.legs_per_circle) over = true;
        }
        if (over) continue;
        Scalar c = cz * *vals[t].second;
        out.add(std::move(p), up_legs % 2 ? -c : c);
      }
    }
    z_ = std::move(out);
  }

  ZCaps caps_;
  ChordSeries z_;
  std::vector<int> pos_piece_;
  std::vector<bool> pos_back_;
  std::vector<int> comp_;
  std::vector<bool> closed_;
};

ChordSeries power(const ChordSeries& x, int k) {
  ChordSeries out = ChordSeries::one(x.pieces(), x.max_degree());
  for (int i = 0; i < k; ++i) out = out * x;
  return out;
}

// nu^{s_c + extra} spliced after the last leg of each circle.
Element with_nu(const LinkDiagram& d, const ZCaps& caps, int extra) {
  ChordSeries z = z_chords(d, caps);
  const int L = d.components;
  const ChordSeries& nu1 = nu_interval(caps.degree);
  for (int c = 0; c < L; ++c) {
    ChordSeries f(L, caps.degree);
    const ChordSeries pw = power(nu1, d.maxima[c] + extra);
    for (auto& [k, coeff] : pw.terms()) {
      Pieces p(L);
      p[c] = decode_pieces(k, 1)[0];
      f.add(std::move(p), coeff);
    }
    z = z * f;
  }
  return circles_element(z, caps.degree);
}

}  // namespace

Element omega_chord(int i, int j, int n, int max_degree) {
  if (i < 1 || j <= i || j > n) throw std::out_of_range("omega_chord: need 1 <= i < j <= n");
  std::vector<std::vector<int>> p(n);
  p[i - 1].push_back(0);
  p[j - 1].push_back(0);
  return Element::of(chord_diagram(Skeleton(n, ComponentKind::Interval), p), Scalar(1), max_degree);
}

const ChordSeries& token_chords(TokenKind kind, int k, int n, int max_degree) {
  if (k < 1 || k >= n) throw std::out_of_range("token position out of range");
  static std::mutex mu;
  static std::map<std::tuple<uint64_t, int, int, int, int>, ChordSeries> cache;
  auto key = std::make_tuple(active_table_generation(), static_cast<int>(kind), k, n, max_degree);
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  ChordSeries v = compute_token(kind, k, n, max_degree);
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(v)).first->second;
}

Element elementary_value(const TangleToken& t, int max_degree) {
  const ChordSeries& v = token_chords(t.kind, t.k, t.n, max_degree);
  Skeleton sk(t.n, ComponentKind::Interval);
  Element out(sk, max_degree);
  for (auto& [k, c] : v.terms()) {
    Pieces p = decode_pieces(k, t.n);
    std::vector<std::vector<int>> lab(t.n);
    int up = 0;
    for (int j = 0; j < t.n; ++j) {
      lab[j].assign(p[j].begin(), p[j].end());
      if (!t.orient.empty() && t.orient[j] == Orient::Up) {
        std::reverse(lab[j].begin(), lab[j].end());
        up += static_cast<int>(lab[j].size());
      }
    }
    out.add(chord_diagram(sk, lab), up % 2 ? -c : c);
  }
  return out;
}

ChordSeries z_chords(const LinkDiagram& d, const ZCaps& caps) {
  Engine e(caps);
  for (size_t i = 0; i < d.tokens.size(); ++i) e.token(d.tokens[i], static_cast<int>(i));
  return e.finish();
}

Element z_of_diagram(const LinkDiagram& d, const ZCaps& caps) {
  return circles_element(z_chords(d, caps), caps.degree);
}

const ChordSeries& nu_interval(int max_degree) {
  static std::mutex mu;
  static std::map<std::pair<uint64_t, int>, ChordSeries> cache;
  auto key = std::make_pair(active_table_generation(), max_degree);
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  // the hump: two maxima, cut open at its last cup
  std::vector<TangleToken> toks{{TokenKind::Max, 1, 2, {}},
                                {TokenKind::Max, 3, 4, {}},
                                {TokenKind::Min, 2, 4, {}},
                                {TokenKind::Min, 1, 2, {}}};
  ChordSeries z = z_chords(analyze(toks), {max_degree, 0});
  ChordSeries v = inverse_series(z);
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(v)).first->second;
}

Element nu(int max_degree) { return circles_element(nu_interval(max_degree), max_degree); }

Element hat_z(const LinkDiagram& d, const ZCaps& caps) { return with_nu(d, caps, 0); }
Element check_z(const LinkDiagram& d, const ZCaps& caps) { return with_nu(d, caps, 1); }

Element circles_element(const ChordSeries& s, int max_degree) {
  const int P = s.pieces();
  Skeleton sk(P, ComponentKind::Circle);
  Element out(sk, max_degree);
  for (auto& [k, c] : s.terms()) {
    Pieces p = decode_pieces(k, P);
    std::vector<std::vector<int>> lab(P);
    for (int j = 0; j < P; ++j) lab[j].assign(p[j].begin(), p[j].end());
    out.add(chord_diagram(sk, lab), c);
  }
  return out;
}

}  // namespace lmo
