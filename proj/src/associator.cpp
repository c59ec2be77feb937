#include "lmo/associator.hpp"

#include <mutex>

namespace lmo {

FreeSeries FreeSeries::one(int max_weight) {
  FreeSeries f(max_weight);
  f.add("", Scalar(1));
  return f;
}

Scalar FreeSeries::coefficient(const std::string& word) const {
  auto it = terms_.find(word);
  return it == terms_.end() ? Scalar(0) : it->second;
}

void FreeSeries::add(const std::string& word, const Scalar& c) {
  if (static_cast<int>(word.size()) > max_weight_ || c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(word, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

FreeSeries& FreeSeries::operator+=(const FreeSeries& o) {
  for (auto& [w, c] : o.terms_) add(w, c);
  return *this;
}

FreeSeries FreeSeries::operator*(const FreeSeries& o) const {
  FreeSeries out(std::min(max_weight_, o.max_weight_));
  for (auto& [w1, c1] : terms_)
    for (auto& [w2, c2] : o.terms_)
      if (static_cast<int>(w1.size() + w2.size()) <= out.max_weight_) out.add(w1 + w2, c1 * c2);
  return out;
}

FreeSeries FreeSeries::weight_part(int w) const {
  FreeSeries out(max_weight_);
  for (auto& [word, c] : terms_)
    if (static_cast<int>(word.size()) == w) out.add(word, c);
  return out;
}

Scalar eta(const std::vector<int>& p, const std::vector<int>& q) {
  MzvIndex idx;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0 || q[i] == 0) return Scalar(0);
    for (int j = 1; j < p[i]; ++j) idx.entries.push_back(1);
    idx.entries.push_back(q[i] + 1);
  }
  return mzv_symbol(idx);
}

namespace {

Rational binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

// All weight-w terms: blocks (a_i, b_i) with a_i, b_i >= 1, then splits a = p + r, b = q + s.
void add_weight(FreeSeries& f, int w) {
  std::vector<int> a, b;
  auto emit = [&]() {
    const size_t k = a.size();
    std::vector<int> p(k, 0), q(k, 0);
    Scalar base = eta(a, b);
    if (base.is_zero()) return;
    while (true) {
      int rsum = 0, qsum = 0, ssum = 0;
      Rational coeff = 1;
      std::string mid;
      for (size_t i = 0; i < k; ++i) {
        int r = a[i] - p[i], s = b[i] - q[i];
        rsum += r;
        qsum += q[i];
        ssum += s;
        coeff *= binomial(a[i], r) * binomial(b[i], s);
        mid += std::string(p[i], 'A') + std::string(q[i], 'B');
      }
      if ((rsum + qsum) % 2) coeff = -coeff;
      f.add(std::string(ssum, 'B') + mid + std::string(rsum, 'A'), base * coeff);
      // odometer over p_i in [0, a_i], q_i in [0, b_i]
      size_t i = 0;
      for (; i < 2 * k; ++i) {
        int& x = i < k ? p[i] : q[i - k];
        int lim = i < k ? a[i] : b[i - k];
        if (++x <= lim) break;
        x = 0;
      }
      if (i == 2 * k) break;
    }
  };
  auto rec = [&](auto&& self, int left) -> void {
    if (left == 0) {
      if (!a.empty()) emit();
      return;
    }
    for (int x = 1; x < left; ++x)
      for (int y = 1; x + y <= left; ++y) {
        a.push_back(x);
        b.push_back(y);
        self(self, left - x - y);
        a.pop_back();
        b.pop_back();
      }
  };
  rec(rec, w);
}

struct Cache {
  std::mutex m;
  uint64_t generation = ~0ull;
  std::map<int, FreeSeries> phi, inv;
};

Cache& cache() {
  static Cache c;
  return c;
}

}  // namespace

const FreeSeries& phi(int max_weight) {
  auto& c = cache();
  std::lock_guard<std::mutex> lk(c.m);
  if (c.generation != active_table_generation()) {
    c.phi.clear();
    c.inv.clear();
    c.generation = active_table_generation();
  }
  auto it = c.phi.find(max_weight);
  if (it != c.phi.end()) return it->second;
  FreeSeries f = FreeSeries::one(max_weight);
  for (int w = 2; w <= max_weight; ++w) add_weight(f, w);
  return c.phi.emplace(max_weight, std::move(f)).first->second;
}

const FreeSeries& phi_inverse(int max_weight) {
  const FreeSeries& f = phi(max_weight);
  auto& c = cache();
  std::lock_guard<std::mutex> lk(c.m);
  auto it = c.inv.find(max_weight);
  if (it != c.inv.end()) return it->second;
  // f = 1 + g; f^{-1} = sum_k (-g)^k
  FreeSeries neg_g(max_weight);
  for (auto& [w, s] : f.terms())
    if (!w.empty()) neg_g.add(w, -s);
  FreeSeries out = FreeSeries::one(max_weight), power = FreeSeries::one(max_weight);
  for (int k = 1; 2 * k <= max_weight; ++k) {
    power = power * neg_g;
    out += power;
  }
  return c.inv.emplace(max_weight, std::move(out)).first->second;
}

}  // namespace lmo
