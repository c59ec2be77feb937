#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lmo/scalar.hpp"

namespace lmo {

namespace {

// Letters of the iterated-integral word: 0 = dt/t, 1 = dt/(1-t).
using Word = std::vector<int>;

// Standard ordering (outermost exponent first) of the index.
std::vector<int> standard_exponents(const MzvIndex& idx) {
  return {idx.entries.rbegin(), idx.entries.rend()};
}

Word word_of(const std::vector<int>& exps) {
  Word w;
  for (int s : exps) {
    for (int i = 1; i < s; ++i) w.push_back(0);
    w.push_back(1);
  }
  return w;
}

std::vector<int> exponents_of(const Word& w) {
  std::vector<int> a;
  int run = 1;
  for (int letter : w) {
    if (letter == 0) {
      ++run;
    } else {
      a.push_back(run);
      run = 1;
    }
  }
  return a;
}

long double ipow(long double x, int k) {
  long double r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// sum_{n_1 > ... > n_r >= 1} 2^{-n_1} / prod n_j^{a_j}
NumericValue polylog_half(const std::vector<int>& a, long double tol) {
  if (a.empty()) return {1.0L, 0.0L};
  const int r = static_cast<int>(a.size());
  std::vector<long double> p(r + 1, 0.0L);  // p[j] for j = 1..r-1 (inner sums)
  long double sum = 0, comp = 0, zn = 1;
  for (long n = 1;; ++n) {
    zn *= 0.5L;
    long double inner = r == 1 ? 1.0L : p[1];
    long double term = zn * inner / ipow(static_cast<long double>(n), a[0]);
    long double y = term - comp;
    long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    for (int j = 1; j < r; ++j) {
      long double next = j + 1 < r ? p[j + 1] : 1.0L;
      p[j] += next / ipow(static_cast<long double>(n), a[j]);
    }
    if (n > 2 * r + 4) {
      long double tail = 4.0L * std::pow(static_cast<long double>(n + 1), r - 1) *
                         std::pow(0.5L, static_cast<long double>(n + 1));
      if (tail < tol) return {sum, tail};
    }
  }
}

long double tail_integral(int r1, int a, long double U) {
  long double total = 0, fact = 1;
  for (int j = 0; j <= r1; ++j) {
    if (j > 0) fact *= (r1 - j + 1);
    total += fact * std::pow(1.0L + U, r1 - j) / std::pow(static_cast<long double>(a), j + 1);
  }
  return std::exp(-a * U) * total;
}

}  // namespace

NumericValue mzv_partial_sum(const MzvIndex& idx, long double tol) {
  if (!idx.convergent()) throw std::invalid_argument("divergent MZV index " + idx.to_string());
  std::vector<int> s = standard_exponents(idx);
  const int r = static_cast<int>(s.size());
  int r1 = 0, big = 0;
  for (int j = 1; j < r; ++j) (s[j] == 1 ? r1 : big)++;
  const long double c = std::pow(2.0L, big);
  auto bound = [&](long N) {
    return c * tail_integral(r1, s[0] - 1, std::log(static_cast<long double>(N)));
  };
  long N = 1000;
  const long cap = 1L << 31;
  while (N < cap && (bound(N) > tol / 2 || std::log(static_cast<long double>(N)) + 1 < r1)) N *= 2;
  std::vector<long double> p(r + 1, 0.0L);
  long double sum = 0, comp = 0;
  for (long n = 1; n <= N; ++n) {
    long double inner = r == 1 ? 1.0L : p[1];
    long double term = inner / ipow(static_cast<long double>(n), s[0]);
    long double y = term - comp;
    long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    for (int j = 1; j < r; ++j) {
      long double next = j + 1 < r ? p[j + 1] : 1.0L;
      p[j] += next / ipow(static_cast<long double>(n), s[j]);
    }
  }
  // rounding in long double stays far below the tail for N <= 2^31
  return {sum, bound(N) + 1e-15L};
}

NumericValue mzv_numeric(const MzvIndex& idx, long double tol) {
  if (!idx.convergent()) throw std::invalid_argument("divergent MZV index " + idx.to_string());
  Word w = word_of(standard_exponents(idx));
  const int len = static_cast<int>(w.size());
  const long double part_tol = tol / (4.0L * (len + 1));
  long double total = 0, err = 0;
  for (int j = 0; j <= len; ++j) {
    // first j letters live on (1/2, 1): t -> 1 - t swaps the letters and reverses
    Word left;
    for (int i = j - 1; i >= 0; --i) left.push_back(1 - w[i]);
    Word right(w.begin() + j, w.end());
    NumericValue L = polylog_half(exponents_of(left), part_tol);
    NumericValue R = polylog_half(exponents_of(right), part_tol);
    total += L.value * R.value;
    err += std::fabs(L.value) * R.error + std::fabs(R.value) * L.error + L.error * R.error;
  }
  return {total, err};
}

std::optional<Rational> recognize_rational(long double x, long double tol, long max_den) {
  long double rem = x;
  // convergents h/k
  mpz_class h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  for (int step = 0; step < 64; ++step) {
    long double fl = std::floor(rem);
    mpz_class a(static_cast<long>(fl));
    mpz_class h = a * h_prev + h_prev2;
    mpz_class k = a * k_prev + k_prev2;
    if (k > max_den) return std::nullopt;
    long double approx = h.get_d() / k.get_d();
    if (std::fabs(x - approx) < tol) {
      Rational q(h, k);
      q.canonicalize();
      return q;
    }
    long double frac = rem - fl;
    if (frac < 1e-30L) return std::nullopt;
    rem = 1.0L / frac;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return std::nullopt;
}

std::vector<MzvIndex> indices_of_weight(int weight) {
  std::vector<MzvIndex> out;
  // compositions of weight with last part >= 2
  std::vector<int> cur;
  auto rec = [&](auto&& self, int left) -> void {
    if (left == 0) {
      if (!cur.empty() && cur.back() >= 2) out.push_back(MzvIndex{cur});
      return;
    }
    for (int p = 1; p <= left; ++p) {
      cur.push_back(p);
      self(self, left - p);
      cur.pop_back();
    }
  };
  rec(rec, weight);
  std::sort(out.begin(), out.end());
  return out;
}

// The oracle is good to ~1e-16, so table entries demand a far tighter match than
// the default: at 1e-9 with q <= 1e6 almost any real number has a convergent.
constexpr long double kTableTol = 1e-12L;

MzvTable MzvTable::generate(int max_weight) {
  MzvTable t;
  const long double pi = std::numbers::pi_v<long double>;
  long double z3 = 0;
  for (int w = 2; w <= max_weight; ++w) {
    for (const auto& idx : indices_of_weight(w)) {
      long double v = mzv_numeric(idx).value;
      if (w % 2 == 0) {
        auto r = recognize_rational(v / std::pow(pi, w), kTableTol);
        if (!r) continue;
        // (2 pi i)^w = (-4)^{w/2} pi^w
        Rational denom = 1;
        for (int k = 0; k < w / 2; ++k) denom *= -4;
        t.entries_[idx] = {*r / denom, ""};
      } else if (w == 3) {
        if (z3 == 0) z3 = mzv_numeric(MzvIndex{{3}}).value;
        auto r = recognize_rational(v / z3, kTableTol);
        if (!r) continue;
        t.entries_[idx] = {*r, "z3"};
      }
    }
  }
  return t;
}

MzvTable MzvTable::parse(std::string_view text) {
  MzvTable t;
  std::stringstream ss{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto arrow = line.find("->");
    if (arrow == std::string::npos)
      throw std::invalid_argument("table line " + std::to_string(lineno) + ": missing ->");
    MzvIndex idx = MzvIndex::parse(line.substr(0, arrow));
    std::string rhs = line.substr(arrow + 2);
    rhs.erase(0, rhs.find_first_not_of(" \t"));
    rhs.erase(rhs.find_last_not_of(" \t\r") + 1);
    Entry e;
    auto star = rhs.find('*');
    std::string num = rhs, gen;
    if (star != std::string::npos) {
      num = rhs.substr(0, star);
      gen = rhs.substr(star + 1);
    } else if (!rhs.empty() && std::isalpha(static_cast<unsigned char>(rhs[0]))) {
      num = "1";
      gen = rhs;
    }
    if (!gen.empty() && gen != "z3")
      throw std::invalid_argument("table line " + std::to_string(lineno) + ": unknown generator " + gen);
    if (e.coeff.set_str(num, 10) != 0)
      throw std::invalid_argument("table line " + std::to_string(lineno) + ": bad value " + num);
    e.coeff.canonicalize();
    e.generator = gen;
    t.entries_[idx] = e;
  }
  return t;
}

std::string MzvTable::serialize() const {
  std::string out = "# normalized MZV reduction table: index -> value\n";
  for (auto& [idx, e] : entries_) {
    out += idx.to_string() + " -> ";
    if (e.generator.empty())
      out += e.coeff.get_str();
    else if (e.coeff == 1)
      out += e.generator;
    else
      out += e.coeff.get_str() + "*" + e.generator;
    out += "\n";
  }
  return out;
}

const MzvTable& MzvTable::builtin() {
  static const MzvTable t = parse(R"(
2 -> -1/24
1,2 -> z3
3 -> z3
1,1,2 -> 1/1440
1,3 -> 1/5760
2,2 -> 1/1920
4 -> 1/1440
)");
  return t;
}

const MzvTable::Entry* MzvTable::find(const MzvIndex& i) const {
  auto it = entries_.find(i);
  return it == entries_.end() ? nullptr : &it->second;
}

bool MzvTable::operator==(const MzvTable& o) const {
  if (entries_.size() != o.entries_.size()) return false;
  for (auto& [k, e] : entries_) {
    auto* f = o.find(k);
    if (!f || f->coeff != e.coeff || f->generator != e.generator) return false;
  }
  return true;
}

namespace {
std::mutex table_mutex;
MzvTable& table_storage() {
  static MzvTable t = MzvTable::builtin();
  return t;
}
uint64_t table_gen = 0;
}  // namespace

const MzvTable& active_table() { return table_storage(); }

void set_active_table(const MzvTable& t) {
  std::lock_guard<std::mutex> lk(table_mutex);
  table_storage() = t;
  ++table_gen;
}

uint64_t active_table_generation() { return table_gen; }

Scalar mzv_symbol(const MzvIndex& idx) {
  if (!idx.convergent()) throw std::invalid_argument("divergent MZV index " + idx.to_string());
  if (const auto* e = active_table().find(idx)) {
    if (e->generator.empty()) return Scalar(e->coeff);
    return Scalar::named(e->generator, 3) * e->coeff;
  }
  return Scalar::named("zeta(" + idx.to_string() + ")", idx.weight());
}

}  // namespace lmo
