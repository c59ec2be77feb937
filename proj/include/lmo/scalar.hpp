#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lmo {

using Rational = mpq_class;

// zeta(i_1,...,i_k) = sum over n_1 < ... < n_k of prod n_j^{-i_j}; converges iff i_k >= 2.
struct MzvIndex {
  std::vector<int> entries;

  int weight() const;
  int depth() const { return static_cast<int>(entries.size()); }
  bool convergent() const;
  std::string to_string() const;  // "1,2"
  static MzvIndex parse(std::string_view text);

  auto operator<=>(const MzvIndex&) const = default;
};

// Symbols of the coefficient ring: z3 is the weight-3 generator, every other
// symbol is a formal normalized MZV that the table could not reduce.
class SymbolRegistry {
 public:
  static SymbolRegistry& instance();
  uint32_t intern(const std::string& name, int weight);
  const std::string& name(uint32_t id) const;
  int weight(uint32_t id) const;
  std::optional<uint32_t> find(const std::string& name) const;

 private:
  SymbolRegistry();
  std::vector<std::string> names_;
  std::vector<int> weights_;
  std::map<std::string, uint32_t> ids_;
};

using Monomial = std::vector<uint32_t>;  // sorted symbol ids, repeats allowed

// Polynomial over Q in the registered symbols.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : constant_(v) {}  // NOLINT
  Scalar(const Rational& v) : constant_(v) { constant_.canonicalize(); }  // NOLINT
  static Scalar symbol(uint32_t id);
  static Scalar named(const std::string& name, int weight);

  bool is_zero() const { return constant_ == 0 && symbolic_.empty(); }
  bool is_rational() const { return symbolic_.empty(); }
  const Rational& constant() const { return constant_; }
  const std::map<Monomial, Rational>& symbolic() const { return symbolic_; }
  Rational coefficient(const Monomial& m) const;
  // Symbols that are not the z3 generator (unreduced MZVs).
  std::vector<std::string> formal_symbols() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator*=(const Rational& r);
  Scalar operator-() const;
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator*(Scalar a, const Rational& b) { return a *= b; }
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  std::string to_string() const;
  static Scalar parse(std::string_view text);

 private:
  void add_symbolic(const Monomial& m, const Rational& c);
  Rational constant_;
  std::map<Monomial, Rational> symbolic_;
};

// Numeric MZV evaluation with an explicit error bound.
struct NumericValue {
  long double value = 0;
  long double error = 0;
};

// Truncated nested sum; the tail is bounded by an integral.
NumericValue mzv_partial_sum(const MzvIndex& index, long double tol);
// Iterated-integral word split at 1/2; each half is a multiple polylog at 1/2.
NumericValue mzv_numeric(const MzvIndex& index, long double tol = 1e-16L);

// Continued-fraction recognition of x as p/q, q <= max_den, |x - p/q| < tol.
std::optional<Rational> recognize_rational(long double x, long double tol = 1e-9L,
                                           long max_den = 1000000);

// All convergent indices of the given weight.
std::vector<MzvIndex> indices_of_weight(int weight);

// Table of normalized values zeta(I) / (2 pi i)^{|I|}.
class MzvTable {
 public:
  struct Entry {
    Rational coeff;          // value is coeff, or coeff * generator
    std::string generator;   // empty for a rational entry
  };

  static MzvTable generate(int max_weight);  // oracle + recognition
  static MzvTable parse(std::string_view text);
  static const MzvTable& builtin();
  std::string serialize() const;

  const Entry* find(const MzvIndex& i) const;
  const std::map<MzvIndex, Entry>& entries() const { return entries_; }
  void set(const MzvIndex& i, Entry e) { entries_[i] = std::move(e); }
  bool operator==(const MzvTable& o) const;

 private:
  std::map<MzvIndex, Entry> entries_;
};

// Process-wide table used by mzv_symbol; replacing it clears dependent caches.
const MzvTable& active_table();
void set_active_table(const MzvTable& t);
uint64_t active_table_generation();

// Normalized MZV as a ring element; unlisted indices become formal symbols.
Scalar mzv_symbol(const MzvIndex& index);

}  // namespace lmo
