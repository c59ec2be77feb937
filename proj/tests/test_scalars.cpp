#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lmo/scalar.hpp"

using namespace lmo;

namespace {
const long double kPi = std::numbers::pi_v<long double>;
}

TEST_CASE("partial sums against closed forms") {
  auto z2 = mzv_partial_sum(MzvIndex{{2}}, 1e-7L);
  CHECK(std::fabs(z2.value - kPi * kPi / 6) < 1e-7L);
  CHECK(z2.error <= 1e-7L);
  auto z3 = mzv_partial_sum(MzvIndex{{3}}, 1e-7L);
  CHECK(std::fabs(z3.value - 1.2020569031595942854L) < 1e-7L);
  // Euler: zeta(1,2) = zeta(3)
  auto z12 = mzv_partial_sum(MzvIndex{{1, 2}}, 1e-7L);
  CHECK(std::fabs(z12.value - z3.value) < 2e-7L);
}

TEST_CASE("split-at-half evaluation agrees with partial sums") {
  for (auto idx : {MzvIndex{{2}}, MzvIndex{{3}}, MzvIndex{{2, 2}}, MzvIndex{{1, 3}}}) {
    auto a = mzv_numeric(idx);
    auto b = mzv_partial_sum(idx, 1e-5L);
    CHECK(std::fabs(a.value - b.value) < 1e-5L);
    CHECK(a.error < 1e-14L);
  }
  CHECK(std::fabs(mzv_numeric(MzvIndex{{4}}).value - std::pow(kPi, 4) / 90) < 1e-15L);
  CHECK(std::fabs(mzv_numeric(MzvIndex{{1, 1, 2}}).value - std::pow(kPi, 4) / 90) < 1e-15L);
  CHECK(std::fabs(mzv_numeric(MzvIndex{{1, 3}}).value - std::pow(kPi, 4) / 360) < 1e-15L);
  CHECK(std::fabs(mzv_numeric(MzvIndex{{2, 2}}).value - std::pow(kPi, 4) / 120) < 1e-15L);
  CHECK_THROWS(mzv_numeric(MzvIndex{{2, 1}}));
}

TEST_CASE("rational recognition") {
  auto r = recognize_rational(1.0L / 90);
  REQUIRE(r);
  CHECK(*r == Rational(1, 90));
  // loose default tolerance accepts a convergent of pi; a tight one does not
  CHECK(recognize_rational(kPi / 10));
  CHECK(!recognize_rational(kPi / 10, 1e-12L));
}

TEST_CASE("generated table matches the shipped table and the data file") {
  MzvTable gen = MzvTable::generate(4);
  CHECK(gen == MzvTable::builtin());
  std::ifstream in(std::string(LMO_DATA_DIR) + "/mzv_table.txt");
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(MzvTable::parse(ss.str()) == gen);
  CHECK(MzvTable::parse(gen.serialize()) == gen);
}

TEST_CASE("normalized values") {
  CHECK(mzv_symbol(MzvIndex{{2}}) == Scalar(Rational(-1, 24)));
  CHECK(mzv_symbol(MzvIndex{{4}}) == Scalar(Rational(1, 1440)));
  CHECK(mzv_symbol(MzvIndex{{1, 3}}) == Scalar(Rational(1, 5760)));
  CHECK(mzv_symbol(MzvIndex{{1, 2}}) == mzv_symbol(MzvIndex{{3}}));
  Scalar z5 = mzv_symbol(MzvIndex{{5}});
  CHECK(!z5.is_rational());
  CHECK(z5.formal_symbols() == std::vector<std::string>{"zeta(5)"});
  CHECK(mzv_symbol(MzvIndex{{3}}).formal_symbols().empty());
}

TEST_CASE("scalar arithmetic and text round trip") {
  Scalar z3 = mzv_symbol(MzvIndex{{3}});
  Scalar a = Scalar(Rational(1, 2)) + z3 * Rational(3) - z3 * z3 * Rational(1, 4);
  CHECK(Scalar::parse(a.to_string()) == a);
  CHECK((a - a).is_zero());
  Scalar b = a * a;
  CHECK(b.coefficient({0, 0, 0, 0}) == Rational(1, 16));
  CHECK(Scalar::parse("-1/24") == Scalar(Rational(-1, 24)));
}
