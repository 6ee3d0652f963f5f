#include <array>
#include <cmath>
#include <cstdint>

#include "crtspace/polyval.hpp"
#include "crtspace/rng.hpp"
#include "doctest.h"

using namespace crtspace;

namespace {

IntPolynomial poly(std::initializer_list<std::int64_t> coeffs) {
  std::vector<std::int64_t> v(coeffs);
  return IntPolynomial::from_int64(v);
}

}  // namespace

TEST_CASE("polynomial basics") {
  const IntPolynomial f = poly({0, 0, -2, 0, 1});  // x^4 - 2x^2
  CHECK(f.degree() == 4);
  CHECK(f.eval(2) == 8);
  CHECK(f.eval(-1) == -1);
  CHECK(f.eval_mod(3, 7) == (81 - 18 + 7 * 10) % 7);
  const IntPolynomial d = f.derivative();
  CHECK(d.degree() == 3);
  CHECK(d.eval(1) == 0);  // 4x^3 - 4x at 1
  CHECK_THROWS(IntPolynomial({BigInt(0)}));
}

TEST_CASE("distinct critical values") {
  CHECK(critical_values_distinct(poly({0, 0, 1})).distinct_count == 1);
  CHECK(critical_values_distinct(poly({0, 0, 1})).generic);

  const CriticalValueReport anomalous = critical_values_distinct(poly({0, 0, -2, 0, 1}));
  CHECK(anomalous.distinct_count == 2);  // critical values 0 and -1
  CHECK(!anomalous.generic);

  const CriticalValueReport cubic = critical_values_distinct(poly({0, -3, 0, 1}));
  CHECK(cubic.distinct_count == 2);  // +-2
  CHECK(cubic.generic);

  CHECK(critical_values_distinct(poly({0, 1, 0, 0, 1})).generic);  // x^4 + x
  CHECK_THROWS(critical_values_distinct(poly({1, 2})));  // degree 1
}

TEST_CASE("critical value count is shift invariant") {
  SplitMix64 rng(8);
  const IntPolynomial fs[] = {poly({0, 0, -2, 0, 1}), poly({0, 1, 0, 0, 1}),
                              poly({0, -3, 0, 1})};
  for (const IntPolynomial& f : fs) {
    const int base = critical_values_distinct(f).distinct_count;
    for (int trial = 0; trial < 3; ++trial) {
      const std::int64_t c =
          static_cast<std::int64_t>(rng.next_below(19)) - 9;
      // f + c shifts every critical value by c
      std::vector<BigInt> up = f.coeffs;
      up[0] += c;
      CHECK(critical_values_distinct(IntPolynomial(up)).distinct_count == base);
      // f(x + c) keeps critical values
      std::vector<BigInt> comp(f.coeffs.size(), BigInt(0));
      for (std::size_t i = f.coeffs.size(); i-- > 0;) {
        // comp = comp * (x + c) + coeff_i, done on coefficient vectors
        BigInt carry = 0;
        for (std::size_t j = 0; j < comp.size(); ++j) {
          const BigInt nv = comp[j] * c + carry;
          carry = comp[j];
          comp[j] = nv;
        }
        comp[0] += f.coeffs[i];
      }
      CHECK(critical_values_distinct(IntPolynomial(comp)).distinct_count == base);
    }
  }
}

TEST_CASE("c_n series and derangements") {
  CHECK(c_n(1) == BigRat(1));
  CHECK(c_n(2) == BigRat(1, 2));
  CHECK(c_n(4) == BigRat(5, 8));
  // n! (1 - c_n) = derangement number
  BigInt fact = 1;
  BigInt der = 1;  // D_0 = 1
  for (int n = 1; n <= 12; ++n) {
    fact *= n;
    // D_n = n D_{n-1} + (-1)^n
    der = der * n + (n % 2 == 0 ? 1 : -1);
    const BigRat lhs = BigRat(fact) * (BigRat(1) - c_n(n));
    CHECK(lhs == BigRat(der));
  }
  // alternating tail bound: |c_n - c_16| <= 1/(n+1)!
  const BigRat limit16 = c_n(16);
  BigInt f = 1;
  for (int n = 1; n <= 15; ++n) {
    f = 1;
    for (int i = 2; i <= n + 1; ++i) f *= i;
    const BigRat diff = c_n(n) > limit16 ? c_n(n) - limit16 : limit16 - c_n(n);
    CHECK(diff <= BigRat(1, f));
  }
}

TEST_CASE("value set density") {
  CHECK(value_set_density(poly({0, 1}), 13).size == 13);  // identity permutes
  CHECK(value_set_density(poly({0, 0, 1}), 7).size == 4);  // {0,1,2,4}
  CHECK(value_set_density(poly({0, 0, 0, 1}), 11).size == 11);  // 11 = 2 mod 3
  CHECK(value_set_density(poly({0, 0, 0, 1}), 7).size == 3);    // cubes + 0
  CHECK_THROWS(value_set_density(poly({0, 0, 1}), 2));  // p <= deg f
  CHECK_THROWS(value_set_density(poly({0, 0, 1}), 15));  // not prime
}

TEST_CASE("anomaly dual paths agree on small primes") {
  for (std::uint64_t p : {7ULL, 11ULL, 13ULL, 101ULL, 499ULL}) {
    const AnomalyReport rep = anomaly_check(p);
    CHECK(rep.n2_direct == rep.n2_legendre);
    CHECK(rep.predicted == (p % 4 == 1 ? 3.0 / 32.0 : 3.0 / 16.0));
  }
}

TEST_CASE("S_p counts") {
  // direct enumeration at p = 5: (x^2-1)^2 takes values {0, 1, 4}
  const SpCount c5 = s_p_legendre_count(5);
  CHECK(c5.direct == 3);
  CHECK(c5.legendre_path == c5.direct);

  const SpCount c101 = s_p_legendre_count(101);
  CHECK(c101.legendre_path == c101.direct);

  for (std::uint64_t p : {10007ULL, 10009ULL}) {
    const SpCount c = s_p_legendre_count(p);
    CHECK(c.legendre_path == c.direct);
    const double dev =
        std::abs(static_cast<double>(c.direct) / static_cast<double>(p) - 3.0 / 8.0);
    CHECK(dev <= 5.0 / std::sqrt(static_cast<double>(p)));
  }
}

TEST_CASE("parity cover") {
  const std::vector<std::uint64_t> s{0, 1, 2, 4};
  const std::vector<std::uint64_t> h{0, 4, 6};
  CHECK(!parity_cover_exists(s, h, 7).has_value());

  // |H| = 1: any t in S - h works
  const std::vector<std::uint64_t> h1{3};
  const auto t = parity_cover_exists(s, h1, 7);
  REQUIRE(t.has_value());
  CHECK(((*t + 3) % 7 == 0 || (*t + 3) % 7 == 1 || (*t + 3) % 7 == 2 ||
         (*t + 3) % 7 == 4));

  const std::vector<std::uint64_t> empty;
  CHECK_THROWS(parity_cover_exists(empty, h, 7));
}
