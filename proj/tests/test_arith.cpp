#include <numeric>

#include "crtspace/arith.hpp"
#include "doctest.h"

using namespace crtspace;

TEST_CASE("mulmod and powmod near the 64-bit boundary") {
  const std::uint64_t p = 18446744073709551557ULL;  // largest 64-bit prime
  CHECK(mulmod(p - 1, p - 1, p) == 1);
  CHECK(powmod(2, p - 1, p) == 1);  // Fermat
  CHECK(powmod(0, 0, 7) == 1);
  CHECK(powmod(5, 0, 1) == 0);
}

TEST_CASE("primality") {
  CHECK(!is_prime(0));
  CHECK(!is_prime(1));
  CHECK(is_prime(2));
  CHECK(is_prime(10007));
  CHECK(is_prime(1000003));
  CHECK(is_prime(1000007 + 0) == false);  // 1000007 = 29 * 34483
  CHECK(!is_prime(561));   // Carmichael
  CHECK(!is_prime(46657)); // Carmichael
  CHECK(is_prime(2305843009213693951ULL));  // 2^61 - 1
}

TEST_CASE("factorize") {
  CHECK(factorize(1).factors.empty());
  const Factorization f = factorize(1155);
  CHECK(f.primes() == std::vector<std::uint64_t>{3, 5, 7, 11});
  CHECK(f.squarefree());
  CHECK(f.value() == 1155);
  CHECK(f.divisors().size() == 16);

  const Factorization g = factorize(1024);
  CHECK(g.factors.size() == 1);
  CHECK(g.factors[0] == std::pair<std::uint64_t, int>{2, 10});
  CHECK(!g.squarefree());

  const Factorization h = factorize(1000003ULL * 1000033ULL);
  CHECK(h.primes() == std::vector<std::uint64_t>{1000003, 1000033});
}

TEST_CASE("crt_lift") {
  const std::pair<std::uint64_t, std::uint64_t> pairs[] = {{2, 3}, {3, 5}};
  CHECK(crt_lift(pairs) == 8);
  const std::pair<std::uint64_t, std::uint64_t> triple[] = {{1, 3}, {2, 5}, {3, 7}};
  const std::uint64_t x = crt_lift(triple);
  CHECK(x % 3 == 1);
  CHECK(x % 5 == 2);
  CHECK(x % 7 == 3);
  CHECK(x < 105);
  const std::pair<std::uint64_t, std::uint64_t> bad[] = {{1, 6}, {2, 4}};
  CHECK_THROWS(crt_lift(bad));
}

TEST_CASE("legendre symbol") {
  CHECK(legendre(0, 7) == 0);
  CHECK(legendre(2, 7) == 1);   // 3^2 = 2 mod 7
  CHECK(legendre(3, 7) == -1);
  CHECK(legendre(-1, 13) == 1);  // p = 1 mod 4
  CHECK(legendre(-1, 7) == -1);  // p = 3 mod 4
  CHECK_THROWS(legendre(1, 8));
}

TEST_CASE("sqrt_mod") {
  for (std::uint64_t p : {7ULL, 13ULL, 10007ULL, 1000003ULL}) {
    int residues = 0;
    for (std::uint64_t a = 1; a < std::min<std::uint64_t>(p, 50); ++a) {
      const std::uint64_t r = sqrt_mod(a, p);
      if (legendre(static_cast<std::int64_t>(a), p) == 1) {
        REQUIRE(r < p);
        CHECK(mulmod(r, r, p) == a);
        ++residues;
      } else {
        CHECK(r == p);  // non-residue sentinel
      }
    }
    CHECK(residues > 0);
  }
  CHECK(sqrt_mod(0, 13) == 0);
}
