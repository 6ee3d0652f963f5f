#include <algorithm>
#include <numeric>
#include <sstream>

#include "crtspace/arith.hpp"
#include "crtspace/residue_set.hpp"
#include "crtspace/rng.hpp"
#include "doctest.h"

using namespace crtspace;

TEST_CASE("family generators at a prime") {
  const ResidueSet units7 = gen_prime_set(FamilySpec::units(), 7);
  CHECK(units7.count() == 6);
  CHECK(!units7.contains(0));

  const ResidueSet sq7 = gen_prime_set(FamilySpec::squares(), 7);
  CHECK(sq7.to_list() == std::vector<std::uint64_t>{1, 2, 4});

  // cubes are a bijection on units when gcd(3, p-1) = 1
  const ResidueSet cubes5 = gen_prime_set(FamilySpec::dth_powers(3), 5);
  CHECK(cubes5.count() == 4);

  const ResidueSet img7 =
      gen_prime_set(FamilySpec::poly_image({0, 0, 1}), 7);  // x^2 image
  CHECK(img7.to_list() == std::vector<std::uint64_t>{0, 1, 2, 4});

  // y^2 = x^3 + x + 1 mod 5: x-coordinates with a square (or zero) RHS
  const ResidueSet curve5 = gen_prime_set(FamilySpec::curve(1, 1), 5);
  std::vector<std::uint64_t> expect;
  for (std::uint64_t x = 0; x < 5; ++x) {
    const std::uint64_t rhs = (x * x * x + x + 1) % 5;
    bool sq = false;
    for (std::uint64_t y = 0; y < 5; ++y) sq = sq || (y * y) % 5 == rhs;
    if (sq) expect.push_back(x);
  }
  CHECK(curve5.to_list() == expect);
  CHECK_THROWS(gen_prime_set(FamilySpec::curve(0, 0), 5));  // singular
}

TEST_CASE("direct families") {
  const ResidueSet iv = gen_set(FamilySpec::interval(4), 10);
  CHECK(iv.to_list() == std::vector<std::uint64_t>{1, 2, 3, 4});

  const ResidueSet ml = gen_set(FamilySpec::multiples(3, 1.0, 99), 12);
  CHECK(ml.to_list() == std::vector<std::uint64_t>{0, 3, 6, 9});  // 12 wraps to 0

  const ResidueSet ex = gen_set(FamilySpec::explicit_list({0, 5, 10}), 15);
  CHECK(ex.count() == 3);
  CHECK(ex.contains(5));
  CHECK(!ex.contains(6));
}

TEST_CASE("bernoulli draws are order-independent and seed-deterministic") {
  const ResidueSet a = gen_set(FamilySpec::bernoulli(4.0, 123), 5000);
  const ResidueSet b = gen_set(FamilySpec::bernoulli(4.0, 123), 5000);
  CHECK(a.to_list() == b.to_list());
  const ResidueSet c = gen_set(FamilySpec::bernoulli(4.0, 124), 5000);
  CHECK(a.to_list() != c.to_list());
  // density roughly 1/4
  CHECK(a.count() > 1000);
  CHECK(a.count() < 1500);
}

TEST_CASE("per-prime families compose through the CRT") {
  const ResidueSet units30 = gen_set(FamilySpec::units(), 30);
  CHECK(units30.count() == 8);  // phi(30)

  const ResidueSet sq105 = gen_set(FamilySpec::squares(), 105);
  CHECK(sq105.count() == 6);  // 1 * 2 * 3 nonzero QR counts for 3,5,7
  for (std::uint64_t x : sq105.to_list()) {
    CHECK(legendre(static_cast<std::int64_t>(x % 3), 3) >= 0);
  }

  // membership in the composition is the conjunction of memberships
  const ResidueSet s1 = ResidueSet::from_sorted(4, {1, 3});
  const ResidueSet s2 = ResidueSet::from_sorted(9, {0, 2, 5});
  const std::vector<ResidueSet> comps{s1, s2};
  const ResidueSet prod = crt_compose(comps);
  CHECK(prod.modulus() == 36);
  for (std::uint64_t x = 0; x < 36; ++x)
    CHECK(prod.contains(x) == (s1.contains(x % 4) && s2.contains(x % 9)));

  const ResidueSet t1 = ResidueSet::from_sorted(6, {1});
  const ResidueSet t2 = ResidueSet::from_sorted(10, {1});
  const std::vector<ResidueSet> bad{t1, t2};
  CHECK_THROWS(crt_compose(bad));  // moduli share a factor
}

TEST_CASE("representation threshold") {
  // dense iff count/q > 1/64
  std::vector<std::uint64_t> few{0, 1};
  CHECK(!ResidueSet::from_sorted(1000, few).dense());
  std::vector<std::uint64_t> many(500);
  std::iota(many.begin(), many.end(), 0);
  CHECK(ResidueSet::from_sorted(1000, many).dense());
}

TEST_CASE("CRSP round trip") {
  SplitMix64 rng(777);
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint64_t q = 50 + rng.next_below(2000);
    std::vector<std::uint64_t> members;
    for (std::uint64_t x = 0; x < q; ++x)
      if (rng.next_below(trial % 2 ? 3 : 100) == 0) members.push_back(x);
    if (members.empty()) members.push_back(q - 1);
    const ResidueSet set = ResidueSet::from_sorted(q, members);
    std::ostringstream out;
    set.write(out);
    std::istringstream in(out.str());
    const ResidueSet back = ResidueSet::read(in);
    CHECK(back.modulus() == q);
    CHECK(back.to_list() == members);
    CHECK(back.dense() == set.dense());
  }
  std::istringstream garbage("XXXXYYYY");
  CHECK_THROWS(ResidueSet::read(garbage));
}

TEST_CASE("stats") {
  const ResidueSet set = ResidueSet::from_sorted(100, {0, 10, 20, 30});
  const SetStats st = stats(set);
  CHECK(st.r == doctest::Approx(0.04));
  CHECK(st.s == doctest::Approx(25.0));
  const ResidueSet empty = ResidueSet::from_sorted(10, {});
  CHECK_THROWS(stats(empty));
}
