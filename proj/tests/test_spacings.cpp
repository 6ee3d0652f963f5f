#include <algorithm>
#include <cmath>
#include <numeric>

#include "crtspace/residue_set.hpp"
#include "crtspace/rng.hpp"
#include "crtspace/spacings.hpp"
#include "doctest.h"

using namespace crtspace;

namespace {

// reference N_k by definition, no shortcuts
std::uint64_t naive_count(const ResidueSet& set,
                          const std::vector<std::uint64_t>& h) {
  const std::uint64_t q = set.modulus();
  std::uint64_t n = 0;
  for (std::uint64_t t = 0; t < q; ++t) {
    bool ok = set.contains(t);
    for (std::uint64_t off : h) ok = ok && set.contains((t + off) % q);
    n += ok;
  }
  return n;
}

ResidueSet random_set(SplitMix64& rng, std::uint64_t q, double density) {
  std::vector<std::uint64_t> members;
  for (std::uint64_t x = 0; x < q; ++x)
    if (rng.next_double() < density) members.push_back(x);
  if (members.size() < 2) members = {0, q / 2};
  return ResidueSet::from_sorted(q, members);
}

}  // namespace

TEST_CASE("gap profile basics") {
  const ResidueSet sq7 = gen_prime_set(FamilySpec::squares(), 7);  // {1,2,4}
  const GapProfile p = gaps(sq7);
  CHECK(p.raw_gaps == std::vector<std::uint64_t>{1, 2, 4});
  CHECK(std::accumulate(p.raw_gaps.begin(), p.raw_gaps.end(), 0ULL) == 7);
  const auto norm = p.normalized();
  double mean = 0;
  for (double d : norm) mean += d;
  CHECK(mean / norm.size() == doctest::Approx(1.0));

  const double tail[] = {1.0};
  CHECK(prob_tail(p, tail) == doctest::Approx(1.0 / 3.0));

  const ResidueSet single = ResidueSet::from_sorted(10, {3});
  CHECK_THROWS(gaps(single));
}

TEST_CASE("offset tuple validation") {
  CHECK_THROWS(OffsetTuple({0, 2}));
  CHECK_THROWS(OffsetTuple({3, 3}));
  CHECK_THROWS(OffsetTuple({5, 2}));
  CHECK(OffsetTuple({1, 4, 9}).k() == 4);
}

TEST_CASE("count_tuples matches the definition on random sets") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const std::uint64_t q = 40 + rng.next_below(400);
    // alternate sparse and dense draws to cover both kernels
    const ResidueSet set = random_set(rng, q, trial % 2 ? 0.4 : 0.01);
    for (int k = 2; k <= 4; ++k) {
      std::vector<std::uint64_t> h;
      for (int i = 0; i < k - 1; ++i) h.push_back(1 + rng.next_below(q - 1));
      CHECK(count_tuples(set, h) == naive_count(set, h));
    }
  }
}

TEST_CASE("units give exactly p - k") {
  const std::uint64_t p = 211;
  const ResidueSet units = gen_prime_set(FamilySpec::units(), p);
  CHECK(count_tuples(units, OffsetTuple({5})) == p - 2);
  CHECK(count_tuples(units, OffsetTuple({5, 17})) == p - 3);
  CHECK(count_tuples(units, OffsetTuple({1, 2, 3})) == p - 4);
}

TEST_CASE("interval overlap count") {
  // N_2(h) for the interval {1..s} mod 2s is s - h for 1 <= h < s
  const std::uint64_t s = 12;
  const ResidueSet iv = gen_set(FamilySpec::interval(s), 2 * s);
  for (std::uint64_t h = 1; h < s; ++h) {
    const std::uint64_t off[] = {h};
    CHECK(count_tuples(iv, off) == s - h);
  }
}

TEST_CASE("multiplicative evaluation equals the materialized count") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::uint64_t q1 = 5 + rng.next_below(60), q2;
    do {
      q2 = 5 + rng.next_below(60);
    } while (std::gcd(q1, q2) != 1);
    std::vector<ResidueSet> comps{random_set(rng, q1, 0.3),
                                  random_set(rng, q2, 0.3)};
    const ResidueSet prod = crt_compose(comps);
    const std::vector<std::uint64_t> offs{1 + rng.next_below(q1 * q2 - 2)};
    CHECK(count_tuples_crt(std::span<const ResidueSet>(comps), offs) ==
          count_tuples(prod, offs));
  }
}

TEST_CASE("sum of N_2 over all offsets is count squared") {
  SplitMix64 rng(99);
  const ResidueSet set = random_set(rng, 200, 0.2);
  const auto table = pair_count_table(set);
  const std::uint64_t total = std::accumulate(table.begin(), table.end(), 0ULL);
  CHECK(total == set.count() * set.count());
  // and the h = 0 entry is the set size
  CHECK(table[0] == set.count());
}

TEST_CASE("epsilon_k and e_k") {
  const ResidueSet units7 = gen_prime_set(FamilySpec::units(), 7);
  const std::uint64_t off[] = {3};
  // N_2 = 5, 1 + eps = 5 * 7 / 36
  CHECK(epsilon_k(units7, off) == doctest::Approx(5.0 * 7.0 / 36.0 - 1.0));

  std::vector<ResidueSet> comps{gen_prime_set(FamilySpec::units(), 3),
                                gen_prime_set(FamilySpec::units(), 5)};
  CHECK(e_k(comps, off, 1) == 1.0);
  const double e15 = e_k(comps, off, 15);
  const std::uint64_t off3[] = {3 % 3};
  const std::uint64_t off5[] = {3 % 5};
  CHECK(e15 == doctest::Approx(epsilon_k(comps[0], off3) *
                               epsilon_k(comps[1], off5)));
  CHECK_THROWS(e_k(comps, off, 7));   // no component for that prime
  CHECK_THROWS(e_k(comps, off, 9));   // not squarefree
}

TEST_CASE("correlation on a known interval") {
  // interval {1..s} mod 2s: R_2((0,1]) sums (s-h)/s for h = 1..floor(s*... )
  const std::uint64_t s = 100;
  const ResidueSet iv = gen_set(FamilySpec::interval(s), 2 * s);
  const CorrelationReport rep = correlation(iv, CorrelationBox{{1.0}, 1.0});
  // s_q = 2, bound = 2: N(1) + N(2) = (s-1) + (s-2), R = (2s-3)/s
  CHECK(rep.lattice_points == 2);
  CHECK(rep.r_value == doctest::Approx((2.0 * s - 3.0) / s));
  CHECK(rep.method == "direct");
}

TEST_CASE("correlation is thread-count invariant") {
  const ResidueSet sq = gen_prime_set(FamilySpec::squares(), 1009);
  const CorrelationBox box{{2.0}, 1.0};
  const CorrelationReport a = correlation(sq, box, 1);
  const CorrelationReport b = correlation(sq, box, 7);
  CHECK(a.r_value == b.r_value);
  CHECK(a.lattice_points == b.lattice_points);
  CHECK(strong_poisson_stat(sq, box, 1) == strong_poisson_stat(sq, box, 7));
}

TEST_CASE("ks distance") {
  // two equal gaps: empirical CDF jumps to 1 at Delta = 1
  const ResidueSet two = ResidueSet::from_sorted(10, {0, 5});
  const double d = ks_exp_distance(gaps(two));
  CHECK(d == doctest::Approx(1.0 - std::exp(-1.0)));
}

TEST_CASE("gap value histogram") {
  const ResidueSet set = ResidueSet::from_sorted(10, {0, 1, 2, 5});
  // raw gaps 1,1,3,5
  const auto hist = gap_value_histogram(set, 4);
  CHECK(hist[0] == doctest::Approx(0.5));
  CHECK(hist[1] == doctest::Approx(0.0));
  CHECK(hist[2] == doctest::Approx(0.25));
  CHECK(hist[3] == doctest::Approx(0.0));
}

TEST_CASE("full set has zero epsilon everywhere") {
  const ResidueSet full = gen_set(FamilySpec::interval(64), 64);
  CHECK(full.count() == 64);
  CHECK(strong_poisson_stat(full, CorrelationBox{{2.0}, 1.0}) == 0.0);
  const EpsSup es = eps_sup(full, 2);
  CHECK(es.exact);
  CHECK(es.value == 0.0);
}

TEST_CASE("eps_sup exhaustive vs sampled flag") {
  const ResidueSet sq = gen_prime_set(FamilySpec::squares(), 101);
  const EpsSup exact = eps_sup(sq, 2, 1000);
  CHECK(exact.exact);
  CHECK(exact.tuples_scanned == 100);
  const EpsSup sampled = eps_sup(sq, 3, 100, 42);
  CHECK(!sampled.exact);
  CHECK(sampled.tuples_scanned == 100);
  CHECK(sampled.value <= exact.value + 10.0);  // sanity only
}
