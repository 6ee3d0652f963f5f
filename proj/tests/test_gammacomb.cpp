#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "crtspace/gammacomb.hpp"
#include "doctest.h"

using namespace crtspace;

namespace {

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  std::uint64_t b = 1;
  for (std::uint64_t i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST_CASE("gamma_of_tuple") {
  const std::uint64_t h1[] = {1, 2};
  const GammaStructure ones = gamma_of_tuple(h1, 1);
  CHECK(ones.at(0, 1) == 1);
  CHECK(ones.at(1, 2) == 1);

  const std::uint64_t h2[] = {2, 6};
  const GammaStructure g = gamma_of_tuple(h2, 6);
  CHECK(g.at(0, 1) == 2);
  CHECK(g.at(0, 2) == 6);
  CHECK(g.at(1, 2) == 2);
  const GammaDerived d = derive(g);
  CHECK(d.gamma_j == std::vector<std::uint64_t>{2, 6});
  CHECK(d.gamma_product == 12);
  CHECK(d.conductor == 6);

  const std::uint64_t h3[] = {3, 5};
  const GammaStructure g15 = gamma_of_tuple(h3, 15);
  CHECK(g15.at(0, 1) == 3);
  CHECK(g15.at(0, 2) == 5);
  CHECK(g15.at(1, 2) == 1);

  const std::uint64_t dup[] = {4, 4};
  CHECK_THROWS(gamma_of_tuple(dup, 6));
  CHECK_THROWS(gamma_of_tuple(h2, 12));  // c not squarefree
}

TEST_CASE("derived invariants: c | gamma | c^{k-1}") {
  for (int k : {2, 3, 4}) {
    for (std::uint64_t c : {2ULL, 6ULL, 30ULL}) {
      for (const auto& g : enumerate_structures(c, k)) {
        const GammaDerived d = derive(g);
        CHECK(d.gamma_product % d.conductor == 0);
        CHECK(ipow(d.conductor, k - 1) % d.gamma_product == 0);
      }
    }
  }
}

TEST_CASE("gamma product is invariant under relabeling of nonzero indices") {
  for (int k : {3, 4}) {
    for (std::uint64_t c : {6ULL, 10ULL}) {
      for (const auto& g : enumerate_structures(c, k)) {
        const std::uint64_t ref = derive(g).gamma_product;
        std::vector<int> sigma(k);
        std::iota(sigma.begin(), sigma.end(), 0);
        do {
          GammaStructure relabeled = GammaStructure::all_ones(k);
          for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
              relabeled.set(i, j, g.at(sigma[i], sigma[j]));
          CHECK(derive(relabeled).gamma_product == ref);
        } while (std::next_permutation(sigma.begin() + 1, sigma.end()));
      }
    }
  }
}

TEST_CASE("m_gamma_structure small cases") {
  GammaStructure even = GammaStructure::all_ones(2);
  even.set(0, 1, 2);
  CHECK(m_gamma_structure(even, 10) == 5);  // even h in [1,10]

  const GammaStructure odd = GammaStructure::all_ones(2);
  CHECK(m_gamma_structure(odd, 10, 2) == 5);  // odd h

  GammaStructure big = GammaStructure::all_ones(2);
  big.set(0, 1, 13);
  CHECK(m_gamma_structure(big, 10, 13) == 0);  // entry exceeds H

  CHECK_THROWS(m_gamma_structure(GammaStructure::all_ones(3), 100000));  // budget
}

TEST_CASE("m_gamma and the partition identity") {
  // gamma = c = 1: no congruence condition, all distinct tuples
  CHECK(m_gamma(1, 1, 3, 6) == 6 * 5);
  CHECK(m_gamma(1, 1, 2, 9) == 9);

  for (int k : {2, 3}) {
    for (std::uint64_t c : {2ULL, 6ULL}) {
      const std::uint64_t big_h = 8;
      std::uint64_t total = 0;
      std::vector<std::uint64_t> gammas;
      for (const auto& g : enumerate_structures(c, k)) {
        const std::uint64_t gv = derive(g).gamma_product;
        if (std::find(gammas.begin(), gammas.end(), gv) == gammas.end())
          gammas.push_back(gv);
      }
      for (std::uint64_t gv : gammas) total += m_gamma(gv, c, k, big_h);
      std::uint64_t expect = 1;
      for (int i = 1; i < k; ++i) expect *= big_h + 1 - i;
      CHECK(total == expect);
    }
  }
  CHECK_THROWS(m_gamma(3, 2, 3, 5));   // rad(gamma) does not divide c
  CHECK_THROWS(m_gamma(8, 2, 3, 5));   // gamma does not divide c^{k-1}
}

TEST_CASE("stirling numbers") {
  CHECK(stirling2(1, 1) == 1);
  CHECK(stirling2(4, 4) == 1);
  CHECK(stirling2(4, 1) == 1);
  CHECK(stirling2(4, 2) == 7);
  CHECK(stirling2(5, 3) == 25);
  CHECK_THROWS(stirling2(3, 0));
  CHECK_THROWS(stirling2(3, 4));

  // recurrence S(k,l) = l S(k-1,l) + S(k-1,l-1); S(n,1) = 1 covers l = 1
  for (int k = 3; k <= 10; ++k) {
    CHECK(stirling2(k, 1) == 1);
    for (int l = 2; l < k; ++l)
      CHECK(stirling2(k, l) ==
            static_cast<std::uint64_t>(l) * stirling2(k - 1, l) +
                stirling2(k - 1, l - 1));
  }
}

TEST_CASE("stirling alternating sum") {
  for (int k = 1; k <= 10; ++k) {
    for (int l = 1; l <= k; ++l) {
      // S(k,l) = (1/l!) sum_{j=0..l} (-1)^j C(l,j) (l-j)^k
      std::int64_t sum = 0;
      for (int j = 0; j <= l; ++j) {
        const std::int64_t term =
            static_cast<std::int64_t>(binom(l, j) * ipow(l - j, k));
        sum += (j % 2 == 0) ? term : -term;
      }
      std::uint64_t fact = 1;
      for (int i = 2; i <= l; ++i) fact *= i;
      CHECK(static_cast<std::uint64_t>(sum) / fact == stirling2(k, l));
      CHECK(static_cast<std::uint64_t>(sum) % fact == 0);
    }
  }
}

TEST_CASE("count_structures") {
  CHECK(count_structures(1, 1, 3) == 1);
  CHECK(count_structures(1, 6, 3) == 1);
  CHECK(count_structures(2, 2, 3) == 3);   // = S(3,2)
  CHECK(count_structures(4, 2, 3) == 1);   // = S(3,1)
  CHECK(count_structures(6, 6, 3) == 9);   // S(3,2)^2
  // agreement with explicit enumeration
  for (int k : {2, 3}) {
    for (std::uint64_t c : {2ULL, 6ULL, 15ULL}) {
      const auto structures = enumerate_structures(c, k);
      std::vector<std::uint64_t> gammas;
      for (const auto& g : structures) gammas.push_back(derive(g).gamma_product);
      std::vector<std::uint64_t> uniq = gammas;
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
      for (std::uint64_t gv : uniq)
        CHECK(count_structures(gv, c, k) ==
              static_cast<std::uint64_t>(
                  std::count(gammas.begin(), gammas.end(), gv)));
    }
  }
}

TEST_CASE("bounds dominate the exhaustive count") {
  for (std::uint64_t c : {6ULL, 10ULL}) {
    for (int k : {2, 3}) {
      for (const auto& g : enumerate_structures(c, k)) {
        const std::uint64_t m = m_gamma_structure(g, 20, c);
        std::vector<int> sigma(k);
        std::iota(sigma.begin(), sigma.end(), 0);
        do {
          const auto [num, den] = product_bound_exact(g, 20, sigma);
          CHECK(m * den <= num);
        } while (std::next_permutation(sigma.begin() + 1, sigma.end()));
        const auto [cnum, cden] = coarse_bound_exact(g, 20);
        CHECK(m * cden <= cnum);
      }
    }
  }
}

TEST_CASE("exponent table") {
  // tau_1 = floor(sqrt(2k + 1/4) - 1/2)
  const int expected_tau1[] = {0, 0, 1, 2, 2, 2, 3, 3, 3, 3, 4, 4, 4};
  for (int k = 2; k <= 12; ++k) {
    const ExponentTable t = exponent_table(k);
    CHECK(t.tau1 == expected_tau1[k]);
    // w(k-1) = k(k-1)/2 whenever k-1 is a candidate
    for (std::size_t i = 0; i < t.tau.size(); ++i)
      if (t.tau[i] == k - 1)
        CHECK(t.w[i] == doctest::Approx(k * (k - 1) / 2.0));
  }

  const ExponentTable t2 = exponent_table(2);
  CHECK(t2.lambda == doctest::Approx((std::sqrt(17.0) - 3.0) / 2.0));
  CHECK(!t2.lambda_rational);

  const ExponentTable t3 = exponent_table(3);
  CHECK(t3.lambda_rational);
  CHECK(t3.lambda_num == 1);
  CHECK(t3.lambda_den == 3);

  const ExponentTable t5 = exponent_table(5);
  CHECK(t5.lambda_rational);
  CHECK(t5.lambda_num == 1);
  CHECK(t5.lambda_den == 4);
}
