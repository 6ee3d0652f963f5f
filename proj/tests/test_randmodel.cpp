#include <array>
#include <cmath>
#include <cstdint>

#include "crtspace/randmodel.hpp"
#include "crtspace/rng.hpp"
#include "doctest.h"

using namespace crtspace;

TEST_CASE("summarize_trials") {
  const std::vector<double> vals{1.0, 2.0, 3.0, 4.0};
  const MCEstimate est = summarize_trials(vals, 9);
  CHECK(est.mean == doctest::Approx(2.5));
  CHECK(est.variance == doctest::Approx(5.0 / 3.0));
  CHECK(est.stderr_value == doctest::Approx(std::sqrt(5.0 / 12.0)));
  CHECK(est.trials == 4);
  CHECK_THROWS(summarize_trials({1.0}, 0));
}

TEST_CASE("conditional containment identity is exact") {
  for (auto [q, r, k] :
       {std::array<int, 3>{6, 3, 2}, {10, 4, 2}, {12, 5, 3}, {14, 3, 3}}) {
    const auto [closed, enumerated] = conditional_containment(q, r, k);
    CHECK(closed == enumerated);
  }
  CHECK_THROWS(conditional_containment(30, 5, 2));  // enumeration too large
}

TEST_CASE("mc moments are deterministic and thread invariant") {
  const CorrelationBox box{{1.0}, 1.0};
  const MomentPair a = mc_correlation_moments(3000, 8.0, box, 2, 12, 42, 1);
  const MomentPair b = mc_correlation_moments(3000, 8.0, box, 2, 12, 42, 4);
  CHECK(a.per_trial == b.per_trial);
  CHECK(a.r.mean == b.r.mean);
  CHECK(a.sq_dev.mean == b.sq_dev.mean);
  const MomentPair c = mc_correlation_moments(3000, 8.0, box, 2, 12, 43, 1);
  CHECK(a.per_trial != c.per_trial);
  CHECK_THROWS(mc_correlation_moments(3000, 0.5, box, 2, 12, 1, 1));
}

TEST_CASE("counterexample1 structure") {
  const CE1Report rep = counterexample1(101, 2001, 7);
  CHECK(rep.q2 == 202);
  CHECK(rep.ladder.size() == 4);
  for (const auto& e : rep.ladder) {
    CHECK(e.ratio >= 0.0);
    CHECK(e.control_ratio >= 0.0);
  }
  CHECK(rep.max_dev >= 0.0);
  CHECK_THROWS(counterexample1(100, 2000, 7));  // gcd(2000, 200) != 1
}

TEST_CASE("counterexample2 validates t and reproduces deterministically") {
  CHECK_THROWS(counterexample2(997, 0.5, 4, 1));
  const MCEstimate a = counterexample2(20011, 0.25, 6, 11, 1);
  const MCEstimate b = counterexample2(20011, 0.25, 6, 11, 3);
  CHECK(a.mean == b.mean);
  CHECK(a.variance == b.variance);
}

TEST_CASE("ce2 multiplicative path equals the materialized direct path") {
  // same construction at a materializable scale
  const std::uint64_t q1 = 997, q2 = 998;
  const double prob = 1.0 / std::sqrt(static_cast<double>(q1));
  const std::uint64_t trial_seed = derive_seed(321, 0);
  std::vector<std::uint64_t> s1, s2;
  bool has_q1 = false;
  for (std::uint64_t x = 1; x <= q1; ++x) {
    if (!bernoulli_member(trial_seed, x, prob)) continue;
    if (x == q1)
      has_q1 = true;
    else
      s1.push_back(x);
    s2.push_back(x);
  }
  if (has_q1) s1.insert(s1.begin(), 0);
  REQUIRE(s1.size() >= 2);
  std::vector<ResidueSet> comps;
  comps.push_back(ResidueSet::from_sorted(q1, s1));
  comps.push_back(ResidueSet::from_sorted(q2, s2));
  const ResidueSet prod = crt_compose(comps);
  const CorrelationBox box{{0.25}, 1.0};
  const CorrelationReport multiplicative =
      correlation(std::span<const ResidueSet>(comps), box, 1);
  const CorrelationReport direct = correlation(prod, box, 1);
  CHECK(multiplicative.lattice_points == direct.lattice_points);
  CHECK(multiplicative.r_value == doctest::Approx(direct.r_value).epsilon(1e-12));
}

TEST_CASE("counterexample3 report consistency") {
  const CorrelationBox box{{1.0}, 1.0};
  const CE3Report rep = counterexample3(4001, 4003, 2, 3, 10.0, box, 5);
  CHECK(rep.predicted == 1.0);
  CHECK(rep.ratio == doctest::Approx(rep.r_value / rep.vol));
  CHECK_THROWS(counterexample3(4001, 4003, 11, 2, 10.0, box, 5));  // m >= sigma
  CHECK_THROWS(counterexample3(4001, 4001 * 2, 2, 2, 10.0, box, 5));
}

TEST_CASE("strongly poisson probe") {
  // full set: epsilon identically zero
  const MCEstimate full = strongly_poisson_probe(512, 1.0, 1.0, 2, 3, 1, 1);
  CHECK(full.mean == 0.0);
  CHECK(full.variance == 0.0);
  // sparse random set: statistic strictly positive
  const MCEstimate sparse = strongly_poisson_probe(5000, 50.0, 1.0, 2, 4, 99, 2);
  CHECK(sparse.mean > 0.0);
}
