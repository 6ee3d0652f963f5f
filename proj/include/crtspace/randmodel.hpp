#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "crtspace/spacings.hpp"

namespace crtspace {

struct MCEstimate {
  double mean = 0.0;
  double variance = 0.0;   // sample variance (n-1 denominator)
  double stderr_value = 0.0;  // sqrt(variance / trials)
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// Summary statistics over a vector of per-trial values, in trial order.
MCEstimate summarize_trials(const std::vector<double>& values, std::uint64_t seed);

struct MomentPair {
  MCEstimate r;       // estimate of R_k over the box
  MCEstimate sq_dev;  // estimate of (R_k - vol)^2
  std::vector<double> per_trial;
};

// Each trial draws a bernoulli(sigma) subset of Z/qZ from a seed derived per
// trial index and evaluates R_k over the box; sets with fewer than k elements
// contribute R_k = 0.
MomentPair mc_correlation_moments(std::uint64_t q, double sigma,
                                  const CorrelationBox& box, int k,
                                  std::uint64_t trials, std::uint64_t seed,
                                  int threads = 1);

struct BoxLadderEntry {
  double b = 0.0;
  double ratio = 0.0;          // R_2 / vol for the structured pair
  double control_ratio = 0.0;  // same with a bernoulli control component
};

// Omega_{q1} = bernoulli(sigma1) mod q1 composed with the interval
// {1..sigma1} mod q2 = 2*sigma1; the control pairs the same Omega_{q1} with
// a bernoulli(2) component at q2 (matching the interval's density 1/2).
struct CE1Report {
  std::uint64_t q1 = 0, q2 = 0, sigma1 = 0, seed = 0;
  std::vector<BoxLadderEntry> ladder;
  double max_dev = 0.0;          // max |ratio - 1| over the ladder
  double control_max_dev = 0.0;
};

CE1Report counterexample1(std::uint64_t sigma1, std::uint64_t q1,
                          std::uint64_t seed, int threads = 1);

// One common draw S subset of [1, q1] with inclusion probability q1^{-1/2},
// viewed mod q1 and mod q2 = q1 + 1; R_2 over (0, t) via the multiplicative
// path. Predicted limit 2t - t^2/2.
MCEstimate counterexample2(std::uint64_t q1, double t, std::uint64_t trials,
                           std::uint64_t seed, int threads = 1);

struct CE3Report {
  std::uint64_t q1 = 0, q2 = 0, m1 = 1, m2 = 1;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  double r_value = 0.0;
  double vol = 0.0;
  double ratio = 0.0;      // R_2 / vol
  double predicted = 0.0;  // gcd(m1, m2)
};

// Components drawn from the multiples of m_i in [1, q_i], each kept with
// probability m_i / sigma.
CE3Report counterexample3(std::uint64_t q1, std::uint64_t q2, std::uint64_t m1,
                          std::uint64_t m2, double sigma,
                          const CorrelationBox& box, std::uint64_t seed,
                          int threads = 1);

// Mean of epsilon_k^2 over the theta-scaled unit-box lattice, averaged over
// bernoulli(sigma) trials.
MCEstimate strongly_poisson_probe(std::uint64_t q, double sigma, double theta,
                                  int k, std::uint64_t trials,
                                  std::uint64_t seed, int threads = 1);

using BigRatR = boost::rational<boost::multiprecision::cpp_int>;

// P(k fixed residues all lie in a uniform r-subset of Z/qZ):
// first the closed form C(q-k, r-k) / C(q, r), then the same probability by
// exhaustive enumeration of all r-subsets. Exact rationals; q <= 20.
std::pair<BigRatR, BigRatR> conditional_containment(int q, int r, int k);

}  // namespace crtspace
