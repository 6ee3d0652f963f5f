#include "crtspace/randmodel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "crtspace/parallel.hpp"
#include "crtspace/rng.hpp"

namespace crtspace {

namespace {

// Run one double-valued experiment per trial index, in parallel, returning
// per-trial values in index order (identical for any thread count).
template <typename TrialFn>
std::vector<double> run_trials(std::uint64_t trials, int threads, TrialFn&& fn) {
  auto partials = parallel_chunks<std::vector<double>>(
      0, trials, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<double> vals;
        vals.reserve(hi - lo);
        for (std::uint64_t i = lo; i < hi; ++i) vals.push_back(fn(i));
        return vals;
      });
  std::vector<double> out;
  out.reserve(trials);
  for (auto& part : partials)
    out.insert(out.end(), part.begin(), part.end());
  return out;
}

ResidueSet full_set(std::uint64_t q) {
  return gen_set(FamilySpec::interval(q), q);
}

}  // namespace

MCEstimate summarize_trials(const std::vector<double>& values,
                            std::uint64_t seed) {
  if (values.size() < 2)
    throw std::invalid_argument("summarize_trials: need at least 2 trials");
  MCEstimate est;
  est.trials = values.size();
  est.seed = seed;
  KahanSum sum;
  for (double v : values) sum.add(v);
  est.mean = sum.value() / static_cast<double>(values.size());
  KahanSum sq;
  for (double v : values) sq.add((v - est.mean) * (v - est.mean));
  est.variance = sq.value() / static_cast<double>(values.size() - 1);
  est.stderr_value = std::sqrt(est.variance / static_cast<double>(values.size()));
  return est;
}

MomentPair mc_correlation_moments(std::uint64_t q, double sigma,
                                  const CorrelationBox& box, int k,
                                  std::uint64_t trials, std::uint64_t seed,
                                  int threads) {
  if (!(sigma > 1.0) || q < 4)
    throw std::invalid_argument("mc_correlation_moments: need sigma > 1, q >= 4");
  if (trials < 2)
    throw std::invalid_argument("mc_correlation_moments: trials >= 2");
  if (box.k() != k)
    throw std::invalid_argument("mc_correlation_moments: box dimension mismatch");

  std::vector<double> values = run_trials(trials, threads, [&](std::uint64_t i) {
    const ResidueSet omega =
        gen_set(FamilySpec::bernoulli(sigma, derive_seed(seed, i)), q);
    if (omega.count() < static_cast<std::uint64_t>(k)) return 0.0;
    return correlation(omega, box, 1).r_value;
  });

  MomentPair out;
  out.per_trial = values;
  out.r = summarize_trials(values, seed);
  const double vol = box.vol();
  std::vector<double> devs(values.size());
  std::transform(values.begin(), values.end(), devs.begin(),
                 [vol](double v) { return (v - vol) * (v - vol); });
  out.sq_dev = summarize_trials(devs, seed);
  return out;
}

CE1Report counterexample1(std::uint64_t sigma1, std::uint64_t q1,
                          std::uint64_t seed, int threads) {
  if (sigma1 < 2) throw std::invalid_argument("counterexample1: sigma1 >= 2");
  const std::uint64_t q2 = 2 * sigma1;
  if (std::gcd(q1, q2) != 1)
    throw std::invalid_argument("counterexample1: q1 and 2*sigma1 must be coprime");

  CE1Report rep;
  rep.q1 = q1;
  rep.q2 = q2;
  rep.sigma1 = sigma1;
  rep.seed = seed;

  const ResidueSet omega1 = gen_set(
      FamilySpec::bernoulli(static_cast<double>(sigma1), derive_seed(seed, 0)), q1);
  const ResidueSet interval2 = gen_set(FamilySpec::interval(sigma1), q2);
  const ResidueSet control2 =
      gen_set(FamilySpec::bernoulli(2.0, derive_seed(seed, 1)), q2);
  if (omega1.count() < 2 || control2.count() < 2)
    throw std::runtime_error("counterexample1: degenerate random draw");

  const std::vector<ResidueSet> test{omega1, interval2};
  const std::vector<ResidueSet> control{omega1, control2};
  for (double b : {0.25, 0.5, 1.0, 2.0}) {
    CorrelationBox box{{b}, 1.0};
    BoxLadderEntry e;
    e.b = b;
    e.ratio = correlation(std::span<const ResidueSet>(test), box, threads).ratio;
    e.control_ratio =
        correlation(std::span<const ResidueSet>(control), box, threads).ratio;
    rep.ladder.push_back(e);
    rep.max_dev = std::max(rep.max_dev, std::abs(e.ratio - 1.0));
    rep.control_max_dev =
        std::max(rep.control_max_dev, std::abs(e.control_ratio - 1.0));
  }
  return rep;
}

MCEstimate counterexample2(std::uint64_t q1, double t, std::uint64_t trials,
                           std::uint64_t seed, int threads) {
  if (!(t > 0.0) || t >= 1.0 / 3.0)
    throw std::invalid_argument("counterexample2: t must lie in (0, 1/3)");
  if (trials < 2) throw std::invalid_argument("counterexample2: trials >= 2");
  const std::uint64_t q2 = q1 + 1;
  const double prob = 1.0 / std::sqrt(static_cast<double>(q1));
  const CorrelationBox box{{t}, 1.0};

  std::vector<double> values = run_trials(trials, threads, [&](std::uint64_t i) {
    const std::uint64_t trial_seed = derive_seed(seed, i);
    // one common draw S in [1, q1], viewed modulo q1 and modulo q2
    std::vector<std::uint64_t> s1, s2;
    bool has_q1 = false;
    for (std::uint64_t x = 1; x <= q1; ++x) {
      if (!bernoulli_member(trial_seed, x, prob)) continue;
      if (x == q1)
        has_q1 = true;  // q1 mod q1 = 0, goes to the front of s1
      else
        s1.push_back(x);
      s2.push_back(x);
    }
    if (has_q1) s1.insert(s1.begin(), 0);
    if (s1.size() < 2 || s2.size() < 2) return 0.0;
    std::vector<ResidueSet> comps;
    comps.push_back(ResidueSet::from_sorted(q1, std::move(s1)));
    comps.push_back(ResidueSet::from_sorted(q2, std::move(s2)));
    return correlation(std::span<const ResidueSet>(comps), box, 1).r_value;
  });
  return summarize_trials(values, seed);
}

CE3Report counterexample3(std::uint64_t q1, std::uint64_t q2, std::uint64_t m1,
                          std::uint64_t m2, double sigma,
                          const CorrelationBox& box, std::uint64_t seed,
                          int threads) {
  if (std::gcd(q1, q2) != 1)
    throw std::invalid_argument("counterexample3: moduli must be coprime");
  if (static_cast<double>(m1) >= sigma || static_cast<double>(m2) >= sigma)
    throw std::invalid_argument("counterexample3: need m_i < sigma");
  CE3Report rep;
  rep.q1 = q1;
  rep.q2 = q2;
  rep.m1 = m1;
  rep.m2 = m2;
  rep.sigma = sigma;
  rep.seed = seed;
  rep.predicted = static_cast<double>(std::gcd(m1, m2));

  std::vector<ResidueSet> comps;
  comps.push_back(gen_set(
      FamilySpec::multiples(m1, static_cast<double>(m1) / sigma, derive_seed(seed, 0)),
      q1));
  comps.push_back(gen_set(
      FamilySpec::multiples(m2, static_cast<double>(m2) / sigma, derive_seed(seed, 1)),
      q2));
  if (comps[0].count() < 2 || comps[1].count() < 2)
    throw std::runtime_error("counterexample3: degenerate random draw");

  const CorrelationReport cr =
      correlation(std::span<const ResidueSet>(comps), box, threads);
  rep.r_value = cr.r_value;
  rep.vol = cr.vol;
  rep.ratio = cr.ratio;
  return rep;
}

MCEstimate strongly_poisson_probe(std::uint64_t q, double sigma, double theta,
                                  int k, std::uint64_t trials,
                                  std::uint64_t seed, int threads) {
  if (trials < 2)
    throw std::invalid_argument("strongly_poisson_probe: trials >= 2");
  CorrelationBox box;
  box.bounds.assign(k - 1, 1.0);
  box.theta = theta;

  std::vector<double> values = run_trials(trials, threads, [&](std::uint64_t i) {
    const ResidueSet omega =
        sigma > 1.0
            ? gen_set(FamilySpec::bernoulli(sigma, derive_seed(seed, i)), q)
            : full_set(q);
    if (omega.count() < static_cast<std::uint64_t>(k)) return 0.0;
    return strong_poisson_stat(omega, box, 1);
  });
  return summarize_trials(values, seed);
}

std::pair<BigRatR, BigRatR> conditional_containment(int q, int r, int k) {
  using boost::multiprecision::cpp_int;
  if (q < 1 || q > 20 || r < 0 || r > q || k < 1 || k > r)
    throw std::invalid_argument("conditional_containment: need 1 <= k <= r <= q <= 20");
  auto binom = [](int n, int m) {
    cpp_int b = 1;
    if (m < 0 || m > n) return cpp_int(0);
    for (int i = 0; i < m; ++i) b = b * (n - i) / (i + 1);
    return b;
  };
  const BigRatR closed(binom(q - k, r - k), binom(q, r));

  // enumerate all r-subsets of {0..q-1}; count those containing {0..k-1}
  const std::uint32_t full = 1u << q;
  const std::uint32_t pattern = (1u << k) - 1;
  cpp_int total = 0, containing = 0;
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    if (std::popcount(mask) != r) continue;
    ++total;
    if ((mask & pattern) == pattern) ++containing;
  }
  return {closed, BigRatR(containing, total)};
}

}  // namespace crtspace
