#include "crtspace/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "crtspace/arith.hpp"
#include "crtspace/gammacomb.hpp"
#include "crtspace/parallel.hpp"
#include "crtspace/polyval.hpp"
#include "crtspace/randmodel.hpp"
#include "crtspace/residue_set.hpp"
#include "crtspace/rng.hpp"
#include "crtspace/spacings.hpp"

namespace crtspace {

namespace {

void check(SuiteResult& sr, std::string name, bool ok, std::string detail) {
  sr.checks.push_back({std::move(name), ok, std::move(detail)});
  sr.passed = sr.passed && ok;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::vector<std::uint64_t> random_distinct(SplitMix64& rng, int count,
                                           std::uint64_t lo, std::uint64_t hi) {
  // distinct values in [lo, hi], sorted
  std::vector<std::uint64_t> v;
  while (static_cast<int>(v.size()) < count) {
    const std::uint64_t x = lo + rng.next_below(hi - lo + 1);
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  }
  std::sort(v.begin(), v.end());
  return v;
}

// --- suite bodies -------------------------------------------------------

SuiteResult suite_units_exact(int) {
  SuiteResult sr{"units-exact"};
  const std::uint64_t p = 10007;
  const ResidueSet units = gen_prime_set(FamilySpec::units(), p);
  for (int k : {2, 3, 4}) {
    SplitMix64 rng(1000 + k);
    bool all_ok = true;
    std::uint64_t bad = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const auto h = random_distinct(rng, k - 1, 1, p - 1);
      const std::uint64_t n = count_tuples(units, h);
      if (n != p - static_cast<std::uint64_t>(k)) {
        all_ok = false;
        bad = n;
      }
    }
    std::ostringstream os;
    os << "k=" << k << ": N_k(h) = p-k for 50 random tuples";
    if (!all_ok) os << " (got " << bad << ")";
    check(sr, "units-nk-k" + std::to_string(k), all_ok, os.str());
  }
  return sr;
}

SuiteResult suite_zero_mean(int) {
  SuiteResult sr{"zero-mean"};
  struct Fam {
    const char* name;
    FamilySpec spec;
  };
  const Fam fams[] = {{"squares", FamilySpec::squares()},
                      {"units", FamilySpec::units()}};
  for (std::uint64_t q : {105ULL, 1155ULL}) {
    const Factorization fq = factorize(q);
    for (const Fam& fam : fams) {
      std::vector<ResidueSet> comps;
      for (std::uint64_t p : fq.primes())
        comps.push_back(gen_prime_set(fam.spec, p));
      double worst = 0.0;
      for (std::uint64_t d : fq.divisors()) {
        if (d == 1) continue;
        KahanSum sum;
        for (std::uint64_t h = 0; h < d; ++h) {
          const std::uint64_t off[1] = {h};
          sum.add(e_k(comps, off, d));
        }
        worst = std::max(worst, std::abs(sum.value()) / static_cast<double>(d));
      }
      const bool ok = worst <= 1e-9;
      check(sr, "zero-mean-q" + std::to_string(q) + "-" + fam.name, ok,
            "max |sum e_2(h,d)|/d over divisors = " + fmt(worst));
    }
  }
  return sr;
}

SuiteResult suite_crt_multiplicative(int) {
  SuiteResult sr{"crt-multiplicative"};
  SplitMix64 rng(31337);
  int failures = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::uint64_t q1, q2;
    do {
      q1 = 4 + rng.next_below(997);
      q2 = 4 + rng.next_below(997);
    } while (std::gcd(q1, q2) != 1);
    std::vector<ResidueSet> comps;
    for (std::uint64_t q : {q1, q2}) {
      const int count = 2 + static_cast<int>(rng.next_below(
                                std::min<std::uint64_t>(q, 30) - 1));
      comps.push_back(ResidueSet::from_sorted(q, random_distinct(rng, count, 0, q - 1)));
    }
    const ResidueSet product = crt_compose(comps);
    const int k = 2 + static_cast<int>(rng.next_below(2));
    const auto h = random_distinct(rng, k - 1, 1, q1 * q2 - 1);
    const std::uint64_t direct = count_tuples(product, h);
    const std::uint64_t multiplicative =
        count_tuples_crt(std::span<const ResidueSet>(comps), h);
    if (direct != multiplicative) ++failures;
  }
  check(sr, "crt-count-identity", failures == 0,
        "200 random coprime pairs, direct vs multiplicative; mismatches = " +
            std::to_string(failures));
  return sr;
}

SuiteResult suite_davenport(int) {
  SuiteResult sr{"davenport"};
  const std::uint64_t p = 1000003;
  const ResidueSet squares = gen_prime_set(FamilySpec::squares(), p);
  const std::vector<double> hist = gap_value_histogram(squares, 5);
  for (int d = 1; d <= 5; ++d) {
    const double expect = std::pow(0.5, d);
    const double got = hist[d - 1];
    const bool ok = std::abs(got - expect) <= 0.01;
    check(sr, "davenport-d" + std::to_string(d), ok,
          "proportion(gap=" + std::to_string(d) + ") = " + fmt(got) +
              ", target 2^-d = " + fmt(expect));
  }
  return sr;
}

SuiteResult suite_squares_poisson(int threads) {
  SuiteResult sr{"squares-poisson"};
  const std::vector<std::uint64_t> primes{3, 5, 7, 11, 13, 17, 19, 23};
  std::vector<ResidueSet> comps;
  for (std::uint64_t p : primes)
    comps.push_back(gen_prime_set(FamilySpec::squares(), p));

  const ResidueSet omega = crt_compose(comps);
  const double ks = ks_exp_distance(gaps(omega));
  check(sr, "ks-exponential", ks <= 0.05,
        "KS distance to Exp(1) = " + fmt(ks) + ", tolerance 0.05");

  const CorrelationReport r2 =
      correlation(std::span<const ResidueSet>(comps), CorrelationBox{{1.0}, 1.0},
                  threads);
  check(sr, "pair-correlation-unit-box", std::abs(r2.ratio - 1.0) <= 0.05,
        "R_2((0,1])/vol = " + fmt(r2.ratio) + ", tolerance 0.05");

  const CorrelationReport r3 = correlation(
      std::span<const ResidueSet>(comps), CorrelationBox{{1.0, 1.0}, 1.0}, threads);
  check(sr, "triple-correlation-unit-box", std::abs(r3.ratio - 1.0) <= 0.10,
        "R_3(unit box)/vol = " + fmt(r3.ratio) + ", tolerance 0.10");
  return sr;
}

SuiteResult suite_anomaly(int) {
  SuiteResult sr{"anomaly"};
  auto collect = [](int residue, int want) {
    std::vector<std::uint64_t> ps;
    for (std::uint64_t p = 100001; ps.size() < static_cast<std::size_t>(want) &&
                                   p < 200000;
         p += 2)
      if (p % 4 == static_cast<std::uint64_t>(residue) && is_prime(p))
        ps.push_back(p);
    return ps;
  };
  for (int residue : {1, 3}) {
    bool all_ok = true;
    double worst = 0.0;
    for (std::uint64_t p : collect(residue, 10)) {
      const AnomalyReport rep = anomaly_check(p);
      const double tol = 10.0 / std::sqrt(static_cast<double>(p));
      const double dev = std::abs(rep.measured - rep.predicted);
      worst = std::max(worst, dev - tol);
      all_ok = all_ok && dev <= tol;
    }
    check(sr, "anomaly-density-mod4-" + std::to_string(residue), all_ok,
          "10 primes = " + std::to_string(residue) +
              " mod 4 in [1e5,2e5]; worst dev-tol = " + fmt(worst));
  }
  bool agree = true;
  std::uint64_t bad_p = 0;
  for (std::uint64_t p = 7; p <= 500; p += 2) {
    if (!is_prime(p)) continue;
    const AnomalyReport rep = anomaly_check(p);
    if (rep.n2_direct != rep.n2_legendre) {
      agree = false;
      bad_p = p;
    }
  }
  check(sr, "anomaly-dual-path", agree,
        agree ? "image sieve and Legendre path agree for all odd primes in [7,500]"
              : "mismatch at p = " + std::to_string(bad_p));
  return sr;
}

SuiteResult suite_generic_poly(int) {
  SuiteResult sr{"generic-poly"};
  const IntPolynomial f = IntPolynomial::from_int64(
      std::array<std::int64_t, 5>{0, 1, 0, 0, 1});  // x^4 + x
  const CriticalValueReport cv = critical_values_distinct(f);
  check(sr, "quartic-generic-certificate", cv.generic,
        "x^4+x distinct critical values = " + std::to_string(cv.distinct_count) +
            " (need 3)");

  std::vector<std::uint64_t> ps;
  for (std::uint64_t p = 100001; ps.size() < 5; p += 2)
    if (is_prime(p)) ps.push_back(p);

  bool density_ok = true, n2_ok = true;
  double worst_density = 0.0, worst_n2 = 0.0;
  for (std::uint64_t p : ps) {
    const auto image = poly_image_mod(f, p);
    const double r = static_cast<double>(image.size()) / static_cast<double>(p);
    const double sqrt_p = std::sqrt(static_cast<double>(p));
    worst_density = std::max(worst_density, std::abs(r - 5.0 / 8.0));
    density_ok = density_ok && std::abs(r - 5.0 / 8.0) <= 5.0 / sqrt_p;

    std::vector<bool> in_image(p, false);
    for (std::uint64_t v : image) in_image[v] = true;
    std::uint64_t n2 = 0;
    for (std::uint64_t t = 0; t < p; ++t)
      if (in_image[t] && in_image[(t + 1) % p]) ++n2;
    const double measured = static_cast<double>(n2) / static_cast<double>(p);
    worst_n2 = std::max(worst_n2, std::abs(measured - r * r));
    n2_ok = n2_ok && std::abs(measured - r * r) <= 10.0 / sqrt_p;
  }
  check(sr, "image-density-cn", density_ok,
        "| |Omega_p|/p - 5/8 | over 5 primes near 1e5; worst = " + fmt(worst_density));
  check(sr, "pair-count-squared-density", n2_ok,
        "|N_2(1,p)/p - r_p^2| over the same primes; worst = " + fmt(worst_n2));
  return sr;
}

SuiteResult suite_gamma_bounds(int) {
  SuiteResult sr{"gamma-bounds"};
  bool prop_ok = true, cor_ok = true, stirling_ok = true, partition_ok = true;
  std::string first_fail;
  for (int k : {2, 3}) {
    for (std::uint64_t c : {2ULL, 3ULL, 5ULL, 6ULL, 10ULL, 15ULL, 30ULL}) {
      const auto structures = enumerate_structures(c, k);

      // exact structure counts per gamma value
      std::vector<std::uint64_t> gammas;
      for (const auto& g : structures) gammas.push_back(derive(g).gamma_product);
      for (std::uint64_t gv : gammas) {
        const std::uint64_t enumerated = static_cast<std::uint64_t>(
            std::count(gammas.begin(), gammas.end(), gv));
        std::uint64_t stirling_product = 1;
        for (auto [p, e] : factorize(gv).factors)
          stirling_product *= stirling2(k, k - e);
        if (count_structures(gv, c, k) != enumerated ||
            enumerated > stirling_product) {
          stirling_ok = false;
          if (first_fail.empty())
            first_fail = "structure count mismatch at gamma=" + std::to_string(gv);
        }
      }

      std::vector<int> sigma(k);
      for (std::uint64_t big_h : {10ULL, 20ULL, 30ULL}) {
        std::uint64_t tuple_sum = 0;
        for (const auto& g : structures) {
          const std::uint64_t m = m_gamma_structure(g, big_h, c);
          tuple_sum += m;

          std::iota(sigma.begin(), sigma.end(), 0);
          do {
            const auto [num, den] = product_bound_exact(g, big_h, sigma);
            if (m * den > num) {
              prop_ok = false;
              if (first_fail.empty())
                first_fail = "prop bound violated (k=" + std::to_string(k) +
                             ", c=" + std::to_string(c) + ")";
            }
          } while (std::next_permutation(sigma.begin() + 1, sigma.end()));

          const auto [cnum, cden] = coarse_bound_exact(g, big_h);
          if (m * cden > cnum) {
            cor_ok = false;
            if (first_fail.empty())
              first_fail = "cor bound violated (k=" + std::to_string(k) +
                           ", c=" + std::to_string(c) + ")";
          }
        }
        // ordered distinct tuples in [0,H]^{k-1} avoiding h_0 = 0
        std::uint64_t expect = 1;
        for (int i = 1; i < k; ++i) expect *= big_h + 1 - i;
        if (tuple_sum != expect) {
          partition_ok = false;
          if (first_fail.empty())
            first_fail = "partition identity failed (k=" + std::to_string(k) +
                         ", c=" + std::to_string(c) +
                         ", H=" + std::to_string(big_h) + ")";
        }
      }
    }
  }
  check(sr, "prop-bound", prop_ok, "M_Gamma(H) <= product bound for all sigma");
  check(sr, "cor-bound", cor_ok, "M_Gamma(H) <= 2^{k-1}H^{k-1}/prod min(gamma_i,H)");
  check(sr, "structure-counts", stirling_ok,
        "count_structures exact and within the Stirling product");
  check(sr, "partition-identity", partition_ok,
        first_fail.empty() ? "sum over structures = #distinct tuples" : first_fail);
  return sr;
}

SuiteResult suite_exponents(int) {
  SuiteResult sr{"exponents"};
  const ExponentTable t2 = exponent_table(2);
  check(sr, "lambda-2", std::abs(t2.lambda - 0.56155) <= 1e-5 && !t2.lambda_rational,
        "lambda_2 = " + fmt(t2.lambda) + " vs (sqrt(17)-3)/2");

  const ExponentTable t3 = exponent_table(3);
  check(sr, "lambda-3",
        t3.lambda_rational && t3.lambda_num == 1 && t3.lambda_den == 3,
        "lambda_3 certified rational " + std::to_string(t3.lambda_num) + "/" +
            std::to_string(t3.lambda_den));

  bool ok = true;
  for (int k = 4; k <= 10; ++k) {
    const ExponentTable t = exponent_table(k);
    ok = ok && t.lambda_rational && t.lambda_num == 1 &&
         t.lambda_den == k - 1;
  }
  check(sr, "lambda-k-ge-4", ok, "lambda_k = 1/(k-1) exactly for 4 <= k <= 10");
  return sr;
}

SuiteResult suite_random_subset_mc(int threads) {
  SuiteResult sr{"random-subset-mc"};
  const MomentPair mp = mc_correlation_moments(
      100000, 100.0, CorrelationBox{{1.0}, 1.0}, 2, 200, 20260825, threads);
  check(sr, "mean-r2", std::abs(mp.r.mean - 1.0) <= 0.05,
        "mean R_2 = " + fmt(mp.r.mean) + ", tolerance 0.05 around 1");
  check(sr, "variance-r2", mp.r.variance <= 0.05,
        "sample variance = " + fmt(mp.r.variance) + ", tolerance 0.05");

  bool exact_ok = true;
  for (auto [q, r, k] : {std::array<int, 3>{8, 3, 2}, {10, 4, 2}, {12, 5, 3},
                         {14, 7, 2}}) {
    const auto [closed, enumerated] = conditional_containment(q, r, k);
    exact_ok = exact_ok && closed == enumerated;
  }
  check(sr, "containment-identity", exact_ok,
        "C(q-k,r-k)/C(q,r) matches exhaustive subset enumeration, q <= 14");
  return sr;
}

SuiteResult suite_ce2(int threads) {
  SuiteResult sr{"ce2"};
  const MCEstimate est = counterexample2(1000007, 0.25, 20, 424242, threads);
  const bool ok = est.mean >= 0.42 && est.mean <= 0.52;
  check(sr, "ce2-mean", ok,
        "mean R_2((0,0.25)) = " + fmt(est.mean) +
            ", window [0.42,0.52] around predicted 0.46875 (Poisson would be 0.25)");
  return sr;
}

SuiteResult suite_ce3(int threads) {
  SuiteResult sr{"ce3"};
  const CorrelationBox box{{1.0}, 1.0};
  auto mean_ratio = [&](std::uint64_t m1, std::uint64_t m2) {
    KahanSum sum;
    for (std::uint64_t seed : {11ULL, 12ULL, 13ULL, 14ULL, 15ULL})
      sum.add(counterexample3(1000003, 1000033, m1, m2, 30.0, box, seed, threads)
                  .ratio);
    return sum.value() / 5.0;
  };
  const double r22 = mean_ratio(2, 2);
  check(sr, "ce3-m22", r22 >= 1.7 && r22 <= 2.3,
        "mean R_2/vol for (m1,m2)=(2,2) = " + fmt(r22) + ", window [1.7,2.3]");
  const double r23 = mean_ratio(2, 3);
  check(sr, "ce3-m23", r23 >= 0.85 && r23 <= 1.15,
        "mean R_2/vol for (m1,m2)=(2,3) = " + fmt(r23) + ", window [0.85,1.15]");
  return sr;
}

SuiteResult suite_parity_cover(int) {
  SuiteResult sr{"parity-cover"};
  const std::vector<std::uint64_t> s7{0, 1, 2, 4};
  const std::vector<std::uint64_t> h7{0, 4, 6};
  const auto t7 = parity_cover_exists(s7, h7, 7);
  check(sr, "p7-counterexample", !t7.has_value(),
        "p=7, S={0,1,2,4}, H={0,4,6}: no odd-covering t exists");

  SplitMix64 rng(987654321);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int total = 2 + static_cast<int>(rng.next_below(3));  // |S|+|H| in [2,4]
    const int ns = 1 + static_cast<int>(rng.next_below(total - 1));
    const int nh = total - ns;
    const auto s = random_distinct(rng, ns, 0, 1008);
    const auto h = random_distinct(rng, nh, 0, 1008);
    if (!parity_cover_exists(s, h, 1009).has_value()) ++failures;
  }
  check(sr, "p1009-always-found", failures == 0,
        "1000 random (S,H), |S|+|H| <= 4, p=1009 > 4^4+1; failures = " +
            std::to_string(failures));
  return sr;
}

SuiteResult suite_format(int) {
  SuiteResult sr{"format"};
  SplitMix64 rng(5150);
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint64_t q = 10 + rng.next_below(4991);
    // alternate sparse and dense draws so both representations round-trip
    const std::uint64_t target =
        trial % 2 == 0 ? 2 + rng.next_below(std::min<std::uint64_t>(q / 2, 20))
                       : q / 2 + rng.next_below(q / 2 - 1) + 1;
    const auto members =
        random_distinct(rng, static_cast<int>(std::min(target, q)), 0, q - 1);
    const ResidueSet set = ResidueSet::from_sorted(q, members);
    std::ostringstream buf1;
    set.write(buf1);
    std::istringstream in(buf1.str());
    const ResidueSet back = ResidueSet::read(in);
    std::ostringstream buf2;
    back.write(buf2);
    if (buf1.str() != buf2.str() || back.modulus() != q ||
        back.to_list() != set.to_list())
      ++mismatches;
  }
  check(sr, "crsp-roundtrip", mismatches == 0,
        "100 random sets, both representations; mismatches = " +
            std::to_string(mismatches));

  auto mc_dump = [](int threads) {
    const MomentPair mp = mc_correlation_moments(
        20000, 10.0, CorrelationBox{{1.0}, 1.0}, 2, 16, 7, threads);
    ReportEnvelope env;
    env.command = "mc";
    env.inputs = {{"q", 20000}, {"sigma", 10.0}, {"k", 2}, {"trials", 16}};
    env.seed = 7;
    env.results = {{"mean", mp.r.mean},
                   {"variance", mp.r.variance},
                   {"sq_dev_mean", mp.sq_dev.mean},
                   {"per_trial", mp.per_trial}};
    return env.reproducible_dump();
  };
  check(sr, "json-thread-invariance", mc_dump(1) == mc_dump(8),
        "mc report identical for --threads 1 and 8");

  const ResidueSet squares = gen_prime_set(FamilySpec::squares(), 10007);
  const CorrelationBox box{{2.0}, 1.0};
  const double r1 = correlation(squares, box, 1).r_value;
  const double r8 = correlation(squares, box, 8).r_value;
  const double s1 = strong_poisson_stat(squares, box, 1);
  const double s8 = strong_poisson_stat(squares, box, 8);
  check(sr, "kernel-thread-invariance", r1 == r8 && s1 == s8,
        "correlation and epsilon^2 kernels bitwise stable across thread counts");
  return sr;
}

}  // namespace

Json SuiteResult::to_json() const {
  Json j;
  j["suite"] = suite;
  j["passed"] = passed;
  Json arr = Json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = arr;
  return j;
}

std::vector<std::string> suite_names() {
  return {"units-exact",     "zero-mean", "crt-multiplicative", "davenport",
          "squares-poisson", "anomaly",   "generic-poly",       "gamma-bounds",
          "exponents",       "random-subset-mc", "ce2",               "ce3",
          "parity-cover",    "format"};
}

SuiteResult run_suite(const std::string& name, int threads) {
  if (name == "units-exact") return suite_units_exact(threads);
  if (name == "zero-mean") return suite_zero_mean(threads);
  if (name == "crt-multiplicative") return suite_crt_multiplicative(threads);
  if (name == "davenport") return suite_davenport(threads);
  if (name == "squares-poisson") return suite_squares_poisson(threads);
  if (name == "anomaly") return suite_anomaly(threads);
  if (name == "generic-poly") return suite_generic_poly(threads);
  if (name == "gamma-bounds") return suite_gamma_bounds(threads);
  if (name == "exponents") return suite_exponents(threads);
  if (name == "random-subset-mc") return suite_random_subset_mc(threads);
  if (name == "ce2") return suite_ce2(threads);
  if (name == "ce3") return suite_ce3(threads);
  if (name == "parity-cover") return suite_parity_cover(threads);
  if (name == "format") return suite_format(threads);
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace crtspace
