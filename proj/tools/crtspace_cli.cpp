#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crtspace/arith.hpp"
#include "crtspace/gammacomb.hpp"
#include "crtspace/polyval.hpp"
#include "crtspace/randmodel.hpp"
#include "crtspace/report.hpp"
#include "crtspace/residue_set.hpp"
#include "crtspace/spacings.hpp"
#include "crtspace/verify.hpp"

namespace {

using namespace crtspace;

struct Global {
  std::string format = "json";
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;
};

std::vector<std::int64_t> parse_i64_list(const std::string& csv) {
  std::vector<std::int64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

void emit(const Global& g, const ReportEnvelope& env) {
  const std::string text = env.to_json().dump(2);
  if (!g.out.empty()) {
    std::ofstream f(g.out);
    f << text << "\n";
  } else {
    std::cout << text << "\n";
  }
}

ResidueSet load_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open set file: " + path);
  return ResidueSet::read(in);
}

FamilySpec build_family(const std::string& family, std::uint64_t d,
                        const std::string& coeffs, std::int64_t a,
                        std::int64_t b, std::uint64_t n, std::uint64_t m,
                        double density, double sigma, std::uint64_t seed,
                        const std::string& members) {
  if (family == "units") return FamilySpec::units();
  if (family == "squares") return FamilySpec::squares();
  if (family == "dth-powers") return FamilySpec::dth_powers(d);
  if (family == "poly-image") return FamilySpec::poly_image(parse_i64_list(coeffs));
  if (family == "curve") return FamilySpec::curve(a, b);
  if (family == "interval") return FamilySpec::interval(n);
  if (family == "multiples") return FamilySpec::multiples(m, density, seed);
  if (family == "bernoulli") return FamilySpec::bernoulli(sigma, seed);
  if (family == "explicit") return FamilySpec::explicit_list(parse_u64_list(members));
  throw std::invalid_argument("unknown family: " + family);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "crtspace: spacing statistics of CRT-composed residue sets.\n"
      "Polynomials are entered constant term first: x^4 - 2x^2 is "
      "--coeffs 0,0,-2,0,1."};
  app.require_subcommand(1);
  app.fallthrough();  // allow --format/--seed/--threads after the subcommand

  Global g;
  app.add_option("--format", g.format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", g.seed, "Master RNG seed");
  app.add_option("--threads", g.threads, "Worker thread cap");
  app.add_option("--out", g.out, "Write the report to this path");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a residue set");
  std::string gen_family = "units", gen_coeffs, gen_members, gen_out;
  std::uint64_t gen_q = 0, gen_d = 2, gen_n = 1, gen_m = 2;
  std::int64_t gen_a = 0, gen_b = 1;
  double gen_density = 0.1, gen_sigma = 2.0;
  gen->add_option("--family", gen_family,
                  "units|squares|dth-powers|poly-image|curve|interval|"
                  "multiples|bernoulli|explicit");
  gen->add_option("--q", gen_q, "Modulus (squarefree for per-prime families)")
      ->required();
  gen->add_option("--d", gen_d, "Power for dth-powers");
  gen->add_option("--coeffs", gen_coeffs, "Polynomial coefficients, constant first");
  gen->add_option("--a", gen_a, "Curve coefficient a");
  gen->add_option("--b", gen_b, "Curve coefficient b");
  gen->add_option("--n", gen_n, "Interval length");
  gen->add_option("--m", gen_m, "Multiples step");
  gen->add_option("--density", gen_density, "Multiples selection probability");
  gen->add_option("--sigma", gen_sigma, "Bernoulli parameter (probability 1/sigma)");
  gen->add_option("--members", gen_members, "Explicit member list");
  gen->add_option("--set-out", gen_out, "CRSP output path");

  // gaps
  auto* gaps_cmd = app.add_subcommand("gaps", "Gap statistics of a stored set");
  std::string gaps_set;
  int gaps_davenport = 0;
  gaps_cmd->add_option("--set", gaps_set, "CRSP set file")->required();
  gaps_cmd->add_option("--davenport", gaps_davenport,
                       "Also emit the gap-value histogram up to this d");

  // corr
  auto* corr = app.add_subcommand("corr", "k-level correlation over a box");
  std::vector<std::string> corr_sets;
  std::string corr_box;
  double corr_theta = 1.0;
  corr->add_option("--set", corr_sets,
                   "CRSP set file; repeat for CRT components")
      ->required();
  corr->add_option("--box", corr_box, "Box bounds b_1,...,b_{k-1}")->required();
  corr->add_option("--theta", corr_theta, "Box scaling parameter");

  // verify
  auto* verify = app.add_subcommand("verify", "Run verification suites");
  std::string verify_suite = "all";
  verify->add_option("--suite", verify_suite, "Suite name or 'all'");

  // gamma
  auto* gamma = app.add_subcommand("gamma", "Gamma-structure combinatorics");
  std::string gamma_tuple, gamma_hlist = "10,20,30";
  std::uint64_t gamma_c = 0;
  int gamma_exponents = 0, gamma_k = 2;
  bool gamma_bounds = false;
  gamma->add_option("--tuple", gamma_tuple, "Offsets h_1,h_2,... (h_0 = 0)");
  gamma->add_option("--c", gamma_c, "Squarefree modulus");
  gamma->add_option("--exponents", gamma_exponents,
                    "Emit the exponent table for this k");
  gamma->add_flag("--bounds-table", gamma_bounds,
                  "Emit the bound-tightness table (CSV) for --c/--k");
  gamma->add_option("--k", gamma_k, "Tuple length k");
  gamma->add_option("--h-list", gamma_hlist, "H values for the bounds table");

  // poly
  auto* poly = app.add_subcommand("poly", "Polynomial value-set analysis");
  std::string poly_coeffs;
  std::uint64_t poly_p = 0, poly_anomaly = 0, poly_sp = 0;
  int poly_cn = 0;
  bool poly_critical = false;
  poly->add_option("--coeffs", poly_coeffs, "Coefficients, constant first");
  poly->add_option("--p", poly_p, "Prime for image density");
  poly->add_flag("--critical", poly_critical, "Distinct critical values");
  poly->add_option("--cn", poly_cn, "Emit c_n for this n");
  poly->add_option("--anomaly", poly_anomaly, "x^4-2x^2 anomaly check at p");
  poly->add_option("--sp", poly_sp, "|S_p| dual count at p");

  // mc
  auto* mc = app.add_subcommand("mc", "Monte Carlo correlation moments");
  std::uint64_t mc_q = 100000, mc_trials = 200;
  double mc_sigma = 100.0, mc_theta = 1.0;
  int mc_k = 2;
  std::string mc_box = "1";
  mc->add_option("--q", mc_q, "Modulus");
  mc->add_option("--sigma", mc_sigma, "Bernoulli parameter");
  mc->add_option("--k", mc_k, "Correlation order");
  mc->add_option("--box", mc_box, "Box bounds");
  mc->add_option("--theta", mc_theta, "Box scaling");
  mc->add_option("--trials", mc_trials, "Trial count");

  // counterexample
  auto* ce = app.add_subcommand("counterexample", "Run one of the counterexample constructions");
  int ce_variant = 1;
  std::uint64_t ce_q1 = 1000003, ce_q2 = 1000033, ce_sigma1 = 1000, ce_m1 = 2,
                ce_m2 = 2, ce_trials = 20;
  double ce_t = 0.25, ce_sigma = 30.0, ce_b = 1.0;
  ce->add_option("--variant", ce_variant, "1, 2, or 3")->required();
  ce->add_option("--q1", ce_q1, "First modulus");
  ce->add_option("--q2", ce_q2, "Second modulus (CE3)");
  ce->add_option("--sigma1", ce_sigma1, "CE1 interval length");
  ce->add_option("--t", ce_t, "CE2 interval endpoint, in (0,1/3)");
  ce->add_option("--trials", ce_trials, "CE2 trial count");
  ce->add_option("--m1", ce_m1, "CE3 first multiple");
  ce->add_option("--m2", ce_m2, "CE3 second multiple");
  ce->add_option("--sigma", ce_sigma, "CE3 sparsity parameter");
  ce->add_option("--b", ce_b, "CE3 box bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  };

  try {
    if (gen->parsed()) {
      const FamilySpec spec =
          build_family(gen_family, gen_d, gen_coeffs, gen_a, gen_b, gen_n,
                       gen_m, gen_density, gen_sigma, g.seed, gen_members);
      const ResidueSet set = gen_set(spec, gen_q);
      if (!gen_out.empty()) {
        std::ofstream f(gen_out, std::ios::binary);
        set.write(f);
      }
      ReportEnvelope env;
      env.command = "gen";
      env.inputs = {{"family", spec.describe()}, {"q", gen_q}};
      env.seed = g.seed;
      env.results = {{"count", set.count()},
                     {"r", set.density_r()},
                     {"s", set.spacing_s()},
                     {"dense", set.dense()}};
      env.elapsed_ms = elapsed();
      emit(g, env);
      return 0;
    }

    if (gaps_cmd->parsed()) {
      const ResidueSet set = load_set(gaps_set);
      const GapProfile profile = gaps(set);
      if (g.format == "csv") {
        std::ostringstream csv;
        csv << "t,empirical_tail,exp_tail\n";
        std::vector<double> d = profile.normalized();
        std::sort(d.begin(), d.end());
        const std::size_t m = d.size();
        for (std::size_t i = 0; i < m; ++i)
          csv << d[i] << "," << 1.0 - static_cast<double>(i + 1) / m << ","
              << std::exp(-d[i]) << "\n";
        if (!g.out.empty())
          std::ofstream(g.out) << csv.str();
        else
          std::cout << csv.str();
        return 0;
      }
      ReportEnvelope env;
      env.command = "gaps";
      env.inputs = {{"set", gaps_set}};
      env.results = {{"q", profile.q},
                     {"count", profile.m()},
                     {"s", profile.s()},
                     {"ks_exp_distance", ks_exp_distance(profile)}};
      if (gaps_davenport > 0)
        env.results["gap_value_histogram"] =
            gap_value_histogram(set, gaps_davenport);
      env.elapsed_ms = elapsed();
      emit(g, env);
      return 0;
    }

    if (corr->parsed()) {
      std::vector<ResidueSet> sets;
      for (const auto& path : corr_sets) sets.push_back(load_set(path));
      CorrelationBox box{parse_double_list(corr_box), corr_theta};
      const CorrelationReport rep =
          sets.size() == 1
              ? correlation(sets[0], box, g.threads)
              : correlation(std::span<const ResidueSet>(sets), box, g.threads);
      ReportEnvelope env;
      env.command = "corr";
      env.inputs = {{"sets", corr_sets},
                    {"box", box.bounds},
                    {"theta", box.theta},
                    {"k", box.k()}};
      env.results = {{"r_value", rep.r_value},
                     {"vol", rep.vol},
                     {"ratio", rep.ratio},
                     {"lattice_points", rep.lattice_points},
                     {"method", rep.method}};
      env.elapsed_ms = elapsed();
      emit(g, env);
      return 0;
    }

    if (verify->parsed()) {
      std::vector<std::string> names;
      if (verify_suite == "all")
        names = suite_names();
      else
        names.push_back(verify_suite);
      bool all_passed = true;
      Json suites = Json::array();
      for (const auto& name : names) {
        const SuiteResult res = run_suite(name, g.threads);
        all_passed = all_passed && res.passed;
        suites.push_back(res.to_json());
        std::cerr << (res.passed ? "PASS" : "FAIL") << "  " << name << "\n";
      }
      ReportEnvelope env;
      env.command = "verify";
      env.inputs = {{"suite", verify_suite}};
      env.results = {{"passed", all_passed}, {"suites", suites}};
      env.elapsed_ms = elapsed();
      emit(g, env);
      return all_passed ? 0 : 1;
    }

    if (gamma->parsed()) {
      ReportEnvelope env;
      env.command = "gamma";
      if (gamma_exponents >= 2) {
        const ExponentTable t = exponent_table(gamma_exponents);
        env.inputs = {{"k", gamma_exponents}};
        env.results = {{"tau1", t.tau1},
                       {"tau", t.tau},
                       {"w", t.w},
                       {"v", t.v},
                       {"lambda", t.lambda},
                       {"lambda_rational", t.lambda_rational}};
        if (t.lambda_rational) {
          env.results["lambda_num"] = t.lambda_num;
          env.results["lambda_den"] = t.lambda_den;
        }
      } else if (gamma_bounds) {
        if (gamma_c == 0) throw CLI::ValidationError("--c is required");
        std::ostringstream csv;
        csv << "gamma,H,M_exact,product_bound_min_over_sigma,coarse_bound\n";
        std::vector<int> sigma(gamma_k);
        for (const auto& st : enumerate_structures(gamma_c, gamma_k)) {
          const std::uint64_t gv = derive(st).gamma_product;
          for (std::uint64_t big_h : parse_u64_list(gamma_hlist)) {
            const std::uint64_t m = m_gamma_structure(st, big_h, gamma_c);
            std::iota(sigma.begin(), sigma.end(), 0);
            double best = std::numeric_limits<double>::infinity();
            do {
              best = std::min(best, product_bound(st, big_h, sigma));
            } while (std::next_permutation(sigma.begin() + 1, sigma.end()));
            csv << gv << "," << big_h << "," << m << "," << best << ","
                << coarse_bound(st, big_h) << "\n";
          }
        }
        if (!g.out.empty())
          std::ofstream(g.out) << csv.str();
        else
          std::cout << csv.str();
        return 0;
      } else {
        if (gamma_tuple.empty() || gamma_c == 0)
          throw CLI::ValidationError("gamma needs --tuple and --c (or --exponents)");
        const auto h = parse_u64_list(gamma_tuple);
        const GammaStructure st = gamma_of_tuple(h, gamma_c);
        const GammaDerived d = derive(st);
        env.inputs = {{"tuple", h}, {"c", gamma_c}};
        Json entries = Json::array();
        for (int i = 0; i < st.k; ++i)
          for (int j = i + 1; j < st.k; ++j)
            entries.push_back({{"i", i}, {"j", j}, {"gamma", st.at(i, j)}});
        env.results = {{"entries", entries},
                       {"gamma_j", d.gamma_j},
                       {"gamma_product", d.gamma_product},
                       {"conductor", d.conductor}};
      }
      env.elapsed_ms = elapsed();
      emit(g, env);
      return 0;
    }

    if (poly->parsed()) {
      ReportEnvelope env;
      env.command = "poly";
      if (poly_cn > 0) {
        const BigRat c = c_n(poly_cn);
        env.inputs = {{"n", poly_cn}};
        env.results = {{"c_n_num", c.numerator().str()},
                       {"c_n_den", c.denominator().str()},
                       {"c_n", static_cast<double>(c.numerator()) /
                                   static_cast<double>(c.denominator())}};
      } else if (poly_anomaly > 0) {
        const AnomalyReport rep = anomaly_check(poly_anomaly);
        env.inputs = {{"p", poly_anomaly}};
        env.results = {{"n2_direct", rep.n2_direct},
                       {"n2_legendre", rep.n2_legendre},
                       {"measured", rep.measured},
                       {"predicted", rep.predicted}};
      } else if (poly_sp > 0) {
        const SpCount c = s_p_legendre_count(poly_sp);
        env.inputs = {{"p", poly_sp}};
        env.results = {{"legendre_path", c.legendre_path}, {"direct", c.direct}};
      } else {
        if (poly_coeffs.empty())
          throw CLI::ValidationError("poly needs --coeffs");
        const IntPolynomial f =
            IntPolynomial::from_int64(parse_i64_list(poly_coeffs));
        env.inputs = {{"coeffs", poly_coeffs}};
        if (poly_critical) {
          const CriticalValueReport rep = critical_values_distinct(f);
          env.results = {{"distinct_count", rep.distinct_count},
                         {"generic", rep.generic}};
        } else {
          if (poly_p == 0) throw CLI::ValidationError("poly needs --p or --critical");
          const ValueSetDensity d = value_set_density(f, poly_p);
          env.inputs["p"] = poly_p;
          env.results = {{"size", d.size}, {"density", d.density}};
        }
      }
      env.elapsed_ms = elapsed();
      emit(g, env);
      return 0;
    }

    if (mc->parsed()) {
      const CorrelationBox box{parse_double_list(mc_box), mc_theta};
      const MomentPair mp = mc_correlation_moments(mc_q, mc_sigma, box, mc_k,
                                                   mc_trials, g.seed, g.threads);
      ReportEnvelope env;
      env.command = "mc";
      env.inputs = {{"q", mc_q}, {"sigma", mc_sigma}, {"k", mc_k},
                    {"box", box.bounds}, {"theta", box.theta},
                    {"trials", mc_trials}};
      env.seed = g.seed;
      env.results = {{"mean", mp.r.mean},
                     {"variance", mp.r.variance},
                     {"stderr", mp.r.stderr_value},
                     {"sq_dev_mean", mp.sq_dev.mean},
                     {"vol", box.vol()}};
      env.elapsed_ms = elapsed();
      emit(g, env);
      return 0;
    }

    if (ce->parsed()) {
      ReportEnvelope env;
      env.command = "counterexample";
      env.seed = g.seed;
      if (ce_variant == 1) {
        const CE1Report rep = counterexample1(ce_sigma1, ce_q1, g.seed, g.threads);
        env.inputs = {{"variant", 1}, {"q1", rep.q1}, {"q2", rep.q2},
                      {"sigma1", rep.sigma1}};
        Json ladder = Json::array();
        for (const auto& e : rep.ladder)
          ladder.push_back({{"b", e.b},
                            {"ratio", e.ratio},
                            {"control_ratio", e.control_ratio}});
        env.results = {{"ladder", ladder},
                       {"max_dev", rep.max_dev},
                       {"control_max_dev", rep.control_max_dev}};
      } else if (ce_variant == 2) {
        const MCEstimate est =
            counterexample2(ce_q1, ce_t, ce_trials, g.seed, g.threads);
        env.inputs = {{"variant", 2}, {"q1", ce_q1}, {"q2", ce_q1 + 1},
                      {"t", ce_t}, {"trials", ce_trials}};
        env.results = {{"mean", est.mean},
                       {"variance", est.variance},
                       {"stderr", est.stderr_value},
                       {"predicted", 2 * ce_t - ce_t * ce_t / 2},
                       {"poisson_value", ce_t}};
      } else if (ce_variant == 3) {
        const CorrelationBox box{{ce_b}, 1.0};
        const CE3Report rep = counterexample3(ce_q1, ce_q2, ce_m1, ce_m2,
                                              ce_sigma, box, g.seed, g.threads);
        env.inputs = {{"variant", 3}, {"q1", rep.q1}, {"q2", rep.q2},
                      {"m1", rep.m1}, {"m2", rep.m2}, {"sigma", rep.sigma},
                      {"b", ce_b}};
        env.results = {{"r_value", rep.r_value},
                       {"vol", rep.vol},
                       {"ratio", rep.ratio},
                       {"predicted", rep.predicted}};
      } else {
        throw CLI::ValidationError("--variant must be 1, 2, or 3");
      }
      env.elapsed_ms = elapsed();
      emit(g, env);
      return 0;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    std::cerr << "error: " << msg << "\n";
    return msg.find("budget") != std::string::npos ||
                   msg.find("cap") != std::string::npos
               ? 3
               : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
