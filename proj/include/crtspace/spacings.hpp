#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "crtspace/residue_set.hpp"

namespace crtspace {

// Offsets h_1 < h_2 < ... < h_{k-1}, all positive; h_0 = 0 is implicit.
struct OffsetTuple {
  std::vector<std::uint64_t> offsets;

  OffsetTuple() = default;
  explicit OffsetTuple(std::vector<std::uint64_t> h);
  int k() const { return static_cast<int>(offsets.size()) + 1; }
};

// Box B(b_1,...,b_{k-1}) = {x : 0 < x_i - x_{i-1} <= b_i}, scaled by theta.
struct CorrelationBox {
  std::vector<double> bounds;
  double theta = 1.0;

  int k() const { return static_cast<int>(bounds.size()) + 1; }
  double vol() const;  // theta^(k-1) * prod b_i
};

// Sorted elements with wraparound gaps; raw gaps sum to q exactly.
struct GapProfile {
  std::uint64_t q = 0;
  std::vector<std::uint64_t> elements;   // strictly increasing
  std::vector<std::uint64_t> raw_gaps;   // size m; last gap crosses q

  std::uint64_t m() const { return elements.size(); }
  double s() const { return static_cast<double>(q) / static_cast<double>(m()); }
  std::vector<double> normalized() const;  // Delta_j = raw_j / s, mean 1
};

struct CorrelationReport {
  int k = 2;
  CorrelationBox box;
  std::uint64_t lattice_points = 0;
  double r_value = 0.0;
  double vol = 0.0;
  double ratio = 0.0;
  std::string method;  // "direct" or "crt-multiplicative"
};

GapProfile gaps(const ResidueSet& set);  // requires count >= 2

// Proportion of j with Delta_{j+i} > t_i for all i, indices mod m.
double prob_tail(const GapProfile& profile, std::span<const double> thresholds);

// N_k(h, Omega): t mod q with t + h_i in Omega for all i (h_0 = 0, wraparound).
// Offsets may be arbitrary residues here; duplicates are allowed and simply
// repeat a membership condition.
std::uint64_t count_tuples(const ResidueSet& set, std::span<const std::uint64_t> offsets);
std::uint64_t count_tuples(const ResidueSet& set, const OffsetTuple& h);

// Multiplicative evaluation over coprime components; never materializes the
// product set.
std::uint64_t count_tuples_crt(std::span<const ResidueSet> components,
                               std::span<const std::uint64_t> offsets);
std::uint64_t count_tuples_crt(std::span<const ResidueSet> components,
                               const OffsetTuple& h);

// epsilon_k: N_k = r^{k-1} |Omega| (1 + epsilon).
double epsilon_k(const ResidueSet& set, std::span<const std::uint64_t> offsets);
double epsilon_k_crt(std::span<const ResidueSet> components,
                     std::span<const std::uint64_t> offsets);

// e_k(h,d) = prod over primes p | d of epsilon_k(h, Omega_p); e_k(h,1) = 1.
// components must be the per-prime sets of a squarefree q and d must divide q.
double e_k(std::span<const ResidueSet> components,
           std::span<const std::uint64_t> offsets, std::uint64_t d);

// N_2(d) for every d in [0,q). Cost min(|Omega|^2, q |Omega|); intended for
// small or sparse sets.
std::vector<std::uint64_t> pair_count_table(const ResidueSet& set);

CorrelationReport correlation(const ResidueSet& set, const CorrelationBox& box,
                              int threads = 1);
CorrelationReport correlation(std::span<const ResidueSet> components,
                              const CorrelationBox& box, int threads = 1);

// sup_t |empirical CDF of normalized gaps - (1 - e^{-t})|, evaluated at the
// jump points (exact for a step vs continuous CDF).
double ks_exp_distance(const GapProfile& profile);

// proportions[d-1] = fraction of raw gaps equal to d, d = 1..d_max.
std::vector<double> gap_value_histogram(const ResidueSet& set, int d_max);

// Mean of epsilon_k^2 over the lattice points of the theta-scaled box region.
double strong_poisson_stat(const ResidueSet& set, const CorrelationBox& box,
                           int threads = 1);
double strong_poisson_stat(std::span<const ResidueSet> components,
                           const CorrelationBox& box, int threads = 1);

struct EpsSup {
  double value = 0.0;
  bool exact = true;
  std::uint64_t tuples_scanned = 0;
};

// max |epsilon_k| over distinct offset tuples mod p; exhaustive when the
// tuple count fits the budget, otherwise a seeded sample.
EpsSup eps_sup(const ResidueSet& set, int k, std::uint64_t budget = 2'000'000,
               std::uint64_t seed = 1);

}  // namespace crtspace
