#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace crtspace {

// Symmetric system gamma_{i,j} (0 <= i != j < k) of positive squarefree
// integers satisfying gcd(gamma_{i,j}, gamma_{j,l}) | gamma_{i,l}. Stored as
// the upper triangle, row-major: (0,1),(0,2),...,(0,k-1),(1,2),...
struct GammaStructure {
  int k = 2;
  std::vector<std::uint64_t> upper;

  static GammaStructure all_ones(int k);
  std::uint64_t at(int i, int j) const;
  void set(int i, int j, std::uint64_t value);
  void validate() const;  // throws on asymmetric sizes / non-squarefree / incompatible
  bool operator==(const GammaStructure&) const = default;
};

struct GammaDerived {
  std::vector<std::uint64_t> gamma_j;  // j = 1..k-1, lcm over i<j of gamma_{i,j}
  std::uint64_t gamma_product = 1;     // gamma(Gamma)
  std::uint64_t conductor = 1;         // c(Gamma), radical of gamma_product
};

// gamma_{i,j} = gcd(c, h_j - h_i) with h_0 = 0 implicit; c squarefree.
GammaStructure gamma_of_tuple(std::span<const std::uint64_t> h, std::uint64_t c);

GammaDerived derive(const GammaStructure& g);

// M_Gamma(H): distinct tuples (h_0=0, h_1..h_{k-1}) with 0 <= h_i <= H whose
// structure w.r.t. the classification modulus equals g. modulus = 0 means
// "use c(Gamma)". Exhaustive; throws if H^{k-1} exceeds the budget.
std::uint64_t m_gamma_structure(const GammaStructure& g, std::uint64_t big_h,
                                std::uint64_t modulus = 0);

// M_gamma(H) = sum of M_Gamma(H) over structures with gamma(Gamma) = gamma,
// classified w.r.t. the squarefree modulus c. Requires rad(gamma) | c and
// gamma | c^{k-1}.
std::uint64_t m_gamma(std::uint64_t gamma, std::uint64_t c, int k,
                      std::uint64_t big_h);

std::uint64_t stirling2(int k, int l);

// All gcd-compatible structures over the squarefree modulus c (entries
// divide c), one per choice of a set partition of {0..k-1} for each prime.
std::vector<GammaStructure> enumerate_structures(std::uint64_t c, int k);

// Exact #{Gamma over modulus c : gamma(Gamma) = gamma}; equals the
// Stirling-number product over the prime-power factors of gamma.
std::uint64_t count_structures(std::uint64_t gamma, std::uint64_t c, int k);

// prod_i (H/gamma_i^{(sigma)} + 1) as an exact fraction (num, den), where
// sigma permutes the nonzero indices before deriving gamma_j. sigma has
// length k and must fix 0.
std::pair<std::uint64_t, std::uint64_t> product_bound_exact(
    const GammaStructure& g, std::uint64_t big_h, std::span<const int> sigma);
double product_bound(const GammaStructure& g, std::uint64_t big_h,
                     std::span<const int> sigma);

// 2^{k-1} H^{k-1} / prod_j min(gamma_j, H) as an exact fraction.
std::pair<std::uint64_t, std::uint64_t> coarse_bound_exact(
    const GammaStructure& g, std::uint64_t big_h);
double coarse_bound(const GammaStructure& g, std::uint64_t big_h);

// tau runs over the candidate set {0, tau_1, tau_1+1, ..., k-1};
// lambda_k = min over candidates of (k-1-v(tau))/w(tau).
struct ExponentTable {
  int k = 2;
  int tau1 = 1;                     // floor(sqrt(2k+1/4) - 1/2)
  std::vector<int> tau;             // candidate taus, increasing
  std::vector<double> w;            // w(tau) = k - 9/8 + (tau-1/2)^2/2
  std::vector<double> v;            // v(0)=k-2, v(tau1)=k+1/2-sqrt(2k+1/4), else k-tau
  double lambda = 0.0;
  bool lambda_rational = false;     // certified by exact arithmetic
  std::int64_t lambda_num = 0;      // valid when lambda_rational
  std::int64_t lambda_den = 1;
};

ExponentTable exponent_table(int k);

}  // namespace crtspace
