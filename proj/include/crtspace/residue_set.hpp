#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace crtspace {

// How a residue set was produced. The arithmetic families (units, squares,
// dth_powers, poly_image, curve) are defined per prime and compose through
// the CRT; interval/multiples/bernoulli/explicit_list are direct
// constructions at any modulus.
struct FamilySpec {
  enum class Kind {
    units,
    squares,
    dth_powers,
    poly_image,
    curve,
    interval,
    multiples,
    bernoulli,
    explicit_list,
  };

  Kind kind = Kind::units;
  std::uint64_t d = 1;                  // dth_powers
  std::vector<std::int64_t> coeffs;     // poly_image, constant term first
  std::int64_t a = 0, b = 0;            // curve y^2 = x^3 + ax + b
  std::uint64_t n = 0;                  // interval {1..n}
  std::uint64_t m = 1;                  // multiples: members divisible by m
  double density = 0.0;                 // multiples: selection probability
  double sigma = 2.0;                   // bernoulli: inclusion prob 1/sigma
  std::uint64_t seed = 0;               // bernoulli / multiples
  std::vector<std::uint64_t> members;   // explicit_list

  static FamilySpec units();
  static FamilySpec squares();
  static FamilySpec dth_powers(std::uint64_t d);
  static FamilySpec poly_image(std::vector<std::int64_t> coeffs);
  static FamilySpec curve(std::int64_t a, std::int64_t b);
  static FamilySpec interval(std::uint64_t n);
  static FamilySpec multiples(std::uint64_t m, double density, std::uint64_t seed);
  static FamilySpec bernoulli(double sigma, std::uint64_t seed);
  static FamilySpec explicit_list(std::vector<std::uint64_t> members);

  std::string describe() const;
  bool per_prime() const;  // true for the arithmetic families
};

// A subset of Z/qZ. Dense bitmap when count/q > 1/64, sorted list otherwise.
class ResidueSet {
 public:
  ResidueSet() = default;

  // members must be strictly increasing, all < q.
  static ResidueSet from_sorted(std::uint64_t q, std::vector<std::uint64_t> members,
                                std::string provenance = {});

  std::uint64_t modulus() const { return q_; }
  std::uint64_t count() const { return count_; }
  bool dense() const { return dense_; }
  const std::string& provenance() const { return provenance_; }

  bool contains(std::uint64_t x) const;
  // Sorted member list (materializes from the bitmap if needed).
  std::vector<std::uint64_t> to_list() const;
  // Bitmap words, little-endian bit order; empty for list representation.
  const std::vector<std::uint64_t>& words() const { return bits_; }
  const std::vector<std::uint64_t>& list() const { return list_; }

  double density_r() const;   // r_q = count/q
  double spacing_s() const;   // s_q = q/count

  void write(std::ostream& out) const;       // CRSP binary format
  static ResidueSet read(std::istream& in);  // throws on malformed input

 private:
  std::uint64_t q_ = 0;
  std::uint64_t count_ = 0;
  bool dense_ = false;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> list_;
  std::string provenance_;
};

// Per-prime generator. p must be prime; arithmetic families only, except
// that the direct families are also accepted (they do not require
// primality and are simply generated at modulus p).
ResidueSet gen_prime_set(const FamilySpec& family, std::uint64_t p);

// Generate at an arbitrary modulus q. For per-prime families q must be
// squarefree; the per-prime sets are composed through the CRT.
ResidueSet gen_set(const FamilySpec& family, std::uint64_t q,
                   std::uint64_t materialization_cap = (1ULL << 31));

// CRT composition: membership mod prod(q_i) is the conjunction of the
// component memberships. Throws if moduli are not pairwise coprime or the
// product exceeds the cap.
ResidueSet crt_compose(std::span<const ResidueSet> components,
                       std::uint64_t materialization_cap = (1ULL << 31));

struct SetStats {
  double r;  // density |Omega|/q
  double s;  // average spacing q/|Omega|
};
SetStats stats(const ResidueSet& set);  // throws on empty set

}  // namespace crtspace
