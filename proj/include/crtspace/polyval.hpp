#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

namespace crtspace {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::rational<BigInt>;

// Integer polynomial, constant term first; leading coefficient nonzero.
struct IntPolynomial {
  std::vector<BigInt> coeffs;

  explicit IntPolynomial(std::vector<BigInt> c);
  static IntPolynomial from_int64(std::span<const std::int64_t> c);
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  IntPolynomial derivative() const;
  BigInt eval(const BigInt& x) const;
  std::uint64_t eval_mod(std::uint64_t x, std::uint64_t p) const;
};

struct CriticalValueReport {
  int distinct_count = 0;
  bool generic = false;  // distinct_count == degree - 1
};

// Number of distinct complex critical values of f, exactly over Q:
// R(t) = Res_x(f(x) - t, f'(x)) computed by evaluation at t = 0..n-1 and
// rational interpolation, then deg R - deg gcd(R, R').
CriticalValueReport critical_values_distinct(const IntPolynomial& f);

// c_n = 1 - 1/2! + 1/3! - ... +- 1/n!; n!(1 - c_n) is the n-th derangement
// number.
BigRat c_n(int n);

struct ValueSetDensity {
  std::uint64_t size = 0;  // |f(Z/pZ)|
  double density = 0.0;
};

// Exact image size of f mod p by sieving; requires prime p > deg f.
ValueSetDensity value_set_density(const IntPolynomial& f, std::uint64_t p);

// Sorted image of f mod p.
std::vector<std::uint64_t> poly_image_mod(const IntPolynomial& f, std::uint64_t p);

struct AnomalyReport {
  std::uint64_t p = 0;
  std::uint64_t n2_direct = 0;    // t with t, t+1 both in image of x^4 - 2x^2
  std::uint64_t n2_legendre = 0;  // same count by the Legendre membership path
  double measured = 0.0;          // n2_direct / p
  double predicted = 0.0;         // 3/32 if p = 1 mod 4 else 3/16
};

AnomalyReport anomaly_check(std::uint64_t p);

struct SpCount {
  std::uint64_t legendre_path = 0;  // (C+1)/2 from Legendre symbols alone
  std::uint64_t direct = 0;         // |{(x^2-1)^2 mod p}| by enumeration
};

// |S_p| for S_p = {(x^2 - 1)^2 mod p}, two independent ways.
SpCount s_p_legendre_count(std::uint64_t p);

// Some t such that #{h in H : (t + h) mod p in S} is odd, if any exists.
std::optional<std::uint64_t> parity_cover_exists(
    std::span<const std::uint64_t> s, std::span<const std::uint64_t> h,
    std::uint64_t p);

}  // namespace crtspace
