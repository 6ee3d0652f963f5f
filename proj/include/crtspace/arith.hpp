#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace crtspace {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

// Deterministic Miller-Rabin, valid for all n < 2^64.
bool is_prime(std::uint64_t n);

struct Factorization {
  // (prime, exponent), primes strictly increasing.
  std::vector<std::pair<std::uint64_t, int>> factors;

  std::uint64_t value() const;
  bool squarefree() const;
  std::vector<std::uint64_t> primes() const;
  // All divisors, unsorted order of generation.
  std::vector<std::uint64_t> divisors() const;
};

// Trial division below 2^21, then Miller-Rabin + Pollard rho for what is left.
Factorization factorize(std::uint64_t n);

// Simultaneous congruences x = r_i (mod m_i); moduli must be pairwise coprime
// and the product must fit in 64 bits. Throws std::invalid_argument otherwise.
std::uint64_t crt_lift(std::span<const std::pair<std::uint64_t, std::uint64_t>> pairs);

// Legendre symbol (a/p) in {-1,0,+1}; p must be an odd prime.
int legendre(std::int64_t a, std::uint64_t p);

// Square root mod an odd prime via Tonelli-Shanks; nullopt-free variant:
// returns p when a is a non-residue.
std::uint64_t sqrt_mod(std::uint64_t a, std::uint64_t p);

}  // namespace crtspace
