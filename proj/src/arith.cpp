#include "crtspace/arith.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "crtspace/rng.hpp"

namespace crtspace {

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

namespace {

bool miller_rabin_witness(std::uint64_t n, std::uint64_t a, std::uint64_t d,
                          int r) {
  std::uint64_t x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int i = 1; i < r; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // This base set decides primality for all n < 2^64.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (miller_rabin_witness(n, a, d, r)) return false;
  }
  return true;
}

std::uint64_t Factorization::value() const {
  std::uint64_t v = 1;
  for (auto [p, e] : factors)
    for (int i = 0; i < e; ++i) v *= p;
  return v;
}

bool Factorization::squarefree() const {
  return std::all_of(factors.begin(), factors.end(),
                     [](auto pe) { return pe.second == 1; });
}

std::vector<std::uint64_t> Factorization::primes() const {
  std::vector<std::uint64_t> ps;
  ps.reserve(factors.size());
  for (auto [p, e] : factors) ps.push_back(p);
  return ps;
}

std::vector<std::uint64_t> Factorization::divisors() const {
  std::vector<std::uint64_t> ds{1};
  for (auto [p, e] : factors) {
    const std::size_t n = ds.size();
    std::uint64_t pe = 1;
    for (int i = 0; i < e; ++i) {
      pe *= p;
      for (std::size_t j = 0; j < n; ++j) ds.push_back(ds[j] * pe);
    }
  }
  return ds;
}

namespace {

std::uint64_t pollard_rho(std::uint64_t n, std::uint64_t salt) {
  // Brent's cycle variant.
  const std::uint64_t c = splitmix64(salt) % (n - 1) + 1;
  std::uint64_t x = splitmix64(salt + 1) % n;
  std::uint64_t y = x, d = 1;
  auto step = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
  while (d == 1) {
    x = step(x);
    y = step(step(y));
    if (x == y) return n;  // cycle without factor, retry with another salt
    d = std::gcd(x > y ? x - y : y - x, n);
  }
  return d;
}

void factor_rec(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t d = n;
  for (std::uint64_t salt = 0; d == n; ++salt) d = pollard_rho(n, salt);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  Factorization f;
  std::vector<std::uint64_t> ps;
  for (std::uint64_t p = 2; p < (1ULL << 21) && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      ps.push_back(p);
      n /= p;
    }
  }
  factor_rec(n, ps);
  std::sort(ps.begin(), ps.end());
  for (std::uint64_t p : ps) {
    if (!f.factors.empty() && f.factors.back().first == p)
      ++f.factors.back().second;
    else
      f.factors.emplace_back(p, 1);
  }
  return f;
}

std::uint64_t crt_lift(
    std::span<const std::pair<std::uint64_t, std::uint64_t>> pairs) {
  if (pairs.empty()) throw std::invalid_argument("crt_lift: no congruences");
  unsigned __int128 x = 0, m = 1;
  for (auto [r, mi] : pairs) {
    if (mi == 0) throw std::invalid_argument("crt_lift: zero modulus");
    if (std::gcd(static_cast<std::uint64_t>(m % mi), mi) != 1)
      throw std::invalid_argument("crt_lift: moduli not pairwise coprime");
    // solve x + m*t = r (mod mi)
    const std::uint64_t mm = static_cast<std::uint64_t>(m % mi);
    std::uint64_t rhs = (r % mi + mi - static_cast<std::uint64_t>(x % mi)) % mi;
    // inverse of mm mod mi by extended Euclid (mi need not be prime)
    std::int64_t a = static_cast<std::int64_t>(mm % mi), b = static_cast<std::int64_t>(mi);
    std::int64_t u0 = 1, u1 = 0;
    while (b) {
      std::int64_t qq = a / b;
      std::int64_t t = a - qq * b; a = b; b = t;
      t = u0 - qq * u1; u0 = u1; u1 = t;
    }
    std::uint64_t minv = static_cast<std::uint64_t>((u0 % static_cast<std::int64_t>(mi) +
                                                     static_cast<std::int64_t>(mi)) %
                                                    static_cast<std::int64_t>(mi));
    std::uint64_t t = mulmod(rhs, minv, mi);
    x += m * t;
    m *= mi;
    if (m > static_cast<unsigned __int128>(UINT64_MAX))
      throw std::invalid_argument("crt_lift: product of moduli exceeds 2^64");
  }
  return static_cast<std::uint64_t>(x);
}

int legendre(std::int64_t a, std::uint64_t p) {
  if (p < 3 || !is_prime(p))
    throw std::invalid_argument("legendre: p must be an odd prime");
  std::int64_t r = a % static_cast<std::int64_t>(p);
  if (r < 0) r += static_cast<std::int64_t>(p);
  if (r == 0) return 0;
  const std::uint64_t e = powmod(static_cast<std::uint64_t>(r), (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

std::uint64_t sqrt_mod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (powmod(a, (p - 1) / 2, p) != 1) return p;
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  // Tonelli-Shanks
  std::uint64_t q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  std::uint64_t z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  std::uint64_t m = s;
  std::uint64_t c = powmod(z, q, p);
  std::uint64_t t = powmod(a, q, p);
  std::uint64_t r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    std::uint64_t i = 0, tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    std::uint64_t b = powmod(c, 1ULL << (m - i - 1), p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

}  // namespace crtspace
