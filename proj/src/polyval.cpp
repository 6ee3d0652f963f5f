#include "crtspace/polyval.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "crtspace/arith.hpp"

namespace crtspace {

IntPolynomial::IntPolynomial(std::vector<BigInt> c) : coeffs(std::move(c)) {
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  if (coeffs.empty() || coeffs.back() == 0)
    throw std::invalid_argument("IntPolynomial: zero polynomial");
}

IntPolynomial IntPolynomial::from_int64(std::span<const std::int64_t> c) {
  std::vector<BigInt> v(c.begin(), c.end());
  return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::derivative() const {
  if (degree() == 0)
    throw std::invalid_argument("derivative: constant polynomial");
  std::vector<BigInt> d(coeffs.size() - 1);
  for (std::size_t i = 1; i < coeffs.size(); ++i)
    d[i - 1] = coeffs[i] * static_cast<int>(i);
  return IntPolynomial(std::move(d));
}

BigInt IntPolynomial::eval(const BigInt& x) const {
  BigInt acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

std::uint64_t IntPolynomial::eval_mod(std::uint64_t x, std::uint64_t p) const {
  std::uint64_t acc = 0;
  x %= p;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    const BigInt cm = ((coeffs[i] % p) + p) % p;
    acc = (mulmod(acc, x, p) + static_cast<std::uint64_t>(cm)) % p;
  }
  return acc;
}

namespace {

// Fraction-free (Bareiss) determinant; exact over the integers.
BigInt determinant(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

// Res_x(a, b) via the Sylvester matrix (rows hold coefficients highest
// degree first).
BigInt resultant(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  const int da = static_cast<int>(a.size()) - 1;
  const int db = static_cast<int>(b.size()) - 1;
  if (da < 1 || db < 1)
    throw std::invalid_argument("resultant: both degrees must be >= 1");
  const int n = da + db;
  std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n, 0));
  for (int r = 0; r < db; ++r)
    for (int i = 0; i <= da; ++i) m[r][r + i] = a[da - i];
  for (int r = 0; r < da; ++r)
    for (int i = 0; i <= db; ++i) m[db + r][r + i] = b[db - i];
  return determinant(std::move(m));
}

using RatPoly = std::vector<BigRat>;  // constant term first

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == BigRat(0)) p.pop_back();
}

int deg(const RatPoly& p) { return static_cast<int>(p.size()) - 1; }

RatPoly poly_mod(RatPoly a, const RatPoly& b) {
  while (deg(a) >= deg(b)) {
    const BigRat q = a.back() / b.back();
    const int shift = deg(a) - deg(b);
    for (int i = 0; i <= deg(b); ++i)
      a[shift + i] -= q * b[i];
    a.pop_back();
    trim(a);
    if (a.empty()) break;
  }
  return a;
}

int gcd_degree(RatPoly a, RatPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    RatPoly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return deg(a);
}

RatPoly rat_derivative(const RatPoly& p) {
  RatPoly d;
  for (std::size_t i = 1; i < p.size(); ++i)
    d.push_back(p[i] * BigRat(static_cast<int>(i)));
  trim(d);
  return d;
}

// Lagrange interpolation through (x_j, y_j), x_j = 0..n-1.
RatPoly interpolate(const std::vector<BigInt>& values) {
  const int n = static_cast<int>(values.size());
  RatPoly result(n, BigRat(0));
  for (int j = 0; j < n; ++j) {
    // basis polynomial prod_{i != j} (t - i) / (j - i)
    RatPoly basis{BigRat(1)};
    BigInt denom = 1;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      RatPoly next(basis.size() + 1, BigRat(0));
      for (std::size_t c = 0; c < basis.size(); ++c) {
        next[c + 1] += basis[c];
        next[c] -= basis[c] * BigRat(i);
      }
      basis = std::move(next);
      denom *= BigInt(j - i);
    }
    // boost::rational<cpp_int> rejects negative denominators
    const BigRat scale = denom < 0 ? BigRat(-values[j], -denom)
                                   : BigRat(values[j], denom);
    for (std::size_t c = 0; c < basis.size(); ++c)
      result[c] += basis[c] * scale;
  }
  trim(result);
  return result;
}

int chi(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

// t in image of x^4 - 2x^2 mod p, decided by Legendre symbols: the image is
// {u^2 - 1 : u = x^2 - 1 a shifted square}, i.e. t is a member iff t + 1 has
// a square root s with 1 + s or 1 - s a square or zero.
bool in_anomaly_image(std::uint64_t t, std::uint64_t p) {
  const std::uint64_t c = (t + 1) % p;
  if (c == 0) return true;  // u = 0, qualifies since 1 is a square
  if (chi(c, p) < 0) return false;
  const std::uint64_t s = sqrt_mod(c, p);
  return chi((1 + s) % p, p) >= 0 || chi((p + 1 - s) % p, p) >= 0;
}

}  // namespace

CriticalValueReport critical_values_distinct(const IntPolynomial& f) {
  const int n = f.degree();
  if (n < 2)
    throw std::invalid_argument("critical_values_distinct: degree >= 2 required");
  const IntPolynomial fp = f.derivative();
  std::vector<BigInt> fpc = fp.coeffs;

  // R(t) = Res_x(f(x) - t, f'(x)) has degree exactly n - 1 in t; evaluate
  // at t = 0..n-1 and interpolate.
  std::vector<BigInt> values(n);
  for (int t = 0; t < n; ++t) {
    std::vector<BigInt> shifted = f.coeffs;
    shifted[0] -= t;
    values[t] = resultant(shifted, fpc);
  }
  RatPoly r = interpolate(values);
  if (deg(r) < 1) {
    // R constant: every critical value coincides (or f' has a single root
    // pattern); no distinct values beyond multiplicity bookkeeping.
    return {deg(r) == 0 && r[0] != BigRat(0) ? 0 : 0, false};
  }
  const int g = gcd_degree(r, rat_derivative(r));
  CriticalValueReport rep;
  rep.distinct_count = deg(r) - (g < 0 ? 0 : g);
  rep.generic = rep.distinct_count == n - 1;
  return rep;
}

BigRat c_n(int n) {
  if (n < 1) throw std::invalid_argument("c_n: n >= 1");
  BigRat sum(0);
  BigInt fact = 1;
  for (int j = 1; j <= n; ++j) {
    fact *= j;
    if (j % 2 == 1)
      sum += BigRat(1, fact);
    else
      sum -= BigRat(1, fact);
  }
  return sum;
}

std::vector<std::uint64_t> poly_image_mod(const IntPolynomial& f, std::uint64_t p) {
  std::vector<bool> hit(p, false);
  for (std::uint64_t y = 0; y < p; ++y) hit[f.eval_mod(y, p)] = true;
  std::vector<std::uint64_t> image;
  for (std::uint64_t v = 0; v < p; ++v)
    if (hit[v]) image.push_back(v);
  return image;
}

ValueSetDensity value_set_density(const IntPolynomial& f, std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("value_set_density: p not prime");
  if (p <= static_cast<std::uint64_t>(f.degree()))
    throw std::invalid_argument("value_set_density: need p > deg f");
  ValueSetDensity d;
  d.size = poly_image_mod(f, p).size();
  d.density = static_cast<double>(d.size) / static_cast<double>(p);
  return d;
}

AnomalyReport anomaly_check(std::uint64_t p) {
  if (!is_prime(p) || p <= 4)
    throw std::invalid_argument("anomaly_check: p must be an odd prime > 4");
  const IntPolynomial f = IntPolynomial::from_int64(
      std::array<std::int64_t, 5>{0, 0, -2, 0, 1});
  std::vector<bool> in_image(p, false);
  for (std::uint64_t y = 0; y < p; ++y) in_image[f.eval_mod(y, p)] = true;

  AnomalyReport rep;
  rep.p = p;
  for (std::uint64_t t = 0; t < p; ++t)
    if (in_image[t] && in_image[(t + 1) % p]) ++rep.n2_direct;
  for (std::uint64_t t = 0; t < p; ++t)
    if (in_anomaly_image(t, p) && in_anomaly_image(t + 1, p)) ++rep.n2_legendre;
  rep.measured = static_cast<double>(rep.n2_direct) / static_cast<double>(p);
  rep.predicted = (p % 4 == 1) ? 3.0 / 32.0 : 3.0 / 16.0;
  return rep;
}

SpCount s_p_legendre_count(std::uint64_t p) {
  if (!is_prime(p) || p < 3)
    throw std::invalid_argument("s_p_legendre_count: p must be an odd prime");
  SpCount out;
  // S_p = {u^2 : 1 + u is a square or zero}. Classify the pairs {b, -b} by
  // whether 1+b or 1-b is a square or zero; with C such b, |S_p| = (C+1)/2
  // (b = 0 always qualifies and contributes the member 0).
  std::uint64_t c = 0;
  for (std::uint64_t b = 0; b < p; ++b)
    if (chi((1 + b) % p, p) >= 0 || chi((p + 1 - b) % p, p) >= 0) ++c;
  out.legendre_path = (c + 1) / 2;

  std::vector<bool> hit(p, false);
  for (std::uint64_t x = 0; x < p; ++x) {
    const std::uint64_t u = (mulmod(x, x, p) + p - 1) % p;
    hit[mulmod(u, u, p)] = true;
  }
  out.direct = static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), true));
  return out;
}

std::optional<std::uint64_t> parity_cover_exists(
    std::span<const std::uint64_t> s, std::span<const std::uint64_t> h,
    std::uint64_t p) {
  if (s.empty() || h.empty())
    throw std::invalid_argument("parity_cover_exists: S and H must be nonempty");
  std::vector<bool> in_s(p, false);
  for (std::uint64_t x : s) in_s[x % p] = true;
  for (std::uint64_t t = 0; t < p; ++t) {
    int parity = 0;
    for (std::uint64_t hv : h) parity ^= in_s[(t + hv) % p] ? 1 : 0;
    if (parity) return t;
  }
  return std::nullopt;
}

}  // namespace crtspace
