#include "crtspace/gammacomb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "crtspace/arith.hpp"

namespace crtspace {

namespace {

constexpr std::uint64_t kTupleBudget = 100'000'000ULL;

bool squarefree(std::uint64_t n) {
  return n >= 1 && factorize(n).squarefree();
}

std::size_t tri_index(int k, int i, int j) {
  // upper triangle, row-major; i < j
  return static_cast<std::size_t>(i) * (2 * k - i - 1) / 2 + (j - i - 1);
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  return a / std::gcd(a, b) * b;
}

// gamma_j for j=1..k-1 after relabeling nonzero indices by sigma (sigma[0]=0).
std::vector<std::uint64_t> derived_gammas(const GammaStructure& g,
                                          std::span<const int> sigma) {
  const int k = g.k;
  std::vector<std::uint64_t> gj(k - 1, 1);
  for (int j = 1; j < k; ++j)
    for (int i = 0; i < j; ++i)
      gj[j - 1] = lcm_u64(gj[j - 1], g.at(sigma[i], sigma[j]));
  return gj;
}

std::vector<int> identity_perm(int k) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

// All set partitions of {0..k-1} as restricted growth strings.
std::vector<std::vector<int>> set_partitions(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> rgs(k, 0);
  auto rec = [&](auto&& self, int pos, int maxblock) -> void {
    if (pos == k) {
      out.push_back(rgs);
      return;
    }
    for (int b = 0; b <= maxblock + 1; ++b) {
      rgs[pos] = b;
      self(self, pos + 1, std::max(maxblock, b));
    }
  };
  rec(rec, 1, 0);
  return out;
}

template <typename Fn>
void for_each_distinct_tuple(int k, std::uint64_t big_h, Fn&& fn) {
  long double cost = 1.0L;
  for (int i = 0; i < k - 1; ++i) cost *= static_cast<long double>(big_h + 1);
  if (cost > static_cast<long double>(kTupleBudget))
    throw std::invalid_argument("tuple scan exceeds exhaustive budget");
  std::vector<std::uint64_t> h(k, 0);  // h[0] = 0
  auto rec = [&](auto&& self, int level) -> void {
    if (level == k) {
      fn(std::span<const std::uint64_t>(h));
      return;
    }
    for (std::uint64_t v = 0; v <= big_h; ++v) {
      bool dup = false;
      for (int i = 0; i < level && !dup; ++i) dup = h[i] == v;
      if (dup) continue;
      h[level] = v;
      self(self, level + 1);
    }
  };
  rec(rec, 1);
}

}  // namespace

GammaStructure GammaStructure::all_ones(int k) {
  if (k < 2) throw std::invalid_argument("GammaStructure: k >= 2 required");
  GammaStructure g;
  g.k = k;
  g.upper.assign(static_cast<std::size_t>(k) * (k - 1) / 2, 1);
  return g;
}

std::uint64_t GammaStructure::at(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= k || j >= k)
    throw std::out_of_range("GammaStructure::at");
  if (i > j) std::swap(i, j);
  return upper[tri_index(k, i, j)];
}

void GammaStructure::set(int i, int j, std::uint64_t value) {
  if (i == j || i < 0 || j < 0 || i >= k || j >= k)
    throw std::out_of_range("GammaStructure::set");
  if (i > j) std::swap(i, j);
  upper[tri_index(k, i, j)] = value;
}

void GammaStructure::validate() const {
  if (k < 2) throw std::invalid_argument("GammaStructure: k >= 2 required");
  if (upper.size() != static_cast<std::size_t>(k) * (k - 1) / 2)
    throw std::invalid_argument("GammaStructure: wrong entry count");
  for (std::uint64_t g : upper)
    if (!squarefree(g))
      throw std::invalid_argument("GammaStructure: entries must be positive squarefree");
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l) {
        if (i == j || j == l || i == l) continue;
        if (at(i, l) % std::gcd(at(i, j), at(j, l)) != 0)
          throw std::invalid_argument("GammaStructure: gcd-compatibility violated");
      }
}

GammaStructure gamma_of_tuple(std::span<const std::uint64_t> h, std::uint64_t c) {
  if (!squarefree(c))
    throw std::invalid_argument("gamma_of_tuple: c must be squarefree");
  const int k = static_cast<int>(h.size()) + 1;
  std::vector<std::uint64_t> full(h.size() + 1, 0);
  std::copy(h.begin(), h.end(), full.begin() + 1);
  for (std::size_t i = 0; i < full.size(); ++i)
    for (std::size_t j = i + 1; j < full.size(); ++j)
      if (full[i] == full[j])
        throw std::invalid_argument("gamma_of_tuple: entries must be distinct");
  GammaStructure g = GammaStructure::all_ones(k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const std::uint64_t d =
          full[j] > full[i] ? full[j] - full[i] : full[i] - full[j];
      g.set(i, j, std::gcd(c, d));
    }
  g.validate();
  return g;
}

GammaDerived derive(const GammaStructure& g) {
  g.validate();
  GammaDerived d;
  d.gamma_j = derived_gammas(g, identity_perm(g.k));
  d.gamma_product = 1;
  for (std::uint64_t gj : d.gamma_j) d.gamma_product *= gj;
  d.conductor = 1;
  for (auto [p, e] : factorize(d.gamma_product).factors) d.conductor *= p;
  return d;
}

std::uint64_t m_gamma_structure(const GammaStructure& g, std::uint64_t big_h,
                                std::uint64_t modulus) {
  g.validate();
  if (big_h == 0) throw std::invalid_argument("m_gamma_structure: H >= 1");
  const std::uint64_t cmod = modulus == 0 ? derive(g).conductor : modulus;
  if (!squarefree(cmod))
    throw std::invalid_argument("m_gamma_structure: modulus must be squarefree");
  const int k = g.k;
  std::uint64_t count = 0;
  for_each_distinct_tuple(k, big_h, [&](std::span<const std::uint64_t> h) {
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        const std::uint64_t d = h[j] > h[i] ? h[j] - h[i] : h[i] - h[j];
        if (std::gcd(cmod, d) != g.at(i, j)) return;
      }
    ++count;
  });
  return count;
}

std::uint64_t m_gamma(std::uint64_t gamma, std::uint64_t c, int k,
                      std::uint64_t big_h) {
  if (k < 2) throw std::invalid_argument("m_gamma: k >= 2");
  if (!squarefree(c)) throw std::invalid_argument("m_gamma: c must be squarefree");
  const Factorization fg = factorize(gamma);
  for (auto [p, e] : fg.factors) {
    if (c % p != 0)
      throw std::invalid_argument("m_gamma: rad(gamma) must divide c");
    if (e > k - 1)
      throw std::invalid_argument("m_gamma: gamma must divide c^{k-1}");
  }
  std::uint64_t count = 0;
  for_each_distinct_tuple(k, big_h, [&](std::span<const std::uint64_t> h) {
    std::uint64_t prod = 1;
    for (int j = 1; j < k; ++j) {
      std::uint64_t gj = 1;
      for (int i = 0; i < j; ++i) {
        const std::uint64_t d = h[j] > h[i] ? h[j] - h[i] : h[i] - h[j];
        gj = lcm_u64(gj, std::gcd(c, d));
      }
      prod *= gj;
    }
    if (prod == gamma) ++count;
  });
  return count;
}

std::uint64_t stirling2(int k, int l) {
  if (l < 1 || l > k) throw std::invalid_argument("stirling2: need 1 <= l <= k");
  std::vector<std::uint64_t> row(l + 1, 0);
  row[0] = 1;  // S(0,0)
  for (int n = 1; n <= k; ++n) {
    for (int j = std::min(n, l); j >= 1; --j)
      row[j] = j * row[j] + row[j - 1];
    row[0] = 0;  // S(n,0) = 0 for n >= 1
  }
  return row[l];
}

std::vector<GammaStructure> enumerate_structures(std::uint64_t c, int k) {
  if (k < 2) throw std::invalid_argument("enumerate_structures: k >= 2");
  if (!squarefree(c))
    throw std::invalid_argument("enumerate_structures: c must be squarefree");
  const std::vector<std::uint64_t> primes = factorize(c).primes();
  const std::vector<std::vector<int>> parts = set_partitions(k);
  double total = 1.0;
  for (std::size_t i = 0; i < primes.size(); ++i)
    total *= static_cast<double>(parts.size());
  if (total > 2'000'000.0)
    throw std::invalid_argument("enumerate_structures: too many structures");

  std::vector<GammaStructure> out;
  std::vector<std::size_t> choice(primes.size(), 0);
  for (;;) {
    GammaStructure g = GammaStructure::all_ones(k);
    for (std::size_t pi = 0; pi < primes.size(); ++pi) {
      const std::vector<int>& rgs = parts[choice[pi]];
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
          if (rgs[i] == rgs[j]) g.set(i, j, g.at(i, j) * primes[pi]);
    }
    out.push_back(std::move(g));
    std::size_t pos = 0;
    while (pos < choice.size() && ++choice[pos] == parts.size()) {
      choice[pos] = 0;
      ++pos;
    }
    if (pos == choice.size()) break;
  }
  return out;
}

std::uint64_t count_structures(std::uint64_t gamma, std::uint64_t c, int k) {
  if (k < 2) throw std::invalid_argument("count_structures: k >= 2");
  if (!squarefree(c))
    throw std::invalid_argument("count_structures: c must be squarefree");
  const Factorization fg = factorize(gamma);
  std::uint64_t count = 1;
  for (auto [p, e] : fg.factors) {
    if (c % p != 0)
      throw std::invalid_argument("count_structures: rad(gamma) must divide c");
    if (e > k - 1) return 0;
    // structures contributing p^e correspond to partitions of {0..k-1}
    // into exactly k-e blocks
    count *= stirling2(k, k - e);
  }
  return count;
}

std::pair<std::uint64_t, std::uint64_t> product_bound_exact(
    const GammaStructure& g, std::uint64_t big_h, std::span<const int> sigma) {
  g.validate();
  if (static_cast<int>(sigma.size()) != g.k || sigma[0] != 0)
    throw std::invalid_argument("product_bound: sigma must permute indices and fix 0");
  std::vector<int> check(sigma.begin(), sigma.end());
  std::sort(check.begin(), check.end());
  for (int i = 0; i < g.k; ++i)
    if (check[i] != i)
      throw std::invalid_argument("product_bound: sigma is not a permutation");
  const std::vector<std::uint64_t> gj = derived_gammas(g, sigma);
  std::uint64_t num = 1, den = 1;
  for (std::uint64_t v : gj) {
    num *= big_h + v;
    den *= v;
  }
  return {num, den};
}

double product_bound(const GammaStructure& g, std::uint64_t big_h,
                  std::span<const int> sigma) {
  const auto [num, den] = product_bound_exact(g, big_h, sigma);
  return static_cast<double>(num) / static_cast<double>(den);
}

std::pair<std::uint64_t, std::uint64_t> coarse_bound_exact(const GammaStructure& g,
                                                        std::uint64_t big_h) {
  g.validate();
  const std::vector<std::uint64_t> gj =
      derived_gammas(g, identity_perm(g.k));
  std::uint64_t num = 1, den = 1;
  for (std::uint64_t v : gj) {
    num *= 2 * big_h;
    den *= std::min(v, big_h);
  }
  return {num, den};
}

double coarse_bound(const GammaStructure& g, std::uint64_t big_h) {
  const auto [num, den] = coarse_bound_exact(g, big_h);
  return static_cast<double>(num) / static_cast<double>(den);
}

namespace {

// Small exact fraction for the exponent certification; values stay tiny.
struct Frac {
  long long n = 0, d = 1;
  Frac() = default;
  Frac(long long num, long long den) : n(num), d(den) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
  }
  bool operator<(const Frac& o) const {
    return static_cast<__int128>(n) * o.d < static_cast<__int128>(o.n) * d;
  }
  bool operator<=(const Frac& o) const { return !(o < *this); }
  Frac operator*(const Frac& o) const {
    return Frac(n * o.n, d * o.d);
  }
  Frac operator+(const Frac& o) const {
    return Frac(n * o.d + o.n * d, d * o.d);
  }
  double value() const { return static_cast<double>(n) / static_cast<double>(d); }
};

// w(tau) = (8k - 9 + (2tau-1)^2) / 8, exactly.
Frac w_frac(int k, int tau) {
  const long long t = 2LL * tau - 1;
  return Frac(8LL * k - 9 + t * t, 8);
}

}  // namespace

ExponentTable exponent_table(int k) {
  if (k < 2) throw std::invalid_argument("exponent_table: k >= 2");
  ExponentTable t;
  t.k = k;
  const double disc = 2.0 * k + 0.25;
  t.tau1 = static_cast<int>(std::floor(std::sqrt(disc) - 0.5));

  std::vector<int> cand{0};
  if (t.tau1 >= 1 && t.tau1 <= k - 1) cand.push_back(t.tau1);
  for (int tau = t.tau1 + 1; tau <= k - 1; ++tau) cand.push_back(tau);
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  t.tau = cand;

  const double surd = std::sqrt(disc);  // sqrt(2k + 1/4)
  for (int tau : cand) {
    t.w.push_back(w_frac(k, tau).value());
    if (tau == 0)
      t.v.push_back(static_cast<double>(k - 2));
    else if (tau == t.tau1)
      t.v.push_back(k + 0.5 - surd);
    else
      t.v.push_back(static_cast<double>(k - tau));
  }

  // Rational candidates: tau = 0 gives 1/(k-1); tau >= tau1+1 gives
  // (tau-1)/w(tau). The tau1 candidate is (sqrt(8k+1) - 3) / (2 w(tau1)),
  // rational exactly when 8k+1 is a perfect square.
  Frac best(1, k - 1);
  for (int tau = t.tau1 + 1; tau <= k - 1; ++tau) {
    const Frac w = w_frac(k, tau);
    const Frac val(static_cast<long long>(tau - 1) * w.d, w.n);
    if (val < best) best = val;
  }

  bool surd_is_min = false;
  double surd_val = 0.0;
  if (t.tau1 >= 1 && t.tau1 <= k - 1) {
    const long long disc8 = 8LL * k + 1;
    const long long root = static_cast<long long>(std::llround(std::sqrt(
        static_cast<double>(disc8))));
    const Frac w1 = w_frac(k, t.tau1);
    if (root * root == disc8) {
      const Frac val(static_cast<long long>(root - 3) * w1.d, 2 * w1.n);
      if (val < best) best = val;
    } else {
      // best <= (sqrt(disc8) - 3)/(2 w1)  <=>  (2 w1 best + 3)^2 <= disc8
      const Frac lhs = Frac(2, 1) * w1 * best + Frac(3, 1);
      const Frac lhs2 = lhs * lhs;
      if (Frac(disc8, 1) < lhs2) {
        surd_is_min = true;
        surd_val = (std::sqrt(static_cast<double>(disc8)) - 3.0) /
                   (2.0 * w1.value());
      }
    }
  }

  if (surd_is_min) {
    t.lambda = surd_val;
    t.lambda_rational = false;
  } else {
    t.lambda = best.value();
    t.lambda_rational = true;
    t.lambda_num = best.n;
    t.lambda_den = best.d;
  }
  return t;
}

}  // namespace crtspace
