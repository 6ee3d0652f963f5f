#include "crtspace/spacings.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "crtspace/arith.hpp"
#include "crtspace/parallel.hpp"
#include "crtspace/rng.hpp"

namespace crtspace {

OffsetTuple::OffsetTuple(std::vector<std::uint64_t> h) : offsets(std::move(h)) {
  if (!offsets.empty() && offsets.front() == 0)
    throw std::invalid_argument("OffsetTuple: offsets must be positive");
  for (std::size_t i = 1; i < offsets.size(); ++i)
    if (offsets[i] <= offsets[i - 1])
      throw std::invalid_argument("OffsetTuple: offsets must be strictly increasing");
}

double CorrelationBox::vol() const {
  double v = 1.0;
  for (double b : bounds) v *= theta * b;
  return v;
}

std::vector<double> GapProfile::normalized() const {
  const double sq = s();
  std::vector<double> out(raw_gaps.size());
  for (std::size_t i = 0; i < raw_gaps.size(); ++i)
    out[i] = static_cast<double>(raw_gaps[i]) / sq;
  return out;
}

GapProfile gaps(const ResidueSet& set) {
  if (set.count() < 2)
    throw std::invalid_argument("gaps: need at least two elements");
  GapProfile p;
  p.q = set.modulus();
  p.elements = set.to_list();
  const std::size_t m = p.elements.size();
  p.raw_gaps.resize(m);
  for (std::size_t j = 0; j + 1 < m; ++j)
    p.raw_gaps[j] = p.elements[j + 1] - p.elements[j];
  p.raw_gaps[m - 1] = p.q - p.elements[m - 1] + p.elements[0];
  return p;
}

double prob_tail(const GapProfile& profile, std::span<const double> thresholds) {
  const std::size_t m = profile.m();
  const std::size_t k = thresholds.size();
  if (k == 0) return 1.0;
  const std::vector<double> d = profile.normalized();
  std::size_t hits = 0;
  for (std::size_t j = 0; j < m; ++j) {
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i)
      ok = d[(j + i) % m] > thresholds[i];
    hits += ok;
  }
  return static_cast<double>(hits) / static_cast<double>(m);
}

namespace {

// Bitmap of the set padded with one extra zero word so that any aligned
// 64-bit window starting inside [0, q) can be read with two word loads.
struct DenseView {
  std::vector<std::uint64_t> w;
  std::uint64_t q = 0;

  explicit DenseView(const ResidueSet& set) : w(set.words()), q(set.modulus()) {
    w.push_back(0);
  }

  std::uint64_t linear64(std::uint64_t pos) const {
    const std::uint64_t word = pos >> 6, off = pos & 63;
    if (off == 0) return w[word];
    return (w[word] >> off) | (w[word + 1] << (64 - off));
  }

  // 64 bits of the length-q cyclic bit string starting at position start.
  std::uint64_t cyclic64(std::uint64_t start) const {
    if (start + 64 <= q) return linear64(start);
    const std::uint64_t tail_len = q - start;  // in [1, 63]
    const std::uint64_t tail = linear64(start) & ((tail_len == 64) ? ~0ULL : ((1ULL << tail_len) - 1));
    const std::uint64_t head = linear64(0);
    return tail | (head << tail_len);
  }
};

std::uint64_t count_sparse(const ResidueSet& set,
                           std::span<const std::uint64_t> offsets) {
  const std::uint64_t q = set.modulus();
  std::uint64_t n = 0;
  for (std::uint64_t t : set.to_list()) {
    bool ok = true;
    for (std::uint64_t h : offsets) {
      std::uint64_t x = t + (h % q);
      if (x >= q) x -= q;
      if (!set.contains(x)) {
        ok = false;
        break;
      }
    }
    n += ok;
  }
  return n;
}

std::uint64_t count_dense(const DenseView& v, const ResidueSet& set,
                          std::span<const std::uint64_t> offsets) {
  const std::uint64_t q = v.q;
  const std::size_t nwords = set.words().size();
  std::uint64_t total = 0;
  for (std::size_t word = 0; word < nwords; ++word) {
    std::uint64_t acc = set.words()[word];
    const std::uint64_t base = static_cast<std::uint64_t>(word) * 64;
    for (std::uint64_t h : offsets) {
      if (acc == 0) break;
      acc &= v.cyclic64((base + (h % q)) % q);
    }
    total += static_cast<std::uint64_t>(std::popcount(acc));
  }
  return total;
}

std::uint64_t eval_count(const ResidueSet& set,
                         std::span<const std::uint64_t> offsets,
                         const DenseView* view) {
  if (set.count() == 0) return 0;
  if (set.dense() && set.modulus() >= 64 && view != nullptr)
    return count_dense(*view, set, offsets);
  return count_sparse(set, offsets);
}

// 1 + epsilon_k = N q^{k-1} / |Omega|^k.
double eps_from_count(std::uint64_t n, std::uint64_t q, std::uint64_t count,
                      int k) {
  const long double scale = std::pow(static_cast<long double>(q), k - 1) /
                            std::pow(static_cast<long double>(count), k);
  return static_cast<double>(static_cast<long double>(n) * scale - 1.0L);
}

// Repeated N_k evaluation against one set. Small cases are fully tabulated
// up front so lookups are read-only (and thus thread safe); everything else
// falls through to the direct kernels.
class TupleCounter {
 public:
  TupleCounter(const ResidueSet& set, int k) : set_(&set), q_(set.modulus()) {
    const std::uint64_t cnt = set.count();
    if (k == 2 && cnt >= 1 && cnt * cnt <= 300'000'000ULL && q_ <= 30'000'000ULL) {
      mode_ = Mode::table2;
      table_.assign(q_, 0);
      const auto list = set.to_list();
      for (std::uint64_t a : list)
        for (std::uint64_t b : list)
          ++table_[b >= a ? b - a : b + q_ - a];
      return;
    }
    if (k >= 3) {
      long double cells = 1.0L;
      for (int i = 0; i < k - 1; ++i) cells *= static_cast<long double>(q_);
      if (cells <= (1 << 18) &&
          cells * static_cast<long double>(cnt) <= 50'000'000.0L) {
        mode_ = Mode::memo;
        const std::uint64_t ncells = static_cast<std::uint64_t>(cells);
        table_.assign(ncells, 0);
        std::vector<std::uint64_t> h(k - 1, 0);
        for (std::uint64_t idx = 0; idx < ncells; ++idx) {
          std::uint64_t rest = idx;
          for (int i = 0; i < k - 1; ++i) {
            h[i] = rest % q_;
            rest /= q_;
          }
          table_[idx] = count_sparse(*set_, h);
        }
        return;
      }
    }
    mode_ = Mode::direct;
    if (set.dense() && q_ >= 64) view_ = std::make_unique<DenseView>(set);
  }

  std::uint64_t count(std::span<const std::uint64_t> offsets) const {
    switch (mode_) {
      case Mode::table2: {
        const std::uint64_t h = offsets[0] % q_;
        return table_[h];
      }
      case Mode::memo: {
        std::uint64_t idx = 0;
        for (std::size_t i = offsets.size(); i-- > 0;)
          idx = idx * q_ + offsets[i] % q_;
        return table_[idx];
      }
      case Mode::direct:
        return eval_count(*set_, offsets, view_.get());
    }
    return 0;
  }

  const ResidueSet& set() const { return *set_; }

 private:
  enum class Mode { table2, memo, direct };
  const ResidueSet* set_;
  std::uint64_t q_;
  Mode mode_ = Mode::direct;
  std::vector<std::uint64_t> table_;
  std::unique_ptr<DenseView> view_;
};

// Integer bounds of the theta-scaled box: c_i = floor(theta * b_i * s).
std::vector<std::uint64_t> lattice_bounds(const CorrelationBox& box,
                                          long double s) {
  std::vector<std::uint64_t> c;
  c.reserve(box.bounds.size());
  for (double b : box.bounds) {
    const long double edge = static_cast<long double>(box.theta) *
                             static_cast<long double>(b) * s;
    c.push_back(edge < 1.0L ? 0 : static_cast<std::uint64_t>(std::floor(edge)));
  }
  return c;
}

// Visit every h with h_1 in [lo, hi) and h_i - h_{i-1} in [1, c_i].
template <typename Fn>
void visit_lattice(std::span<const std::uint64_t> c, std::uint64_t lo,
                   std::uint64_t hi, Fn&& fn) {
  const int depth = static_cast<int>(c.size());
  std::vector<std::uint64_t> h(depth);
  auto rec = [&](auto&& self, int level) -> void {
    if (level == depth) {
      fn(std::span<const std::uint64_t>(h));
      return;
    }
    const std::uint64_t base = level == 0 ? 0 : h[level - 1];
    for (std::uint64_t d = 1; d <= c[level]; ++d) {
      h[level] = base + d;
      self(self, level + 1);
    }
  };
  if (depth == 0) return;
  for (std::uint64_t first = lo; first < hi; ++first) {
    h[0] = first;
    rec(rec, 1);
  }
}

struct LatticeSum {
  unsigned __int128 sum = 0;
  std::uint64_t points = 0;
};

struct EpsSqSum {
  double sum = 0.0;
  double carry = 0.0;
  std::uint64_t points = 0;
};

CorrelationReport correlate_impl(std::span<const TupleCounter> counters,
                                 const CorrelationBox& box, int threads,
                                 const char* method) {
  const int k = box.k();
  if (k < 2) throw std::invalid_argument("correlation: box needs k >= 2");
  long double q_ld = 1.0L, omega_ld = 1.0L;
  for (const auto& tc : counters) {
    if (tc.set().count() == 0)
      throw std::invalid_argument("correlation: empty component");
    q_ld *= static_cast<long double>(tc.set().modulus());
    omega_ld *= static_cast<long double>(tc.set().count());
  }
  const long double s = q_ld / omega_ld;
  const std::vector<std::uint64_t> c = lattice_bounds(box, s);

  CorrelationReport rep;
  rep.k = k;
  rep.box = box;
  rep.vol = box.vol();
  rep.method = method;
  if (std::any_of(c.begin(), c.end(), [](std::uint64_t v) { return v == 0; })) {
    rep.ratio = rep.vol > 0 ? 0.0 : 0.0;
    return rep;
  }

  auto chunk = [&](std::uint64_t lo, std::uint64_t hi) {
    LatticeSum part;
    std::vector<std::uint64_t> reduced(k - 1);
    visit_lattice(c, lo, hi, [&](std::span<const std::uint64_t> h) {
      unsigned __int128 prod = 1;
      for (const auto& tc : counters) {
        const std::uint64_t qi = tc.set().modulus();
        for (int i = 0; i < k - 1; ++i) reduced[i] = h[i] % qi;
        prod *= tc.count(reduced);
        if (prod == 0) break;
      }
      part.sum += prod;
      ++part.points;
    });
    return part;
  };
  const auto partials = parallel_chunks<LatticeSum>(1, c[0] + 1, threads, chunk);
  unsigned __int128 total = 0;
  for (const auto& p : partials) {
    total += p.sum;
    rep.lattice_points += p.points;
  }
  rep.r_value = static_cast<double>(static_cast<long double>(total) / omega_ld);
  rep.ratio = rep.vol > 0 ? rep.r_value / rep.vol : 0.0;
  return rep;
}

double strong_poisson_impl(std::span<const TupleCounter> counters,
                           const CorrelationBox& box, int threads) {
  const int k = box.k();
  if (k < 2) throw std::invalid_argument("strong_poisson_stat: box needs k >= 2");
  long double q_ld = 1.0L, omega_ld = 1.0L;
  for (const auto& tc : counters) {
    if (tc.set().count() == 0)
      throw std::invalid_argument("strong_poisson_stat: empty component");
    q_ld *= static_cast<long double>(tc.set().modulus());
    omega_ld *= static_cast<long double>(tc.set().count());
  }
  const long double s = q_ld / omega_ld;
  const std::vector<std::uint64_t> c = lattice_bounds(box, s);
  if (std::any_of(c.begin(), c.end(), [](std::uint64_t v) { return v == 0; }))
    return 0.0;

  // 1 + epsilon^{(i)} = N_i * scale_i
  std::vector<long double> scale(counters.size());
  for (std::size_t i = 0; i < counters.size(); ++i) {
    const auto& st = counters[i].set();
    scale[i] = std::pow(static_cast<long double>(st.modulus()), k - 1) /
               std::pow(static_cast<long double>(st.count()), k);
  }

  auto chunk = [&](std::uint64_t lo, std::uint64_t hi) {
    EpsSqSum part;
    KahanSum acc;
    std::vector<std::uint64_t> reduced(k - 1);
    visit_lattice(c, lo, hi, [&](std::span<const std::uint64_t> h) {
      long double one_plus = 1.0L;
      for (std::size_t i = 0; i < counters.size(); ++i) {
        const std::uint64_t qi = counters[i].set().modulus();
        for (int j = 0; j < k - 1; ++j) reduced[j] = h[j] % qi;
        one_plus *= static_cast<long double>(counters[i].count(reduced)) * scale[i];
      }
      const double eps = static_cast<double>(one_plus - 1.0L);
      acc.add(eps * eps);
      ++part.points;
    });
    part.sum = acc.sum;
    part.carry = acc.carry;
    return part;
  };
  const auto partials = parallel_chunks<EpsSqSum>(1, c[0] + 1, threads, chunk);
  KahanSum total;
  std::uint64_t points = 0;
  for (const auto& p : partials) {
    total.add(p.sum);
    points += p.points;
  }
  return points ? total.value() / static_cast<double>(points) : 0.0;
}

std::vector<TupleCounter> make_counters(std::span<const ResidueSet> components,
                                        int k) {
  std::vector<TupleCounter> counters;
  counters.reserve(components.size());
  for (const auto& comp : components) counters.emplace_back(comp, k);
  return counters;
}

}  // namespace

std::uint64_t count_tuples(const ResidueSet& set,
                           std::span<const std::uint64_t> offsets) {
  if (set.modulus() == 0) throw std::invalid_argument("count_tuples: empty set");
  if (set.dense() && set.modulus() >= 64) {
    DenseView view(set);
    return count_dense(view, set, offsets);
  }
  return count_sparse(set, offsets);
}

std::uint64_t count_tuples(const ResidueSet& set, const OffsetTuple& h) {
  return count_tuples(set, std::span<const std::uint64_t>(h.offsets));
}

std::uint64_t count_tuples_crt(std::span<const ResidueSet> components,
                               std::span<const std::uint64_t> offsets) {
  if (components.empty())
    throw std::invalid_argument("count_tuples_crt: no components");
  for (std::size_t i = 0; i < components.size(); ++i)
    for (std::size_t j = i + 1; j < components.size(); ++j)
      if (std::gcd(components[i].modulus(), components[j].modulus()) != 1)
        throw std::invalid_argument("count_tuples_crt: moduli not coprime");
  std::uint64_t prod = 1;
  std::vector<std::uint64_t> reduced(offsets.size());
  for (const auto& comp : components) {
    const std::uint64_t qi = comp.modulus();
    for (std::size_t i = 0; i < offsets.size(); ++i) reduced[i] = offsets[i] % qi;
    const std::uint64_t n = count_tuples(comp, reduced);
    if (n == 0) return 0;
    prod *= n;
  }
  return prod;
}

std::uint64_t count_tuples_crt(std::span<const ResidueSet> components,
                               const OffsetTuple& h) {
  return count_tuples_crt(components, std::span<const std::uint64_t>(h.offsets));
}

double epsilon_k(const ResidueSet& set, std::span<const std::uint64_t> offsets) {
  if (set.count() == 0) throw std::invalid_argument("epsilon_k: empty set");
  const std::uint64_t n = count_tuples(set, offsets);
  return eps_from_count(n, set.modulus(), set.count(),
                        static_cast<int>(offsets.size()) + 1);
}

double epsilon_k_crt(std::span<const ResidueSet> components,
                     std::span<const std::uint64_t> offsets) {
  long double one_plus = 1.0L;
  std::vector<std::uint64_t> reduced(offsets.size());
  for (const auto& comp : components) {
    if (comp.count() == 0) throw std::invalid_argument("epsilon_k_crt: empty component");
    const std::uint64_t qi = comp.modulus();
    for (std::size_t i = 0; i < offsets.size(); ++i) reduced[i] = offsets[i] % qi;
    one_plus *= 1.0L + static_cast<long double>(epsilon_k(comp, reduced));
  }
  return static_cast<double>(one_plus - 1.0L);
}

double e_k(std::span<const ResidueSet> components,
           std::span<const std::uint64_t> offsets, std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("e_k: d must be positive");
  if (d == 1) return 1.0;
  const Factorization fd = factorize(d);
  if (!fd.squarefree()) throw std::invalid_argument("e_k: d must be squarefree");
  long double prod = 1.0L;
  std::vector<std::uint64_t> reduced(offsets.size());
  for (std::uint64_t p : fd.primes()) {
    const ResidueSet* comp = nullptr;
    for (const auto& cs : components)
      if (cs.modulus() == p) {
        comp = &cs;
        break;
      }
    if (!comp) throw std::invalid_argument("e_k: no component for prime divisor");
    for (std::size_t i = 0; i < offsets.size(); ++i) reduced[i] = offsets[i] % p;
    prod *= static_cast<long double>(epsilon_k(*comp, reduced));
  }
  return static_cast<double>(prod);
}

std::vector<std::uint64_t> pair_count_table(const ResidueSet& set) {
  const std::uint64_t q = set.modulus();
  if (q == 0) throw std::invalid_argument("pair_count_table: empty set");
  std::vector<std::uint64_t> table(q, 0);
  const auto list = set.to_list();
  for (std::uint64_t a : list)
    for (std::uint64_t b : list) ++table[b >= a ? b - a : b + q - a];
  return table;
}

CorrelationReport correlation(const ResidueSet& set, const CorrelationBox& box,
                              int threads) {
  const TupleCounter counter(set, box.k());
  return correlate_impl(std::span<const TupleCounter>(&counter, 1), box,
                        threads, "direct");
}

CorrelationReport correlation(std::span<const ResidueSet> components,
                              const CorrelationBox& box, int threads) {
  const auto counters = make_counters(components, box.k());
  return correlate_impl(counters, box, threads, "crt-multiplicative");
}

double ks_exp_distance(const GapProfile& profile) {
  std::vector<double> d = profile.normalized();
  std::sort(d.begin(), d.end());
  const std::size_t m = d.size();
  double dist = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double f = 1.0 - std::exp(-d[i]);
    const double lo = static_cast<double>(i) / static_cast<double>(m);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(m);
    dist = std::max({dist, std::abs(hi - f), std::abs(lo - f)});
  }
  return dist;
}

std::vector<double> gap_value_histogram(const ResidueSet& set, int d_max) {
  if (d_max < 1) throw std::invalid_argument("gap_value_histogram: d_max >= 1");
  const GapProfile p = gaps(set);
  std::vector<double> out(d_max, 0.0);
  for (std::uint64_t g : p.raw_gaps)
    if (g >= 1 && g <= static_cast<std::uint64_t>(d_max)) out[g - 1] += 1.0;
  const double m = static_cast<double>(p.m());
  for (double& v : out) v /= m;
  return out;
}

double strong_poisson_stat(const ResidueSet& set, const CorrelationBox& box,
                           int threads) {
  const TupleCounter counter(set, box.k());
  return strong_poisson_impl(std::span<const TupleCounter>(&counter, 1), box,
                             threads);
}

double strong_poisson_stat(std::span<const ResidueSet> components,
                           const CorrelationBox& box, int threads) {
  const auto counters = make_counters(components, box.k());
  return strong_poisson_impl(counters, box, threads);
}

EpsSup eps_sup(const ResidueSet& set, int k, std::uint64_t budget,
               std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("eps_sup: k >= 2");
  if (set.count() == 0) throw std::invalid_argument("eps_sup: empty set");
  const std::uint64_t q = set.modulus();
  const TupleCounter counter(set, k);
  EpsSup result;

  // number of strictly increasing (k-1)-tuples in [1, q-1]
  long double total = 1.0L;
  for (int i = 0; i < k - 1; ++i)
    total = total * static_cast<long double>(q - 1 - i) / static_cast<long double>(i + 1);

  auto consider = [&](std::span<const std::uint64_t> h) {
    const double eps = eps_from_count(counter.count(h), q, set.count(), k);
    result.value = std::max(result.value, std::abs(eps));
    ++result.tuples_scanned;
  };

  if (total <= static_cast<long double>(budget)) {
    result.exact = true;
    std::vector<std::uint64_t> h(k - 1);
    auto rec = [&](auto&& self, int level, std::uint64_t lo) -> void {
      if (level == k - 1) {
        consider(h);
        return;
      }
      for (std::uint64_t v = lo; v <= q - 1 - (k - 2 - level); ++v) {
        h[level] = v;
        self(self, level + 1, v + 1);
      }
    };
    rec(rec, 0, 1);
  } else {
    result.exact = false;
    SplitMix64 rng(seed);
    std::vector<std::uint64_t> h(k - 1);
    for (std::uint64_t iter = 0; iter < budget; ++iter) {
      for (;;) {
        for (int i = 0; i < k - 1; ++i) h[i] = 1 + rng.next_below(q - 1);
        std::sort(h.begin(), h.end());
        if (std::adjacent_find(h.begin(), h.end()) == h.end()) break;
      }
      consider(h);
    }
  }
  return result;
}

}  // namespace crtspace
