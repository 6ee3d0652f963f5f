#include "crtspace/residue_set.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <string_view>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "crtspace/arith.hpp"
#include "crtspace/rng.hpp"

namespace crtspace {

FamilySpec FamilySpec::units() { return {}; }

FamilySpec FamilySpec::squares() {
  FamilySpec f;
  f.kind = Kind::squares;
  return f;
}

FamilySpec FamilySpec::dth_powers(std::uint64_t d) {
  if (d < 1) throw std::invalid_argument("dth_powers: d must be >= 1");
  FamilySpec f;
  f.kind = Kind::dth_powers;
  f.d = d;
  return f;
}

FamilySpec FamilySpec::poly_image(std::vector<std::int64_t> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  if (coeffs.size() < 2)
    throw std::invalid_argument("poly_image: degree must be >= 1");
  FamilySpec f;
  f.kind = Kind::poly_image;
  f.coeffs = std::move(coeffs);
  return f;
}

FamilySpec FamilySpec::curve(std::int64_t a, std::int64_t b) {
  FamilySpec f;
  f.kind = Kind::curve;
  f.a = a;
  f.b = b;
  return f;
}

FamilySpec FamilySpec::interval(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("interval: n must be >= 1");
  FamilySpec f;
  f.kind = Kind::interval;
  f.n = n;
  return f;
}

FamilySpec FamilySpec::multiples(std::uint64_t m, double density,
                                 std::uint64_t seed) {
  if (m == 0) throw std::invalid_argument("multiples: m must be >= 1");
  FamilySpec f;
  f.kind = Kind::multiples;
  f.m = m;
  f.density = density;
  f.seed = seed;
  return f;
}

FamilySpec FamilySpec::bernoulli(double sigma, std::uint64_t seed) {
  if (!(sigma > 1.0)) throw std::invalid_argument("bernoulli: sigma must be > 1");
  FamilySpec f;
  f.kind = Kind::bernoulli;
  f.sigma = sigma;
  f.seed = seed;
  return f;
}

FamilySpec FamilySpec::explicit_list(std::vector<std::uint64_t> members) {
  FamilySpec f;
  f.kind = Kind::explicit_list;
  f.members = std::move(members);
  return f;
}

bool FamilySpec::per_prime() const {
  switch (kind) {
    case Kind::units:
    case Kind::squares:
    case Kind::dth_powers:
    case Kind::poly_image:
    case Kind::curve:
      return true;
    default:
      return false;
  }
}

std::string FamilySpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::units: os << "units"; break;
    case Kind::squares: os << "squares"; break;
    case Kind::dth_powers: os << "dth_powers(" << d << ")"; break;
    case Kind::poly_image: {
      os << "poly_image(";
      for (std::size_t i = 0; i < coeffs.size(); ++i)
        os << (i ? "," : "") << coeffs[i];
      os << ")";
      break;
    }
    case Kind::curve: os << "curve(" << a << "," << b << ")"; break;
    case Kind::interval: os << "interval(" << n << ")"; break;
    case Kind::multiples:
      os << "multiples(" << m << ",density=" << density << ",seed=" << seed << ")";
      break;
    case Kind::bernoulli:
      os << "bernoulli(sigma=" << sigma << ",seed=" << seed << ")";
      break;
    case Kind::explicit_list: os << "explicit(" << members.size() << ")"; break;
  }
  return os.str();
}

ResidueSet ResidueSet::from_sorted(std::uint64_t q,
                                   std::vector<std::uint64_t> members,
                                   std::string provenance) {
  if (q == 0) throw std::invalid_argument("ResidueSet: modulus must be positive");
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] >= q || (i && members[i] <= members[i - 1]))
      throw std::invalid_argument("ResidueSet: members must be strictly increasing and < q");
  }
  ResidueSet s;
  s.q_ = q;
  s.count_ = members.size();
  s.provenance_ = std::move(provenance);
  s.dense_ = s.count_ * 64 > q;  // count/q > 1/64
  if (s.dense_) {
    s.bits_.assign((q + 63) / 64, 0);
    for (std::uint64_t x : members) s.bits_[x >> 6] |= 1ULL << (x & 63);
  } else {
    s.list_ = std::move(members);
  }
  return s;
}

bool ResidueSet::contains(std::uint64_t x) const {
  if (dense_) return (bits_[x >> 6] >> (x & 63)) & 1;
  return std::binary_search(list_.begin(), list_.end(), x);
}

std::vector<std::uint64_t> ResidueSet::to_list() const {
  if (!dense_) return list_;
  std::vector<std::uint64_t> out;
  out.reserve(count_);
  for (std::uint64_t w = 0; w < bits_.size(); ++w) {
    std::uint64_t word = bits_[w];
    while (word) {
      const int bit = std::countr_zero(word);
      out.push_back(w * 64 + bit);
      word &= word - 1;
    }
  }
  return out;
}

double ResidueSet::density_r() const {
  return static_cast<double>(count_) / static_cast<double>(q_);
}

double ResidueSet::spacing_s() const {
  return static_cast<double>(q_) / static_cast<double>(count_);
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error("CRSP: truncated input");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw std::runtime_error("CRSP: truncated input");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void ResidueSet::write(std::ostream& out) const {
  out.write("CRSP", 4);
  put_u32(out, 1);
  put_u64(out, q_);
  put_u64(out, count_);
  out.put(dense_ ? '\0' : '\1');
  if (dense_) {
    const std::uint64_t nbytes = (q_ + 7) / 8;
    for (std::uint64_t i = 0; i < nbytes; ++i) {
      const std::uint64_t word = bits_[i >> 3];
      out.put(static_cast<char>((word >> (8 * (i & 7))) & 0xff));
    }
  } else {
    for (std::uint64_t x : list_) put_u64(out, x);
  }
}

ResidueSet ResidueSet::read(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string_view(magic, 4) != "CRSP")
    throw std::runtime_error("CRSP: bad magic");
  if (get_u32(in) != 1) throw std::runtime_error("CRSP: unsupported version");
  const std::uint64_t q = get_u64(in);
  const std::uint64_t count = get_u64(in);
  const int flag = in.get();
  if (flag != 0 && flag != 1) throw std::runtime_error("CRSP: bad representation flag");
  ResidueSet s;
  s.q_ = q;
  s.count_ = count;
  if (flag == 0) {
    s.dense_ = true;
    s.bits_.assign((q + 63) / 64, 0);
    const std::uint64_t nbytes = (q + 7) / 8;
    for (std::uint64_t i = 0; i < nbytes; ++i) {
      const int c = in.get();
      if (c == EOF) throw std::runtime_error("CRSP: truncated bitmap");
      s.bits_[i >> 3] |= static_cast<std::uint64_t>(c) << (8 * (i & 7));
    }
    std::uint64_t pop = 0;
    for (std::uint64_t w : s.bits_) pop += std::popcount(w);
    if (pop != count) throw std::runtime_error("CRSP: population count mismatch");
  } else {
    s.dense_ = false;
    s.list_.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      s.list_[i] = get_u64(in);
      if (s.list_[i] >= q || (i && s.list_[i] <= s.list_[i - 1]))
        throw std::runtime_error("CRSP: residue list not strictly increasing");
    }
  }
  return s;
}

namespace {

ResidueSet from_membership(std::uint64_t q, const std::vector<bool>& in_set,
                           std::string prov) {
  std::vector<std::uint64_t> members;
  for (std::uint64_t x = 0; x < q; ++x)
    if (in_set[x]) members.push_back(x);
  return ResidueSet::from_sorted(q, std::move(members), std::move(prov));
}

std::uint64_t eval_poly_mod(std::span<const std::int64_t> coeffs,
                            std::uint64_t x, std::uint64_t p) {
  std::uint64_t acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    std::int64_t c = coeffs[i] % static_cast<std::int64_t>(p);
    if (c < 0) c += static_cast<std::int64_t>(p);
    acc = (mulmod(acc, x, p) + static_cast<std::uint64_t>(c)) % p;
  }
  return acc;
}

ResidueSet gen_direct(const FamilySpec& family, std::uint64_t q) {
  switch (family.kind) {
    case FamilySpec::Kind::interval: {
      if (family.n > q)
        throw std::invalid_argument("interval: n must be <= q");
      std::vector<std::uint64_t> members(family.n);
      // {1..q} mod q is every residue; otherwise the interval stays in range
      std::iota(members.begin(), members.end(), family.n == q ? 0 : 1);
      return ResidueSet::from_sorted(q, std::move(members), family.describe());
    }
    case FamilySpec::Kind::multiples: {
      // multiples of m in [1, q], drawn with the given probability; q maps to 0
      std::vector<std::uint64_t> members;
      std::uint64_t index = 0;
      for (std::uint64_t x = family.m; x <= q; x += family.m, ++index) {
        if (bernoulli_member(family.seed, index, family.density))
          members.push_back(x % q);
      }
      std::sort(members.begin(), members.end());
      return ResidueSet::from_sorted(q, std::move(members), family.describe());
    }
    case FamilySpec::Kind::bernoulli: {
      std::vector<std::uint64_t> members;
      const double prob = 1.0 / family.sigma;
      for (std::uint64_t x = 0; x < q; ++x)
        if (bernoulli_member(family.seed, x, prob)) members.push_back(x);
      return ResidueSet::from_sorted(q, std::move(members), family.describe());
    }
    case FamilySpec::Kind::explicit_list: {
      std::vector<std::uint64_t> members = family.members;
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
      return ResidueSet::from_sorted(q, std::move(members), family.describe());
    }
    default:
      throw std::logic_error("gen_direct: not a direct family");
  }
}

}  // namespace

ResidueSet gen_prime_set(const FamilySpec& family, std::uint64_t p) {
  if (!family.per_prime()) return gen_direct(family, p);
  if (!is_prime(p))
    throw std::invalid_argument("gen_prime_set: modulus must be prime");
  switch (family.kind) {
    case FamilySpec::Kind::units: {
      std::vector<std::uint64_t> members(p - 1);
      std::iota(members.begin(), members.end(), 1);
      return ResidueSet::from_sorted(p, std::move(members), family.describe());
    }
    case FamilySpec::Kind::squares: {
      // nonzero quadratic residues, |Omega_p| = (p-1)/2
      if (p == 2)
        throw std::invalid_argument("squares: p must be an odd prime");
      std::vector<bool> mark(p, false);
      for (std::uint64_t y = 1; y < p; ++y) mark[mulmod(y, y, p)] = true;
      mark[0] = false;
      return from_membership(p, mark, family.describe());
    }
    case FamilySpec::Kind::dth_powers: {
      std::vector<bool> mark(p, false);
      for (std::uint64_t y = 1; y < p; ++y) mark[powmod(y, family.d, p)] = true;
      return from_membership(p, mark, family.describe());
    }
    case FamilySpec::Kind::poly_image: {
      std::vector<bool> mark(p, false);
      for (std::uint64_t y = 0; y < p; ++y)
        mark[eval_poly_mod(family.coeffs, y, p)] = true;
      return from_membership(p, mark, family.describe());
    }
    case FamilySpec::Kind::curve: {
      // x with x^3 + ax + b a square (or zero) mod p
      const std::uint64_t pm = p;
      auto rm = [&](std::int64_t v) {
        std::int64_t r = v % static_cast<std::int64_t>(pm);
        return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(pm) : r);
      };
      const std::uint64_t a = rm(family.a), b = rm(family.b);
      // nonsingular: 4a^3 + 27b^2 != 0 mod p
      const std::uint64_t disc =
          (mulmod(4, mulmod(a, mulmod(a, a, p), p), p) +
           mulmod(27, mulmod(b, b, p), p)) % p;
      if (disc == 0)
        throw std::invalid_argument("curve: singular curve mod p");
      std::vector<bool> issq(p, false);
      issq[0] = true;
      for (std::uint64_t y = 1; y < p; ++y) issq[mulmod(y, y, p)] = true;
      std::vector<bool> mark(p, false);
      for (std::uint64_t x = 0; x < p; ++x) {
        const std::uint64_t v =
            (mulmod(x, mulmod(x, x, p), p) + mulmod(a, x, p) + b) % p;
        mark[x] = issq[v];
      }
      return from_membership(p, mark, family.describe());
    }
    default:
      throw std::logic_error("unreachable");
  }
}

ResidueSet crt_compose(std::span<const ResidueSet> components,
                       std::uint64_t materialization_cap) {
  if (components.empty())
    throw std::invalid_argument("crt_compose: no components");
  unsigned __int128 q = 1;
  for (const auto& c : components) {
    for (const auto& d : components) {
      if (&c != &d && std::gcd(c.modulus(), d.modulus()) != 1)
        throw std::invalid_argument("crt_compose: moduli not pairwise coprime");
    }
    q *= c.modulus();
  }
  if (q > materialization_cap)
    throw std::invalid_argument(
        "crt_compose: product exceeds materialization cap; use the "
        "CRT-multiplicative correlation path on the component list instead");
  const std::uint64_t qq = static_cast<std::uint64_t>(q);

  std::vector<std::uint64_t> members = components[0].to_list();
  std::uint64_t mod = components[0].modulus();
  for (std::size_t i = 1; i < components.size(); ++i) {
    const auto next = components[i].to_list();
    const std::uint64_t mi = components[i].modulus();
    std::vector<std::uint64_t> merged;
    merged.reserve(members.size() * next.size());
    for (std::uint64_t x : members) {
      for (std::uint64_t y : next) {
        const std::pair<std::uint64_t, std::uint64_t> prs[] = {{x, mod}, {y, mi}};
        merged.push_back(crt_lift(prs));
      }
    }
    members = std::move(merged);
    mod *= mi;
  }
  std::sort(members.begin(), members.end());
  std::string prov = components[0].provenance();
  return ResidueSet::from_sorted(qq, std::move(members), std::move(prov));
}

ResidueSet gen_set(const FamilySpec& family, std::uint64_t q,
                   std::uint64_t materialization_cap) {
  if (!family.per_prime()) return gen_direct(family, q);
  if (is_prime(q)) return gen_prime_set(family, q);
  const Factorization f = factorize(q);
  if (!f.squarefree())
    throw std::invalid_argument("gen_set: modulus must be squarefree");
  std::vector<ResidueSet> parts;
  for (auto [p, e] : f.factors) parts.push_back(gen_prime_set(family, p));
  return crt_compose(parts, materialization_cap);
}

SetStats stats(const ResidueSet& set) {
  if (set.count() == 0) throw std::invalid_argument("stats: empty set");
  return {set.density_r(), set.spacing_s()};
}

}  // namespace crtspace
