#include "qcdense/groups.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>

#include "qcdense/errors.hpp"

namespace qcdense {

namespace {

constexpr std::uint64_t kModulusCap = std::uint64_t{1} << 62;

std::uint64_t checked_pow(std::uint64_t p, std::uint32_t e) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    if (r > kModulusCap / p) throw ArithmeticOverflow("prime power exceeds 2^62");
    r *= p;
  }
  return r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t mpz_mod_u64(const mpz_class& x, std::uint64_t m) {
  static_assert(sizeof(unsigned long) == 8);
  return mpz_fdiv_ui(x.get_mpz_t(), m);
}

// x mod m for signed 128-bit x.
std::uint64_t wide_mod(__int128 x, std::uint64_t m) {
  __int128 r = x % static_cast<__int128>(m);
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  __int128 t = 0, nt = 1, r = m, nr = a % m;
  while (nr != 0) {
    const __int128 q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw ClaimViolation("CRT moduli not coprime");
  return wide_mod(t, m);
}

std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_mpz(const mpz_class& z) {
  std::size_t h = static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 1);
  const std::size_t n = mpz_size(z.get_mpz_t());
  for (std::size_t i = 0; i < n; ++i) h = hash_mix(h, mpz_getlimbn(z.get_mpz_t(), i));
  return h;
}

const ResidueDigit* find_digit(const std::vector<ResidueDigit>& digits, std::uint64_t p) {
  auto it = std::lower_bound(digits.begin(), digits.end(), p,
                             [](const ResidueDigit& d, std::uint64_t q) { return d.prime < q; });
  return it != digits.end() && it->prime == p ? &*it : nullptr;
}

ProfiniteElem coerce(const mpz_class& m, const std::vector<ResidueDigit>& like) {
  std::vector<ResidueDigit> out;
  out.reserve(like.size());
  for (const auto& d : like) {
    const std::uint64_t mod = checked_pow(d.prime, d.exponent);
    out.push_back({d.prime, d.exponent, mpz_mod_u64(m, mod)});
  }
  return ProfiniteElem::residues(std::move(out));
}

ProfiniteElem profinite_add(const ProfiniteElem& x, const ProfiniteElem& y) {
  if (x.is_integer_point() && y.is_integer_point())
    return ProfiniteElem::integer(x.integer_value() + y.integer_value());
  if (x.is_integer_point()) return profinite_add(coerce(x.integer_value(), y.digits()), y);
  if (y.is_integer_point()) return profinite_add(x, coerce(y.integer_value(), x.digits()));
  const auto& a = x.digits();
  const auto& b = y.digits();
  if (a.size() != b.size()) throw PrecisionMismatch("residue towers cover different primes");
  std::vector<ResidueDigit> out;
  bool truncated = x.truncated() || y.truncated();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].prime != b[i].prime) throw PrecisionMismatch("residue towers cover different primes");
    const std::uint32_t e = std::min(a[i].exponent, b[i].exponent);
    truncated = truncated || a[i].exponent != b[i].exponent;
    const std::uint64_t mod = checked_pow(a[i].prime, e);
    out.push_back({a[i].prime, e, (a[i].residue % mod + b[i].residue % mod) % mod});
  }
  return ProfiniteElem::residues(std::move(out), truncated);
}

ProfiniteElem profinite_neg(const ProfiniteElem& x) {
  if (x.is_integer_point()) return ProfiniteElem::integer(-x.integer_value());
  std::vector<ResidueDigit> out = x.digits();
  for (auto& d : out) {
    const std::uint64_t mod = checked_pow(d.prime, d.exponent);
    d.residue = (mod - d.residue) % mod;
  }
  return ProfiniteElem::residues(std::move(out), x.truncated());
}

ProfiniteElem profinite_scale(const mpz_class& m, const ProfiniteElem& x) {
  if (x.is_integer_point()) return ProfiniteElem::integer(m * x.integer_value());
  std::vector<ResidueDigit> out = x.digits();
  for (auto& d : out) {
    const std::uint64_t mod = checked_pow(d.prime, d.exponent);
    d.residue = mulmod(mpz_mod_u64(m, mod), d.residue, mod);
  }
  return ProfiniteElem::residues(std::move(out), x.truncated());
}

std::size_t profinite_hash(const ProfiniteElem& x) {
  if (x.is_integer_point()) return hash_mpz(x.integer_value());
  std::size_t h = 0x51ed;
  for (const auto& d : x.digits()) {
    h = hash_mix(h, d.prime);
    h = hash_mix(h, d.exponent);
    h = hash_mix(h, d.residue);
  }
  return h;
}

const GroupDesc& part(const GroupDesc& g, std::size_t i) {
  if (i >= g.parts.size()) throw KindMismatch("product arity mismatch");
  return g.parts[i];
}

template <typename T>
const T& as(const Element& x, const char* what) {
  const T* p = std::get_if<T>(&x);
  if (p == nullptr) throw KindMismatch(std::string("element is not a ") + what);
  return *p;
}

std::uint32_t finite_power(const FiniteGroup& f, std::uint32_t a, const mpz_class& m) {
  const std::uint64_t ord = f.element_order(a);
  std::uint64_t e = mpz_mod_u64(m, ord);
  std::uint32_t r = f.identity();
  for (std::uint64_t i = 0; i < e; ++i) r = f.mul(r, a);
  return r;
}

}  // namespace

// ---- primes -------------------------------------------------------------------

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeList primes_below(std::uint64_t limit) {
  PrimeList out;
  if (limit < 3) return out;
  std::vector<bool> composite(limit, false);
  for (std::uint64_t i = 2; i < limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j < limit; j += i) composite[j] = true;
  }
  return out;
}

void validate_primes(const PrimeList& primes) {
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (!is_prime(primes[i])) throw InvalidArgument(std::to_string(primes[i]) + " is not prime");
    if (i > 0 && primes[i] <= primes[i - 1])
      throw InvalidArgument("prime list must be strictly increasing");
  }
}

// ---- descriptors ----------------------------------------------------------------

std::string_view kind_name(GroupKind kind) {
  switch (kind) {
    case GroupKind::Torus: return "torus";
    case GroupKind::Profinite: return "profinite";
    case GroupKind::Solenoid: return "solenoid";
    case GroupKind::Cyclic: return "cyclic";
    case GroupKind::Product: return "product";
    case GroupKind::ProductWithFinite: return "product_with_finite";
  }
  return "?";
}

GroupDesc GroupDesc::torus() { return GroupDesc{}; }

GroupDesc GroupDesc::profinite(PrimeList primes) {
  validate_primes(primes);
  GroupDesc g;
  g.kind = GroupKind::Profinite;
  g.primes = std::move(primes);
  return g;
}

GroupDesc GroupDesc::solenoid(PrimeList primes) {
  validate_primes(primes);
  GroupDesc g;
  g.kind = GroupKind::Solenoid;
  g.primes = std::move(primes);
  return g;
}

GroupDesc GroupDesc::cyclic(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("cyclic group order must be positive");
  GroupDesc g;
  g.kind = GroupKind::Cyclic;
  g.modulus = n;
  return g;
}

GroupDesc GroupDesc::product(std::vector<GroupDesc> parts) {
  if (parts.empty()) throw InvalidArgument("product needs at least one factor");
  GroupDesc g;
  g.kind = GroupKind::Product;
  g.parts = std::move(parts);
  return g;
}

GroupDesc GroupDesc::product_with_finite(GroupDesc abelian, FiniteGroupPtr finite,
                                         FiniteAbelianPtr abelianization) {
  if (!finite || !abelianization) throw InvalidArgument("finite factor missing");
  if (abelian.kind == GroupKind::ProductWithFinite)
    throw InvalidArgument("abelian factor must be abelian");
  GroupDesc g;
  g.kind = GroupKind::ProductWithFinite;
  g.parts.push_back(std::move(abelian));
  g.finite = std::move(finite);
  g.finite_ab = std::move(abelianization);
  return g;
}

bool operator==(const GroupDesc& a, const GroupDesc& b) {
  if (a.kind != b.kind || a.primes != b.primes || a.modulus != b.modulus || a.parts != b.parts)
    return false;
  if (a.kind != GroupKind::ProductWithFinite) return true;
  if (a.finite == b.finite) return true;
  return a.finite->order() == b.finite->order() &&
         std::ranges::equal(a.finite->table(), b.finite->table());
}

// ---- profinite elements ---------------------------------------------------------

ProfiniteElem ProfiniteElem::integer(mpz_class m) {
  ProfiniteElem e;
  e.rep_ = std::move(m);
  return e;
}

ProfiniteElem ProfiniteElem::residues(std::vector<ResidueDigit> digits, bool truncated) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const auto& d = digits[i];
    if (!is_prime(d.prime)) throw InvalidArgument("residue tower over non-prime");
    if (i > 0 && d.prime <= digits[i - 1].prime)
      throw InvalidArgument("residue tower primes must be strictly increasing");
    if (d.residue >= checked_pow(d.prime, d.exponent))
      throw InvalidArgument("residue out of range for prime power");
  }
  ProfiniteElem e;
  e.rep_ = Tower{std::move(digits), truncated};
  return e;
}

bool operator==(const ProfiniteElem& a, const ProfiniteElem& b) {
  if (a.is_integer_point() && b.is_integer_point()) return a.integer_value() == b.integer_value();
  if (a.is_integer_point() || b.is_integer_point()) {
    const auto& m = a.is_integer_point() ? a.integer_value() : b.integer_value();
    const auto& t = a.is_integer_point() ? b.digits() : a.digits();
    return std::ranges::all_of(t, [&](const ResidueDigit& d) {
      return mpz_mod_u64(m, checked_pow(d.prime, d.exponent)) == d.residue;
    });
  }
  // Compare on common primes at the shallower precision.
  for (const auto& d : a.digits()) {
    const ResidueDigit* o = find_digit(b.digits(), d.prime);
    if (o == nullptr) continue;
    const std::uint64_t mod = checked_pow(d.prime, std::min(d.exponent, o->exponent));
    if (d.residue % mod != o->residue % mod) return false;
  }
  return true;
}

SolenoidPoint::SolenoidPoint(mpq_class r, ProfiniteElem h) : r_(std::move(r)), h_(std::move(h)) {
  r_.canonicalize();
  if (h_.is_integer_point() && h_.integer_value() != 0) {
    r_ -= h_.integer_value();
    h_ = ProfiniteElem::integer(0);
  }
}

// ---- residues, k_n, W_n -------------------------------------------------------------

std::uint64_t residue_mod(const ProfiniteElem& h, std::uint64_t b) {
  if (b == 0) throw InvalidArgument("modulus must be positive");
  if (h.is_integer_point()) return mpz_mod_u64(h.integer_value(), b);
  std::uint64_t x = 0, modulus = 1;
  std::uint64_t rest = b;
  for (std::uint64_t p = 2; rest > 1; ++p) {
    if (p * p > rest) p = rest;
    if (rest % p != 0) continue;
    std::uint32_t e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    const ResidueDigit* d = find_digit(h.digits(), p);
    if (d == nullptr || d->exponent < e) throw InsufficientPrecision(p, e);
    const std::uint64_t pe = checked_pow(p, e);
    const std::uint64_t r = d->residue % pe;
    // Combine x (mod modulus) with r (mod pe).
    const std::uint64_t t = mulmod(wide_mod(static_cast<__int128>(r) - x, pe),
                                   inverse_mod(modulus % pe, pe), pe);
    x = static_cast<std::uint64_t>(x + static_cast<unsigned __int128>(modulus) * t);
    modulus *= pe;
  }
  return x;
}

ProfiniteElem to_residues(const ProfiniteElem& h, const PrimeList& primes, std::uint32_t exponent) {
  std::vector<ResidueDigit> out;
  for (std::uint64_t p : primes) {
    const std::uint64_t mod = checked_pow(p, exponent);
    if (h.is_integer_point()) {
      out.push_back({p, exponent, mpz_mod_u64(h.integer_value(), mod)});
      continue;
    }
    const ResidueDigit* d = find_digit(h.digits(), p);
    if (d == nullptr || d->exponent < exponent) throw InsufficientPrecision(p, exponent);
    out.push_back({p, exponent, d->residue % mod});
  }
  return ProfiniteElem::residues(std::move(out), h.truncated());
}

mpz_class k_sequence(const PrimeList& primes, std::size_t n) {
  if (n > primes.size())
    throw IndexOutOfRange("k_" + std::to_string(n) + " needs " + std::to_string(n) + " primes");
  mpz_class base = 1;
  for (std::size_t i = 0; i < n; ++i) base *= primes[i];
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), n);
  return out;
}

KSequence::KSequence(PrimeList primes) : primes_(std::move(primes)) {
  validate_primes(primes_);
  k_.reserve(primes_.size() + 1);
  for (std::size_t n = 0; n <= primes_.size(); ++n) k_.push_back(k_sequence(primes_, n));
}

const mpz_class& KSequence::k(std::size_t n) const {
  if (n >= k_.size())
    throw IndexOutOfRange("k_" + std::to_string(n) + " needs " + std::to_string(n) + " primes");
  return k_[n];
}

std::uint64_t KSequence::k_mod(std::size_t n, std::uint64_t b) const { return mpz_mod_u64(k(n), b); }

bool in_Wn(const ProfiniteElem& h, const PrimeList& primes, std::size_t n) {
  if (n > primes.size()) {
    std::uint64_t next = primes.empty() ? 2 : primes.back() + 1;
    while (!is_prime(next)) ++next;
    throw InsufficientPrecision(next, static_cast<std::uint32_t>(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t p = primes[i];
    if (h.is_integer_point()) {
      mpz_class pn;
      mpz_ui_pow_ui(pn.get_mpz_t(), p, n);
      if (!mpz_divisible_p(h.integer_value().get_mpz_t(), pn.get_mpz_t())) return false;
      continue;
    }
    const ResidueDigit* d = find_digit(h.digits(), p);
    if (d == nullptr || d->exponent < n) throw InsufficientPrecision(p, static_cast<std::uint32_t>(n));
    if (d->residue % checked_pow(p, static_cast<std::uint32_t>(n)) != 0) return false;
  }
  return true;
}

// ---- group law ----------------------------------------------------------------------

Element group_zero(const GroupDesc& g) {
  switch (g.kind) {
    case GroupKind::Torus: return UnitRational{};
    case GroupKind::Profinite: return ProfiniteElem::integer(0);
    case GroupKind::Solenoid: return SolenoidPoint{};
    case GroupKind::Cyclic: return CyclicElem{0};
    case GroupKind::Product: {
      ProductElem p;
      for (const auto& c : g.parts) p.coords.push_back(group_zero(c));
      return p;
    }
    case GroupKind::ProductWithFinite:
      return WithFiniteElem{group_zero(g.abelian_part()), g.finite->identity()};
  }
  throw KindMismatch("unknown group kind");
}

Element group_add(const GroupDesc& g, const Element& x, const Element& y) {
  switch (g.kind) {
    case GroupKind::Torus:
      return circle_add(as<UnitRational>(x, "torus point"), as<UnitRational>(y, "torus point"));
    case GroupKind::Profinite:
      return profinite_add(as<ProfiniteElem>(x, "profinite element"),
                           as<ProfiniteElem>(y, "profinite element"));
    case GroupKind::Solenoid: {
      const auto& a = as<SolenoidPoint>(x, "solenoid point");
      const auto& b = as<SolenoidPoint>(y, "solenoid point");
      return SolenoidPoint(a.r() + b.r(), profinite_add(a.h(), b.h()));
    }
    case GroupKind::Cyclic: {
      const auto a = as<CyclicElem>(x, "cyclic element").value;
      const auto b = as<CyclicElem>(y, "cyclic element").value;
      return CyclicElem{static_cast<std::uint64_t>(
          (static_cast<unsigned __int128>(a) + b) % g.modulus)};
    }
    case GroupKind::Product: {
      const auto& a = as<ProductElem>(x, "tuple");
      const auto& b = as<ProductElem>(y, "tuple");
      if (a.coords.size() != g.parts.size() || b.coords.size() != g.parts.size())
        throw KindMismatch("product arity mismatch");
      ProductElem out;
      for (std::size_t i = 0; i < g.parts.size(); ++i)
        out.coords.push_back(group_add(g.parts[i], a.coords[i], b.coords[i]));
      return out;
    }
    case GroupKind::ProductWithFinite: {
      const auto& a = as<WithFiniteElem>(x, "finite-factor pair");
      const auto& b = as<WithFiniteElem>(y, "finite-factor pair");
      return WithFiniteElem{group_add(g.abelian_part(), *a.abelian, *b.abelian),
                            g.finite->mul(a.finite, b.finite)};
    }
  }
  throw KindMismatch("unknown group kind");
}

Element group_neg(const GroupDesc& g, const Element& x) {
  switch (g.kind) {
    case GroupKind::Torus: return circle_neg(as<UnitRational>(x, "torus point"));
    case GroupKind::Profinite: return profinite_neg(as<ProfiniteElem>(x, "profinite element"));
    case GroupKind::Solenoid: {
      const auto& a = as<SolenoidPoint>(x, "solenoid point");
      return SolenoidPoint(-a.r(), profinite_neg(a.h()));
    }
    case GroupKind::Cyclic: {
      const auto a = as<CyclicElem>(x, "cyclic element").value;
      return CyclicElem{a == 0 ? 0 : g.modulus - a};
    }
    case GroupKind::Product: {
      const auto& a = as<ProductElem>(x, "tuple");
      ProductElem out;
      for (std::size_t i = 0; i < a.coords.size(); ++i)
        out.coords.push_back(group_neg(part(g, i), a.coords[i]));
      return out;
    }
    case GroupKind::ProductWithFinite: {
      const auto& a = as<WithFiniteElem>(x, "finite-factor pair");
      return WithFiniteElem{group_neg(g.abelian_part(), *a.abelian), g.finite->inv(a.finite)};
    }
  }
  throw KindMismatch("unknown group kind");
}

Element group_scale(const GroupDesc& g, const mpz_class& m, const Element& x) {
  switch (g.kind) {
    case GroupKind::Torus: return circle_scale(m, as<UnitRational>(x, "torus point"));
    case GroupKind::Profinite: return profinite_scale(m, as<ProfiniteElem>(x, "profinite element"));
    case GroupKind::Solenoid: {
      const auto& a = as<SolenoidPoint>(x, "solenoid point");
      return SolenoidPoint(mpq_class(a.r() * m), profinite_scale(m, a.h()));
    }
    case GroupKind::Cyclic: {
      const auto a = as<CyclicElem>(x, "cyclic element").value;
      return CyclicElem{mulmod(mpz_mod_u64(m, g.modulus), a, g.modulus)};
    }
    case GroupKind::Product: {
      const auto& a = as<ProductElem>(x, "tuple");
      ProductElem out;
      for (std::size_t i = 0; i < a.coords.size(); ++i)
        out.coords.push_back(group_scale(part(g, i), m, a.coords[i]));
      return out;
    }
    case GroupKind::ProductWithFinite: {
      const auto& a = as<WithFiniteElem>(x, "finite-factor pair");
      return WithFiniteElem{group_scale(g.abelian_part(), m, *a.abelian),
                            finite_power(*g.finite, a.finite, m)};
    }
  }
  throw KindMismatch("unknown group kind");
}

bool group_equal(const GroupDesc& g, const Element& x, const Element& y) {
  switch (g.kind) {
    case GroupKind::Torus:
      return as<UnitRational>(x, "torus point") == as<UnitRational>(y, "torus point");
    case GroupKind::Profinite:
      return as<ProfiniteElem>(x, "profinite element") == as<ProfiniteElem>(y, "profinite element");
    case GroupKind::Solenoid: {
      const auto& a = as<SolenoidPoint>(x, "solenoid point");
      const auto& b = as<SolenoidPoint>(y, "solenoid point");
      // Equal iff the difference is an integer multiple k*u = (k, k v).
      const mpq_class dr = a.r() - b.r();
      if (dr.get_den() != 1) return false;
      return profinite_add(a.h(), profinite_neg(b.h())) == ProfiniteElem::integer(dr.get_num());
    }
    case GroupKind::Cyclic:
      return as<CyclicElem>(x, "cyclic element") == as<CyclicElem>(y, "cyclic element");
    case GroupKind::Product: {
      const auto& a = as<ProductElem>(x, "tuple");
      const auto& b = as<ProductElem>(y, "tuple");
      if (a.coords.size() != b.coords.size()) return false;
      for (std::size_t i = 0; i < a.coords.size(); ++i)
        if (!group_equal(part(g, i), a.coords[i], b.coords[i])) return false;
      return true;
    }
    case GroupKind::ProductWithFinite: {
      const auto& a = as<WithFiniteElem>(x, "finite-factor pair");
      const auto& b = as<WithFiniteElem>(y, "finite-factor pair");
      return a.finite == b.finite && group_equal(g.abelian_part(), *a.abelian, *b.abelian);
    }
  }
  throw KindMismatch("unknown group kind");
}

std::size_t element_hash(const Element& x) {
  return std::visit(
      [](const auto& e) -> std::size_t {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, UnitRational>) {
          return hash_mix(static_cast<std::size_t>(e.num()), static_cast<std::size_t>(e.den()));
        } else if constexpr (std::is_same_v<T, ProfiniteElem>) {
          return profinite_hash(e);
        } else if constexpr (std::is_same_v<T, SolenoidPoint>) {
          if (e.h().is_integer_point())
            return hash_mix(hash_mpz(e.r().get_num()), hash_mpz(e.r().get_den()));
          // Shift by -floor(r) u so the real part lies in [0,1).
          mpz_class fl;
          mpz_fdiv_q(fl.get_mpz_t(), e.r().get_num_mpz_t(), e.r().get_den_mpz_t());
          const mpq_class frac = e.r() - fl;
          const ProfiniteElem h = profinite_add(e.h(), ProfiniteElem::integer(-fl));
          return hash_mix(hash_mix(hash_mpz(frac.get_num()), hash_mpz(frac.get_den())),
                          profinite_hash(h));
        } else if constexpr (std::is_same_v<T, CyclicElem>) {
          return std::hash<std::uint64_t>{}(e.value);
        } else if constexpr (std::is_same_v<T, ProductElem>) {
          std::size_t h = 0x7a11;
          for (const auto& c : e.coords) h = hash_mix(h, element_hash(c));
          return h;
        } else {
          return hash_mix(element_hash(*e.abelian), e.finite);
        }
      },
      x);
}

void check_element(const GroupDesc& g, const Element& x) {
  switch (g.kind) {
    case GroupKind::Torus: (void)as<UnitRational>(x, "torus point"); return;
    case GroupKind::Profinite: {
      const auto& h = as<ProfiniteElem>(x, "profinite element");
      if (!h.is_integer_point())
        for (const auto& d : h.digits())
          if (!std::ranges::binary_search(g.primes, d.prime))
            throw KindMismatch("residue tower prime outside the group's prime list");
      return;
    }
    case GroupKind::Solenoid: {
      const auto& s = as<SolenoidPoint>(x, "solenoid point");
      check_element(GroupDesc::profinite(g.primes), s.h());
      return;
    }
    case GroupKind::Cyclic:
      if (as<CyclicElem>(x, "cyclic element").value >= g.modulus)
        throw KindMismatch("cyclic element out of range");
      return;
    case GroupKind::Product: {
      const auto& p = as<ProductElem>(x, "tuple");
      if (p.coords.size() != g.parts.size()) throw KindMismatch("product arity mismatch");
      for (std::size_t i = 0; i < p.coords.size(); ++i) check_element(g.parts[i], p.coords[i]);
      return;
    }
    case GroupKind::ProductWithFinite: {
      const auto& p = as<WithFiniteElem>(x, "finite-factor pair");
      if (p.finite >= g.finite->order()) throw KindMismatch("finite element index out of range");
      check_element(g.abelian_part(), *p.abelian);
      return;
    }
  }
}

std::string to_string(const Element& x) {
  return std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, UnitRational>) {
          return e.to_string();
        } else if constexpr (std::is_same_v<T, ProfiniteElem>) {
          if (e.is_integer_point()) return e.integer_value().get_str() + "v";
          std::ostringstream os;
          os << "[";
          for (std::size_t i = 0; i < e.digits().size(); ++i) {
            const auto& d = e.digits()[i];
            os << (i ? ", " : "") << d.residue << " mod " << d.prime << "^" << d.exponent;
          }
          os << "]";
          return os.str();
        } else if constexpr (std::is_same_v<T, SolenoidPoint>) {
          return "pi(" + e.r().get_str() + ", " + to_string(Element{e.h()}) + ")";
        } else if constexpr (std::is_same_v<T, CyclicElem>) {
          return std::to_string(e.value);
        } else if constexpr (std::is_same_v<T, ProductElem>) {
          std::string s = "(";
          for (std::size_t i = 0; i < e.coords.size(); ++i)
            s += (i ? ", " : "") + to_string(e.coords[i]);
          return s + ")";
        } else {
          return "(" + to_string(*e.abelian) + ", #" + std::to_string(e.finite) + ")";
        }
      },
      x);
}

}  // namespace qcdense
