#include "qcdense/duality.hpp"

#include <algorithm>
#include <numeric>

#include "qcdense/errors.hpp"

namespace qcdense {

namespace {

constexpr std::size_t kProductEnumerationLimit = 2'000'000;

std::uint64_t umod(std::int64_t a, std::uint64_t m) {
  const std::int64_t r = static_cast<std::int64_t>(a % static_cast<std::int64_t>(m));
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

template <typename T>
const T& as_char(const Character& chi, const char* what) {
  const T* p = std::get_if<T>(&chi);
  if (p == nullptr) throw KindMismatch(std::string("character is not a ") + what + " character");
  return *p;
}

template <typename T>
const T& as_elem(const Element& x, const char* what) {
  const T* p = std::get_if<T>(&x);
  if (p == nullptr) throw KindMismatch(std::string("element is not a ") + what);
  return *p;
}

UnitRational eval_solenoid(const SolenoidChar& c, const SolenoidPoint& x) {
  UnitRational real_part;
  const mpz_class& rn = x.r().get_num();
  const mpz_class& rd = x.r().get_den();
  constexpr std::uint64_t kCap = std::uint64_t{1} << 62;
  if (rd.fits_ulong_p() && rd.get_ui() <= kCap / static_cast<std::uint64_t>(c.b)) {
    const std::uint64_t m = rd.get_ui() * static_cast<std::uint64_t>(c.b);
    const std::uint64_t t = mpz_fdiv_ui(rn.get_mpz_t(), m);
    real_part = UnitRational(static_cast<std::int64_t>(mulmod(umod(c.a, m), t, m)),
                             static_cast<std::int64_t>(m));
  } else {
    real_part = phi(mpq_class(x.r() * mpq_class(c.a, c.b)));
  }
  if (c.b == 1) return real_part;
  const std::uint64_t b = static_cast<std::uint64_t>(c.b);
  const std::uint64_t hb = residue_mod(x.h(), b);
  const UnitRational h_part(static_cast<std::int64_t>(mulmod(umod(c.a, b), hb, b)), c.b);
  return circle_add(real_part, circle_neg(h_part));
}

std::strong_ordering compare_same_kind(const Character& a, const Character& b) {
  return std::visit(
      [&](const auto& x) -> std::strong_ordering {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, TorusChar>) {
          return y.m <=> x.m;  // equal |m|: positive first
        } else if constexpr (std::is_same_v<T, ProfiniteChar>) {
          if (auto c = x.q.den() <=> y.q.den(); c != 0) return c;
          return x.q.num() <=> y.q.num();
        } else if constexpr (std::is_same_v<T, SolenoidChar>) {
          if (auto c = x.a <=> y.a; c != 0) return c;
          return x.b <=> y.b;
        } else if constexpr (std::is_same_v<T, CyclicChar>) {
          return x.k <=> y.k;
        } else if constexpr (std::is_same_v<T, ProductChar>) {
          const std::size_t n = std::min(x.components.size(), y.components.size());
          for (std::size_t i = 0; i < n; ++i)
            if (auto c = compare_chars(x.components[i], y.components[i]); c != 0) return c;
          return x.components.size() <=> y.components.size();
        } else {
          if (auto c = compare_chars(*x.abelian, *y.abelian); c != 0) return c;
          return x.zeta <=> y.zeta;
        }
      },
      a);
}

bool prime_factors_within(std::uint64_t b, const PrimeList& primes) {
  for (std::uint64_t p : primes) {
    while (b % p == 0) b /= p;
    if (b == 1) return true;
  }
  return b == 1;
}

// Characters of one group up to the bound, preceded by the trivial one.
std::vector<Character> with_trivial(const GroupDesc& g, Complexity bound, DualScope scope) {
  std::vector<Character> out{trivial_character(g)};
  for_each_char(g, bound, scope, [&](const Character& c) {
    out.push_back(c);
    if (out.size() > kProductEnumerationLimit)
      throw SizeLimit("character enumeration exceeds limit; use the leading-component sweep");
    return true;
  });
  return out;
}

bool sorted_visit(std::vector<Character>& cs, const std::function<bool(const Character&)>& visit) {
  std::ranges::stable_sort(cs, [](const Character& a, const Character& b) {
    return compare_chars(a, b) < 0;
  });
  for (const auto& c : cs)
    if (!visit(c)) return false;
  return true;
}

}  // namespace

SolenoidChar solenoid_char(std::int64_t a, std::int64_t b) {
  if (b == 0) throw InvalidArgument("zero denominator");
  if (b < 0) {
    a = -a;
    b = -b;
  }
  const std::int64_t g = std::gcd(a, b);
  return SolenoidChar{a / g, b / g};
}

Complexity::Complexity(std::uint64_t bound) : bound_(bound) {
  if (bound_ == 0) throw InvalidArgument("complexity bound must be at least 1");
}

bool is_smooth_over(std::uint64_t b, const PrimeList& primes) {
  return b >= 1 && prime_factors_within(b, primes);
}

Character trivial_character(const GroupDesc& g) {
  switch (g.kind) {
    case GroupKind::Torus: return TorusChar{0};
    case GroupKind::Profinite: return ProfiniteChar{};
    case GroupKind::Solenoid: return SolenoidChar{0, 1};
    case GroupKind::Cyclic: return CyclicChar{0};
    case GroupKind::Product: {
      ProductChar p;
      for (const auto& c : g.parts) p.components.push_back(trivial_character(c));
      return p;
    }
    case GroupKind::ProductWithFinite:
      return WithFiniteChar{trivial_character(g.abelian_part()),
                            std::vector<std::uint64_t>(g.finite_ab->factors.size(), 0)};
  }
  throw KindMismatch("unknown group kind");
}

bool is_trivial(const Character& chi) { return complexity(chi) == 0; }

std::uint64_t complexity(const Character& chi) {
  return std::visit(
      [](const auto& c) -> std::uint64_t {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TorusChar>) {
          return static_cast<std::uint64_t>(c.m < 0 ? -c.m : c.m);
        } else if constexpr (std::is_same_v<T, ProfiniteChar>) {
          return c.q.is_zero() ? 0 : static_cast<std::uint64_t>(c.q.den());
        } else if constexpr (std::is_same_v<T, SolenoidChar>) {
          if (c.a == 0) return 0;
          return static_cast<std::uint64_t>(std::max(c.a < 0 ? -c.a : c.a, c.b));
        } else if constexpr (std::is_same_v<T, CyclicChar>) {
          return c.k == 0 ? 0 : 1;
        } else if constexpr (std::is_same_v<T, ProductChar>) {
          std::uint64_t m = 0;
          for (const auto& x : c.components) m = std::max(m, complexity(x));
          return m;
        } else {
          const bool zeta_nonzero = std::ranges::any_of(c.zeta, [](auto z) { return z != 0; });
          return std::max<std::uint64_t>(complexity(*c.abelian), zeta_nonzero ? 1 : 0);
        }
      },
      chi);
}

std::strong_ordering compare_chars(const Character& a, const Character& b) {
  if (auto c = complexity(a) <=> complexity(b); c != 0) return c;
  if (auto c = a.index() <=> b.index(); c != 0) return c;
  return compare_same_kind(a, b);
}

void check_character(const GroupDesc& g, const Character& chi) {
  switch (g.kind) {
    case GroupKind::Torus: (void)as_char<TorusChar>(chi, "torus"); return;
    case GroupKind::Profinite: {
      const auto& c = as_char<ProfiniteChar>(chi, "profinite");
      (void)c;
      return;
    }
    case GroupKind::Solenoid: {
      const auto& c = as_char<SolenoidChar>(chi, "solenoid");
      if (c.b <= 0 || std::gcd(c.a, c.b) != 1) throw KindMismatch("solenoid character not reduced");
      return;
    }
    case GroupKind::Cyclic:
      if (as_char<CyclicChar>(chi, "cyclic").k >= g.modulus)
        throw KindMismatch("cyclic character out of range");
      return;
    case GroupKind::Product: {
      const auto& c = as_char<ProductChar>(chi, "product");
      if (c.components.size() != g.parts.size()) throw KindMismatch("product character arity");
      for (std::size_t i = 0; i < g.parts.size(); ++i) check_character(g.parts[i], c.components[i]);
      return;
    }
    case GroupKind::ProductWithFinite: {
      const auto& c = as_char<WithFiniteChar>(chi, "finite-factor");
      check_character(g.abelian_part(), *c.abelian);
      if (c.zeta.size() != g.finite_ab->factors.size()) throw KindMismatch("zeta arity mismatch");
      for (std::size_t i = 0; i < c.zeta.size(); ++i)
        if (c.zeta[i] >= g.finite_ab->factors[i]) throw KindMismatch("zeta coordinate out of range");
      return;
    }
  }
}

UnitRational eval_char(const GroupDesc& g, const Character& chi, const Element& x) {
  switch (g.kind) {
    case GroupKind::Torus:
      return circle_scale(as_char<TorusChar>(chi, "torus").m, as_elem<UnitRational>(x, "torus point"));
    case GroupKind::Profinite: {
      const auto& q = as_char<ProfiniteChar>(chi, "profinite").q;
      const auto& h = as_elem<ProfiniteElem>(x, "profinite element");
      if (q.is_zero()) return {};
      const auto b = static_cast<std::uint64_t>(q.den());
      return UnitRational(
          static_cast<std::int64_t>(mulmod(static_cast<std::uint64_t>(q.num()), residue_mod(h, b), b)),
          q.den());
    }
    case GroupKind::Solenoid:
      return eval_solenoid(as_char<SolenoidChar>(chi, "solenoid"),
                           as_elem<SolenoidPoint>(x, "solenoid point"));
    case GroupKind::Cyclic: {
      const auto k = as_char<CyclicChar>(chi, "cyclic").k;
      const auto c = as_elem<CyclicElem>(x, "cyclic element").value;
      return UnitRational(static_cast<std::int64_t>(mulmod(k, c, g.modulus)),
                          static_cast<std::int64_t>(g.modulus));
    }
    case GroupKind::Product: {
      const auto& c = as_char<ProductChar>(chi, "product");
      const auto& p = as_elem<ProductElem>(x, "tuple");
      if (c.components.size() != g.parts.size() || p.coords.size() != g.parts.size())
        throw KindMismatch("product arity mismatch");
      UnitRational sum;
      for (std::size_t i = 0; i < g.parts.size(); ++i)
        sum = circle_add(sum, eval_char(g.parts[i], c.components[i], p.coords[i]));
      return sum;
    }
    case GroupKind::ProductWithFinite: {
      const auto& c = as_char<WithFiniteChar>(chi, "finite-factor");
      const auto& p = as_elem<WithFiniteElem>(x, "finite-factor pair");
      const auto& ab = *g.finite_ab;
      if (c.zeta.size() != ab.factors.size()) throw KindMismatch("zeta arity mismatch");
      if (p.finite >= ab.coords.size()) throw KindMismatch("finite element index out of range");
      UnitRational sum = eval_char(g.abelian_part(), *c.abelian, *p.abelian);
      for (std::size_t i = 0; i < ab.factors.size(); ++i) {
        const std::uint64_t n = ab.factors[i];
        sum = circle_add(sum, UnitRational(static_cast<std::int64_t>(mulmod(c.zeta[i], ab.coords[p.finite][i], n)),
                                           static_cast<std::int64_t>(n)));
      }
      return sum;
    }
  }
  throw KindMismatch("unknown group kind");
}

void check_bound_supported(const GroupDesc& g, Complexity bound) {
  switch (g.kind) {
    case GroupKind::Profinite:
    case GroupKind::Solenoid:
      for (std::uint64_t p = 2; p <= bound.bound(); ++p)
        if (is_prime(p) && !std::ranges::binary_search(g.primes, p))
          throw UnsupportedBound("bound " + std::to_string(bound.bound()) + " needs prime " +
                                 std::to_string(p) + " outside the working prefix");
      return;
    case GroupKind::Product:
      for (const auto& c : g.parts) check_bound_supported(c, bound);
      return;
    case GroupKind::ProductWithFinite:
      check_bound_supported(g.abelian_part(), bound);
      return;
    default:
      return;
  }
}

void for_each_char(const GroupDesc& g, Complexity bound, DualScope scope,
                   const std::function<bool(const Character&)>& visit) {
  const std::uint64_t B = bound.bound();
  if (scope == DualScope::Full) check_bound_supported(g, bound);
  switch (g.kind) {
    case GroupKind::Torus:
      for (std::int64_t c = 1; c <= static_cast<std::int64_t>(B); ++c) {
        if (!visit(TorusChar{c})) return;
        if (!visit(TorusChar{-c})) return;
      }
      return;
    case GroupKind::Profinite:
      for (std::uint64_t b = 2; b <= B; ++b) {
        if (!prime_factors_within(b, g.primes)) continue;
        for (std::uint64_t a = 1; a < b; ++a)
          if (std::gcd(a, b) == 1 &&
              !visit(ProfiniteChar{UnitRational(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b))}))
            return;
      }
      return;
    case GroupKind::Solenoid: {
      std::vector<std::pair<std::int64_t, std::int64_t>> level;
      for (std::int64_t c = 1; c <= static_cast<std::int64_t>(B); ++c) {
        level.clear();
        for (std::int64_t b = 1; b <= c; ++b) {
          if (!prime_factors_within(static_cast<std::uint64_t>(b), g.primes)) continue;
          for (std::int64_t a = -c; a <= c; ++a) {
            if (a == 0 || std::gcd(a, b) != 1) continue;
            if (std::max(a < 0 ? -a : a, b) != c) continue;
            level.emplace_back(a, b);
          }
        }
        std::ranges::sort(level);
        for (const auto& [a, b] : level)
          if (!visit(SolenoidChar{a, b})) return;
      }
      return;
    }
    case GroupKind::Cyclic:
      for (std::uint64_t k = 1; k < g.modulus; ++k)
        if (!visit(CyclicChar{k})) return;
      return;
    case GroupKind::Product: {
      std::vector<std::vector<Character>> lists;
      std::size_t total = 1;
      for (const auto& part : g.parts) {
        lists.push_back(with_trivial(part, bound, scope));
        total *= lists.back().size();
        if (total > kProductEnumerationLimit)
          throw SizeLimit("character enumeration exceeds limit; use the leading-component sweep");
      }
      std::vector<Character> all;
      all.reserve(total - 1);
      std::vector<std::size_t> idx(lists.size(), 0);
      for (std::size_t n = 0; n < total; ++n) {
        std::size_t rest = n;
        ProductChar pc;
        for (std::size_t i = lists.size(); i-- > 0;) {
          idx[i] = rest % lists[i].size();
          rest /= lists[i].size();
        }
        bool nonzero = false;
        for (std::size_t i = 0; i < lists.size(); ++i) {
          pc.components.push_back(lists[i][idx[i]]);
          nonzero = nonzero || idx[i] != 0;
        }
        if (nonzero) all.push_back(std::move(pc));
      }
      sorted_visit(all, visit);
      return;
    }
    case GroupKind::ProductWithFinite: {
      const auto a_list = with_trivial(g.abelian_part(), bound, scope);
      const auto& factors = g.finite_ab->factors;
      const std::uint64_t zeta_count = g.finite_ab->order();
      if (a_list.size() * zeta_count > kProductEnumerationLimit)
        throw SizeLimit("character enumeration exceeds limit");
      std::vector<Character> all;
      for (const auto& a : a_list)
        for (std::uint64_t z = 0; z < zeta_count; ++z) {
          std::vector<std::uint64_t> zeta(factors.size());
          std::uint64_t rest = z;
          for (std::size_t i = factors.size(); i-- > 0;) {
            zeta[i] = rest % factors[i];
            rest /= factors[i];
          }
          WithFiniteChar c{a, std::move(zeta)};
          if (complexity(c) > 0) all.push_back(std::move(c));
        }
      sorted_visit(all, visit);
      return;
    }
  }
}

std::vector<Character> enumerate_chars(const GroupDesc& g, Complexity bound, DualScope scope) {
  std::vector<Character> out;
  for_each_char(g, bound, scope, [&](const Character& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

bool annihilates(const GroupDesc& g, const Character& chi, const std::vector<Element>& xs) {
  return std::ranges::all_of(xs, [&](const Element& x) { return eval_char(g, chi, x).is_zero(); });
}

std::string to_string(const Character& chi) {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TorusChar>) {
          return "m=" + std::to_string(c.m);
        } else if constexpr (std::is_same_v<T, ProfiniteChar>) {
          return "q=" + c.q.to_string();
        } else if constexpr (std::is_same_v<T, SolenoidChar>) {
          return "q=" + std::to_string(c.a) + "/" + std::to_string(c.b);
        } else if constexpr (std::is_same_v<T, CyclicChar>) {
          return "k=" + std::to_string(c.k);
        } else if constexpr (std::is_same_v<T, ProductChar>) {
          std::string s = "(";
          for (std::size_t i = 0; i < c.components.size(); ++i)
            s += (i ? ", " : "") + to_string(c.components[i]);
          return s + ")";
        } else {
          std::string s = "(" + to_string(*c.abelian) + "; zeta=[";
          for (std::size_t i = 0; i < c.zeta.size(); ++i) s += (i ? "," : "") + std::to_string(c.zeta[i]);
          return s + "])";
        }
      },
      chi);
}

}  // namespace qcdense
