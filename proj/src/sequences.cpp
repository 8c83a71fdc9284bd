#include "qcdense/sequences.hpp"

#include <algorithm>

#include "qcdense/errors.hpp"

namespace qcdense {

namespace {

bool has_tower(const Element& x) {
  return std::visit(
      [](const auto& e) -> bool {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ProfiniteElem>) {
          return !e.is_integer_point();
        } else if constexpr (std::is_same_v<T, SolenoidPoint>) {
          return !e.h().is_integer_point();
        } else if constexpr (std::is_same_v<T, ProductElem>) {
          return std::ranges::any_of(e.coords, [](const Element& c) { return has_tower(c); });
        } else if constexpr (std::is_same_v<T, WithFiniteElem>) {
          return has_tower(*e.abelian);
        } else {
          return false;
        }
      },
      x);
}

std::string opt_to_string(const std::optional<std::uint64_t>& v) {
  return v ? std::to_string(*v) : std::string("none");
}

std::string primes_to_string(const PrimeList& primes) {
  std::string s;
  for (std::size_t i = 0; i < primes.size(); ++i) s += (i ? "," : "") + std::to_string(primes[i]);
  return s;
}

bool is_zero(const GroupDesc& g, const Element& x) { return group_equal(g, x, group_zero(g)); }

}  // namespace

std::optional<std::string> SequenceSpec::param(std::string_view key) const {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  return std::nullopt;
}

bool in_arc_component(const GroupDesc& g, const Element& x) {
  switch (g.kind) {
    case GroupKind::Torus: return true;
    case GroupKind::Profinite:
    case GroupKind::Cyclic: return is_zero(g, x);
    case GroupKind::Solenoid: return std::get<SolenoidPoint>(x).arc();
    case GroupKind::Product: {
      const auto& p = std::get<ProductElem>(x);
      for (std::size_t i = 0; i < g.parts.size(); ++i)
        if (!in_arc_component(g.parts[i], p.coords.at(i))) return false;
      return true;
    }
    case GroupKind::ProductWithFinite: {
      const auto& p = std::get<WithFiniteElem>(x);
      return p.finite == g.finite->identity() && in_arc_component(g.abelian_part(), *p.abelian);
    }
  }
  return false;
}

// ---- SuperSeq -----------------------------------------------------------------

SuperSeq::SuperSeq(GroupDesc group, Element limit, SequenceSpec spec)
    : group_(std::move(group)), limit_(std::move(limit)), spec_(std::move(spec)) {
  check_element(group_, limit_);
}

SuperSeq SuperSeq::from_members(GroupDesc group, const std::vector<Element>& members,
                                std::string generator) {
  Element zero = group_zero(group);
  SuperSeq s(std::move(group), std::move(zero),
             SequenceSpec{std::move(generator), {{"size", std::to_string(members.size())}}});
  for (const auto& x : members) s.add(x, Provenance{"custom", {}, std::nullopt, {}});
  return s;
}

std::optional<std::size_t> SuperSeq::add(Element x, Provenance meta) {
  check_element(group_, x);
  if (group_equal(group_, x, limit_)) return std::nullopt;
  if (auto existing = find(x)) {
    auto& d = members_[*existing].meta.derivations;
    d.insert(d.end(), meta.derivations.begin(), meta.derivations.end());
    return existing;
  }
  const std::size_t i = members_.size();
  index_.emplace(element_hash(x), i);
  has_towers_ = has_towers_ || has_tower(x);
  const bool arc = in_arc_component(group_, x);
  members_.push_back(SeqMember{std::move(x), std::move(meta), arc});
  return i;
}

std::optional<std::size_t> SuperSeq::find(const Element& x) const {
  if (has_towers_ || has_tower(x)) {
    for (std::size_t i = 0; i < members_.size(); ++i)
      if (group_equal(group_, members_[i].value, x)) return i;
    return std::nullopt;
  }
  auto [lo, hi] = index_.equal_range(element_hash(x));
  std::optional<std::size_t> best;
  for (auto it = lo; it != hi; ++it)
    if (group_equal(group_, members_[it->second].value, x) && (!best || it->second < *best))
      best = it->second;
  return best;
}

// ---- generators -------------------------------------------------------------------

SuperSeq torus_sequence(std::uint64_t N) {
  if (N == 0) throw InvalidArgument("torus_sequence needs N >= 1");
  if (N > kMaxTruncation) throw SizeLimit("truncation too large");
  SuperSeq s(GroupDesc::torus(), UnitRational{}, SequenceSpec{"torus", {{"N", std::to_string(N)}}});
  for (std::uint64_t n = 1; n <= N; ++n)
    s.add(phi(1, static_cast<std::int64_t>(2 * n)), Provenance{"T", {{n, 0}}, std::nullopt, {}});
  return s;
}

SuperSeq profinite_sequence(const PrimeList& primes, std::size_t n_max,
                            std::optional<std::uint64_t> m_cap) {
  if (n_max + 1 > primes.size())
    throw IndexOutOfRange("profinite_sequence needs n_max + 1 <= number of primes");
  if (m_cap && *m_cap == 0) throw InvalidArgument("m_cap must be positive");
  const KSequence ks(primes);
  std::vector<std::uint64_t> caps;
  std::uint64_t total = 0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const mpz_class& next = ks.k(n + 1);
    std::uint64_t c = next.fits_ulong_p() ? next.get_ui() : ~std::uint64_t{0};
    if (m_cap) c = std::min(c, *m_cap);
    if (c > kMaxTruncation || total + c > kMaxTruncation)
      throw SizeLimit("truncation exceeds " + std::to_string(kMaxTruncation) + " members; pass m_cap");
    caps.push_back(c);
    total += c;
  }
  SuperSeq s(GroupDesc::profinite(primes), ProfiniteElem::integer(0),
             SequenceSpec{"profinite",
                          {{"primes", primes_to_string(primes)},
                           {"n_max", std::to_string(n_max)},
                           {"m_cap", opt_to_string(m_cap)}}});
  for (std::size_t n = 0; n <= n_max; ++n) {
    mpz_class value = 0;
    for (std::uint64_t m = 1; m <= caps[n]; ++m) {
      value += ks.k(n);
      s.add(ProfiniteElem::integer(value), Provenance{"S", {{n, m}}, std::nullopt, {}});
    }
  }
  return s;
}

SuperSeq solenoid_sequence(const PrimeList& primes, std::size_t n_max, std::uint64_t N,
                           std::optional<std::uint64_t> m_cap) {
  if (N == 0) throw InvalidArgument("solenoid_sequence needs N >= 1");
  const SuperSeq base = profinite_sequence(primes, n_max, m_cap);
  SuperSeq s(GroupDesc::solenoid(primes), SolenoidPoint{},
             SequenceSpec{"solenoid",
                          {{"primes", primes_to_string(primes)},
                           {"n_max", std::to_string(n_max)},
                           {"N", std::to_string(N)},
                           {"m_cap", opt_to_string(m_cap)}}});
  // pi(0, j v) = pi(-j, 0)
  for (const auto& m : base.members()) {
    const auto& j = std::get<ProfiniteElem>(m.value).integer_value();
    s.add(SolenoidPoint(mpq_class(-j), ProfiniteElem::integer(0)),
          Provenance{"S'", m.meta.derivations, std::nullopt, {}});
  }
  for (std::uint64_t n = 1; n <= N; ++n)
    s.add(SolenoidPoint(mpq_class(1, 2 * n), ProfiniteElem::integer(0)),
          Provenance{"S''", {{n, 0}}, std::nullopt, {}});
  return s;
}

SuperSeq fan(const std::vector<SuperSeq>& parts) {
  if (parts.empty()) throw InvalidArgument("fan needs at least one part");
  std::vector<GroupDesc> groups;
  SequenceSpec spec{"fan", {{"parts", std::to_string(parts.size())}}};
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const auto& p = parts[j];
    if (!is_zero(p.group(), p.limit())) throw InvalidArgument("fan parts must converge to zero");
    groups.push_back(p.group());
    std::string desc = p.spec().generator;
    for (const auto& [k, v] : p.spec().params) desc += ";" + k + "=" + v;
    spec.params.emplace_back("part" + std::to_string(j), desc);
  }
  const GroupDesc g = GroupDesc::product(groups);
  SuperSeq s(g, group_zero(g), std::move(spec));
  for (std::size_t j = 0; j < parts.size(); ++j)
    for (const auto& m : parts[j].members()) {
      auto zero = std::get<ProductElem>(group_zero(g));
      zero.coords[j] = m.value;
      s.add(std::move(zero), Provenance{"fan", {}, j, {m.meta}});
    }
  return s;
}

SuperSeq component_members(const SuperSeq& product_seq, std::size_t j) {
  const GroupDesc& g = product_seq.group();
  if (g.kind != GroupKind::Product) throw KindMismatch("component_members needs a product sequence");
  if (j >= g.parts.size()) throw IndexOutOfRange("component index out of range");
  const GroupDesc& gj = g.parts[j];
  SuperSeq s(gj, group_zero(gj),
             SequenceSpec{"component", {{"index", std::to_string(j)}}});
  for (const auto& m : product_seq.members()) {
    const auto& p = std::get<ProductElem>(m.value);
    bool supported = true;
    for (std::size_t i = 0; i < p.coords.size() && supported; ++i)
      if (i != j && !is_zero(g.parts[i], p.coords[i])) supported = false;
    if (!supported) continue;
    Provenance meta = m.meta.inner.empty() ? m.meta : m.meta.inner.front();
    s.add(p.coords[j], std::move(meta));
  }
  return s;
}

// ---- quotient maps ------------------------------------------------------------------

std::string to_string(const QuotientMap& map) {
  switch (map.kind) {
    case QuotientMap::Kind::SolenoidToTorus: return "solenoid_to_torus";
    case QuotientMap::Kind::ProductProjection: return "projection(" + std::to_string(map.index) + ")";
    case QuotientMap::Kind::DropFiniteFactor: return "drop_finite_factor";
  }
  return "?";
}

GroupDesc map_target(const QuotientMap& map, const GroupDesc& source) {
  switch (map.kind) {
    case QuotientMap::Kind::SolenoidToTorus:
      if (source.kind != GroupKind::Solenoid) throw KindMismatch("SolenoidToTorus needs a solenoid");
      return GroupDesc::torus();
    case QuotientMap::Kind::ProductProjection:
      if (source.kind != GroupKind::Product) throw KindMismatch("projection needs a product");
      if (map.index >= source.parts.size()) throw KindMismatch("projection index out of range");
      return source.parts[map.index];
    case QuotientMap::Kind::DropFiniteFactor:
      if (source.kind != GroupKind::ProductWithFinite)
        throw KindMismatch("DropFiniteFactor needs a product with a finite factor");
      return source.abelian_part();
  }
  throw KindMismatch("unknown map");
}

Element apply_map(const QuotientMap& map, const GroupDesc& source, const Element& x) {
  (void)map_target(map, source);
  check_element(source, x);
  switch (map.kind) {
    case QuotientMap::Kind::SolenoidToTorus:
      // (r, h) -> r mod 1 kills u = (1, v) and {0} x H.
      return phi(std::get<SolenoidPoint>(x).r());
    case QuotientMap::Kind::ProductProjection:
      return std::get<ProductElem>(x).coords[map.index];
    case QuotientMap::Kind::DropFiniteFactor:
      return *std::get<WithFiniteElem>(x).abelian;
  }
  throw KindMismatch("unknown map");
}

Character lift_character(const QuotientMap& map, const GroupDesc& source, const Character& xi) {
  const GroupDesc target = map_target(map, source);
  check_character(target, xi);
  switch (map.kind) {
    case QuotientMap::Kind::SolenoidToTorus:
      return SolenoidChar{std::get<TorusChar>(xi).m, 1};
    case QuotientMap::Kind::ProductProjection: {
      auto c = std::get<ProductChar>(trivial_character(source));
      c.components[map.index] = xi;
      return c;
    }
    case QuotientMap::Kind::DropFiniteFactor: {
      auto c = std::get<WithFiniteChar>(trivial_character(source));
      c.abelian = xi;
      return c;
    }
  }
  throw KindMismatch("unknown map");
}

SuperSeq pushforward(const SuperSeq& seq, const QuotientMap& map) {
  GroupDesc target = map_target(map, seq.group());
  Element limit = apply_map(map, seq.group(), seq.limit());
  SequenceSpec spec{"pushforward", {{"map", to_string(map)}, {"source", seq.spec().generator}}};
  for (const auto& kv : seq.spec().params) spec.params.push_back(kv);
  SuperSeq s(std::move(target), std::move(limit), std::move(spec));
  for (const auto& m : seq.members())
    s.add(apply_map(map, seq.group(), m.value), Provenance{"image", {}, std::nullopt, {m.meta}});
  return s;
}

SuitableCandidate extract_suitable(const SuperSeq& seq) {
  SuitableCandidate out;
  out.elements.reserve(seq.size());
  for (const auto& m : seq.members()) out.elements.push_back(m.value);
  return out;
}

}  // namespace qcdense
