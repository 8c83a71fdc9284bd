#pragma once

// Truncated super-sequences: finite, deterministically ordered member lists
// together with their limit, plus the constructions that combine them.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qcdense/duality.hpp"
#include "qcdense/groups.hpp"

namespace qcdense {

/// Where a member came from. `derivations` holds every (n, m) pair that
/// produced the value (for torus members: (n, 0) for the point 1/(2n)).
struct Provenance {
  std::string source;  // "T", "S", "S'", "S''", "fan", "image", "lift", "custom"
  std::vector<std::pair<std::uint64_t, std::uint64_t>> derivations;
  std::optional<std::size_t> component;
  std::vector<Provenance> inner;  // at most one: provenance before embedding/mapping
};

/// Generator name and parameters, echoed into every certificate.
struct SequenceSpec {
  std::string generator;
  std::vector<std::pair<std::string, std::string>> params;

  std::optional<std::string> param(std::string_view key) const;
};

struct SeqMember {
  Element value;
  Provenance meta;
  bool arc = false;
};

/// Membership in the arc component of the identity.
bool in_arc_component(const GroupDesc& g, const Element& x);

class SuperSeq {
 public:
  SuperSeq(GroupDesc group, Element limit, SequenceSpec spec);

  /// Sequence with the given members (in order) converging to zero.
  static SuperSeq from_members(GroupDesc group, const std::vector<Element>& members,
                               std::string generator = "custom");

  /// Appends x unless it equals the limit; a repeated value merges its
  /// derivations into the existing member. Returns the member index, or
  /// nullopt when x was absorbed into the limit.
  std::optional<std::size_t> add(Element x, Provenance meta);

  const GroupDesc& group() const noexcept { return group_; }
  const Element& limit() const noexcept { return limit_; }
  const std::vector<SeqMember>& members() const noexcept { return members_; }
  const SequenceSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return members_.size(); }

  std::optional<std::size_t> find(const Element& x) const;
  bool contains(const Element& x) const { return find(x).has_value(); }

 private:
  GroupDesc group_;
  Element limit_;
  SequenceSpec spec_;
  std::vector<SeqMember> members_;
  std::unordered_multimap<std::size_t, std::size_t> index_;
  bool has_towers_ = false;
};

/// Upper bound on materialized members.
inline constexpr std::size_t kMaxTruncation = 20'000'000;

/// phi(1/(2n)) for 1 <= n <= N, limit 0.
SuperSeq torus_sequence(std::uint64_t N);

/// m k_n v for 0 <= n <= n_max, 1 <= m <= min(k_{n+1}, m_cap), deduplicated.
SuperSeq profinite_sequence(const PrimeList& primes, std::size_t n_max,
                            std::optional<std::uint64_t> m_cap = std::nullopt);

/// S' = pi(-j, 0) for each member j v of the profinite sequence, followed by
/// S'' = pi(1/(2n), 0) for 1 <= n <= N. Limit pi(0, 0).
SuperSeq solenoid_sequence(const PrimeList& primes, std::size_t n_max, std::uint64_t N,
                           std::optional<std::uint64_t> m_cap = std::nullopt);

/// Coordinate embeddings of each part into the product, part by part.
SuperSeq fan(const std::vector<SuperSeq>& parts);

/// Members supported on coordinate j alone, projected to that coordinate.
SuperSeq component_members(const SuperSeq& product_seq, std::size_t j);

struct QuotientMap {
  enum class Kind { SolenoidToTorus, ProductProjection, DropFiniteFactor };
  Kind kind = Kind::SolenoidToTorus;
  std::size_t index = 0;  // ProductProjection

  static QuotientMap solenoid_to_torus() { return {Kind::SolenoidToTorus, 0}; }
  static QuotientMap projection(std::size_t i) { return {Kind::ProductProjection, i}; }
  static QuotientMap drop_finite_factor() { return {Kind::DropFiniteFactor, 0}; }
};

std::string to_string(const QuotientMap& map);

GroupDesc map_target(const QuotientMap& map, const GroupDesc& source);
Element apply_map(const QuotientMap& map, const GroupDesc& source, const Element& x);
/// xi o f for a character xi of the target group.
Character lift_character(const QuotientMap& map, const GroupDesc& source, const Character& xi);

/// Image sequence; duplicates merge and members hitting the image of the
/// limit are absorbed.
SuperSeq pushforward(const SuperSeq& seq, const QuotientMap& map);

/// Candidate suitable set: the members without the limit. A suitability
/// claim additionally needs a passing generation check.
struct SuitableCandidate {
  std::vector<Element> elements;
  bool requires_generation_check = true;
};

SuitableCandidate extract_suitable(const SuperSeq& seq);

}  // namespace qcdense
