#pragma once

// Continuous characters of the supported groups, their exact evaluation and
// bounded enumeration.
//
// Pairings:
//   torus      chi_m(x)        = m x
//   profinite  chi_{a/b}(h)    = phi(a (h mod b) / b)
//   solenoid   chi_{a/b}(pi(r, h)) = phi(a r / b - a (h mod b) / b)
//   cyclic     chi_k(c)        = phi(k c / n)
// The solenoid sign convention is the one that kills u = (1, v) and restricts
// to r -> phi(q r) on the arc component pi(R x {0}).

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "qcdense/box.hpp"
#include "qcdense/circle.hpp"
#include "qcdense/groups.hpp"

namespace qcdense {

struct TorusChar {
  std::int64_t m = 0;
  friend bool operator==(const TorusChar&, const TorusChar&) = default;
};

/// Character of H through Z/b; q = a/b in Q/Z.
struct ProfiniteChar {
  UnitRational q;
  friend bool operator==(const ProfiniteChar&, const ProfiniteChar&) = default;
};

/// q = a/b reduced, b > 0.
struct SolenoidChar {
  std::int64_t a = 0;
  std::int64_t b = 1;
  friend bool operator==(const SolenoidChar&, const SolenoidChar&) = default;
};

struct CyclicChar {
  std::uint64_t k = 0;
  friend bool operator==(const CyclicChar&, const CyclicChar&) = default;
};

struct ProductChar;
struct WithFiniteChar;

using Character =
    std::variant<TorusChar, ProfiniteChar, SolenoidChar, CyclicChar, ProductChar, WithFiniteChar>;

struct ProductChar {
  std::vector<Character> components;
  friend bool operator==(const ProductChar&, const ProductChar&) = default;
};

/// (chi_A, zeta) on A x F, zeta a character of F/F' in the invariant-factor
/// basis: zeta(g) = sum_i zeta_i coord_i(g) / n_i.
struct WithFiniteChar {
  Box<Character> abelian;
  std::vector<std::uint64_t> zeta;
  friend bool operator==(const WithFiniteChar&, const WithFiniteChar&) = default;
};

SolenoidChar solenoid_char(std::int64_t a, std::int64_t b);

class Complexity {
 public:
  explicit Complexity(std::uint64_t bound);
  std::uint64_t bound() const noexcept { return bound_; }

 private:
  std::uint64_t bound_;
};

/// How far enumeration reaches into the dual of a profinite or solenoid
/// group with a finite prime prefix.
enum class DualScope {
  /// Every a/b with b up to the bound; UnsupportedBound if some prime <= bound
  /// is missing from the prefix.
  Full,
  /// Only denominators whose prime factors lie in the prefix.
  PrefixSmooth,
};

Character trivial_character(const GroupDesc& g);
bool is_trivial(const Character& chi);

/// |m| (torus), b (profinite), max(|a|, b) (solenoid), 1 for any nonzero
/// character of a finite group, componentwise max for products; 0 iff trivial.
std::uint64_t complexity(const Character& chi);

/// Deterministic order: complexity, then kind, then fields.
std::strong_ordering compare_chars(const Character& a, const Character& b);

/// Throws KindMismatch if chi is not a character of g.
void check_character(const GroupDesc& g, const Character& chi);

UnitRational eval_char(const GroupDesc& g, const Character& chi, const Element& x);

/// Visits the nonzero characters of g with complexity <= bound in the
/// deterministic order. Returning false from `visit` stops the enumeration.
void for_each_char(const GroupDesc& g, Complexity bound, DualScope scope,
                   const std::function<bool(const Character&)>& visit);

std::vector<Character> enumerate_chars(const GroupDesc& g, Complexity bound,
                                       DualScope scope = DualScope::Full);

/// True iff chi vanishes on every element of xs.
bool annihilates(const GroupDesc& g, const Character& chi, const std::vector<Element>& xs);

/// Throws UnsupportedBound when enumerating at `bound` with DualScope::Full
/// would need a prime outside the prefix of g (recursively).
void check_bound_supported(const GroupDesc& g, Complexity bound);

/// Whether every prime factor of b lies in `primes`.
bool is_smooth_over(std::uint64_t b, const PrimeList& primes);

std::string to_string(const Character& chi);

}  // namespace qcdense
