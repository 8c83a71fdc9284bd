#pragma once

// Concrete compact abelian groups: finite cyclic groups, the circle, the
// profinite group H = prod Z_p over a finite working prefix of primes, the
// solenoid C = (R x H)/<u> with u = (1, v), finite products, and products
// with a finite (possibly non-abelian) factor.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "qcdense/box.hpp"
#include "qcdense/circle.hpp"
#include "qcdense/finite_group.hpp"

namespace qcdense {

using PrimeList = std::vector<std::uint64_t>;

/// All primes strictly below `limit`.
PrimeList primes_below(std::uint64_t limit);
bool is_prime(std::uint64_t n);
/// Throws InvalidArgument unless the list is strictly increasing primes.
void validate_primes(const PrimeList& primes);

enum class GroupKind { Torus, Profinite, Solenoid, Cyclic, Product, ProductWithFinite };

std::string_view kind_name(GroupKind kind);

struct GroupDesc {
  GroupKind kind = GroupKind::Torus;
  PrimeList primes;            // Profinite, Solenoid
  std::uint64_t modulus = 0;   // Cyclic
  std::vector<GroupDesc> parts;  // Product; ProductWithFinite keeps the abelian factor in parts[0]
  FiniteGroupPtr finite;       // ProductWithFinite
  FiniteAbelianPtr finite_ab;  // abelianization of `finite`

  static GroupDesc torus();
  static GroupDesc profinite(PrimeList primes);
  static GroupDesc solenoid(PrimeList primes);
  static GroupDesc cyclic(std::uint64_t n);
  static GroupDesc product(std::vector<GroupDesc> parts);
  static GroupDesc product_with_finite(GroupDesc abelian, FiniteGroupPtr finite,
                                       FiniteAbelianPtr abelianization);

  const GroupDesc& abelian_part() const { return parts.at(0); }

  friend bool operator==(const GroupDesc& a, const GroupDesc& b);
};

// ---- elements -------------------------------------------------------------

/// One p-adic digit block: residue mod prime^exponent.
struct ResidueDigit {
  std::uint64_t prime = 0;
  std::uint32_t exponent = 0;
  std::uint64_t residue = 0;
  friend bool operator==(const ResidueDigit&, const ResidueDigit&) = default;
};

inline constexpr std::uint32_t kDefaultPrecision = 8;

/// Element of H. Either m*v for an integer m (the dense cyclic subgroup
/// generated by v = (1, 1, ...)), or a finite-precision residue tower.
class ProfiniteElem {
 public:
  ProfiniteElem() = default;

  static ProfiniteElem integer(mpz_class m);
  static ProfiniteElem v() { return integer(1); }
  /// Digits must be sorted by strictly increasing prime, with
  /// 0 <= residue < prime^exponent < 2^62.
  static ProfiniteElem residues(std::vector<ResidueDigit> digits, bool truncated = false);

  bool is_integer_point() const noexcept { return std::holds_alternative<mpz_class>(rep_); }
  const mpz_class& integer_value() const { return std::get<mpz_class>(rep_); }
  const std::vector<ResidueDigit>& digits() const { return std::get<Tower>(rep_).digits; }
  /// Set when an addition had to truncate a deeper tower.
  bool truncated() const noexcept {
    return !is_integer_point() && std::get<Tower>(rep_).truncated;
  }
  bool is_exact_zero() const { return is_integer_point() && integer_value() == 0; }

  friend bool operator==(const ProfiniteElem& a, const ProfiniteElem& b);

 private:
  struct Tower {
    std::vector<ResidueDigit> digits;
    bool truncated = false;
  };
  std::variant<mpz_class, Tower> rep_{mpz_class(0)};
};

/// pi(r, h) in C. Construction canonicalizes integer-point h = m*v into
/// (r - m, 0); the stored r is exact and used as is for pairing.
class SolenoidPoint {
 public:
  SolenoidPoint() = default;
  SolenoidPoint(mpq_class r, ProfiniteElem h);

  const mpq_class& r() const noexcept { return r_; }
  const ProfiniteElem& h() const noexcept { return h_; }
  /// Membership in the arc component pi(R x {0}).
  bool arc() const { return h_.is_exact_zero(); }

  /// Representation equality; group_equal compares modulo <u>.
  friend bool operator==(const SolenoidPoint& a, const SolenoidPoint& b) { return a.r_ == b.r_ && a.h_ == b.h_; }

 private:
  mpq_class r_{0};
  ProfiniteElem h_;
};

struct CyclicElem {
  std::uint64_t value = 0;
  friend bool operator==(const CyclicElem&, const CyclicElem&) = default;
};

struct ProductElem;
struct WithFiniteElem;

using Element =
    std::variant<UnitRational, ProfiniteElem, SolenoidPoint, CyclicElem, ProductElem, WithFiniteElem>;

struct ProductElem {
  std::vector<Element> coords;
  friend bool operator==(const ProductElem&, const ProductElem&) = default;
};

struct WithFiniteElem {
  Box<Element> abelian;
  std::uint32_t finite = 0;
  friend bool operator==(const WithFiniteElem&, const WithFiniteElem&) = default;
};

// ---- operations -------------------------------------------------------------

Element group_zero(const GroupDesc& g);
Element group_add(const GroupDesc& g, const Element& x, const Element& y);
Element group_neg(const GroupDesc& g, const Element& x);
Element group_scale(const GroupDesc& g, const mpz_class& m, const Element& x);

/// Equality in the group. Residue towers compare within the common
/// precision; solenoid points compare modulo <u>.
bool group_equal(const GroupDesc& g, const Element& x, const Element& y);

/// Hash that agrees with group_equal on elements of the same exact form
/// (integer points vs. integer points, towers vs. towers).
std::size_t element_hash(const Element& x);

/// Throws KindMismatch if x is not shaped like an element of g.
void check_element(const GroupDesc& g, const Element& x);

/// Projection H -> Z/bZ. b >= 1.
std::uint64_t residue_mod(const ProfiniteElem& h, std::uint64_t b);

/// The tower of h at the given exponent for each prime.
ProfiniteElem to_residues(const ProfiniteElem& h, const PrimeList& primes,
                          std::uint32_t exponent = kDefaultPrecision);

/// k_n = (p_0 p_1 ... p_{n-1})^n; k_0 = 1.
mpz_class k_sequence(const PrimeList& primes, std::size_t n);

/// Cached k_0 .. k_L for one prime list.
class KSequence {
 public:
  explicit KSequence(PrimeList primes);
  const PrimeList& primes() const noexcept { return primes_; }
  /// Throws IndexOutOfRange if n > primes().size().
  const mpz_class& k(std::size_t n) const;
  /// k_n mod b.
  std::uint64_t k_mod(std::size_t n, std::uint64_t b) const;

 private:
  PrimeList primes_;
  std::vector<mpz_class> k_;
};

/// Membership in W_n = k_n H.
bool in_Wn(const ProfiniteElem& h, const PrimeList& primes, std::size_t n);

std::string to_string(const Element& x);

}  // namespace qcdense
