#pragma once

// Exact arithmetic on the rational points of the circle group T = R/Z.

#include <compare>
#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace qcdense {

/// A point of Q/Z, stored as num/den with gcd(num, den) = 1 and
/// 0 <= num < den. The zero element is 0/1.
class UnitRational {
 public:
  constexpr UnitRational() = default;

  /// Canonical class of num/den modulo 1. den must be nonzero.
  UnitRational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_ == 0; }

  /// "num/den".
  std::string to_string() const;
  static UnitRational parse(const std::string& text);

  friend bool operator==(const UnitRational&, const UnitRational&) = default;
  friend std::strong_ordering operator<=>(const UnitRational& a,
                                          const UnitRational& b) {
    // Order by the value in [0,1).
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs != rhs) return lhs < rhs ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.den_ <=> b.den_;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// The canonical map R -> T on exact rationals.
UnitRational phi(std::int64_t num, std::int64_t den);
UnitRational phi(const mpq_class& r);

UnitRational circle_add(const UnitRational& x, const UnitRational& y);
UnitRational circle_neg(const UnitRational& x);
UnitRational circle_scale(std::int64_t m, const UnitRational& x);
UnitRational circle_scale(const mpz_class& m, const UnitRational& x);

/// Signed representative in (-1/2, 1/2], as a rational with the same den.
/// The half point maps to +1/2.
std::int64_t signed_numerator(const UnitRational& x);

/// Membership in T+ = phi([-1/4, 1/4]) (closed arc).
bool in_tplus(const UnitRational& x);

/// Same test for the class v/d with 0 <= v < d, without building a
/// UnitRational.
constexpr bool residue_in_tplus(std::uint64_t v, std::uint64_t d) {
  const unsigned __int128 four_v = static_cast<unsigned __int128>(v) * 4;
  return four_v <= d || four_v >= static_cast<unsigned __int128>(d) * 3;
}

/// Order of x in Q/Z, i.e. its denominator.
std::int64_t element_order(const UnitRational& x);

}  // namespace qcdense
