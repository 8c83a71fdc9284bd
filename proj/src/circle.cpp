#include "qcdense/circle.hpp"

#include <limits>
#include <numeric>

#include "qcdense/errors.hpp"

namespace qcdense {

namespace {

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();

UnitRational from_wide(__int128 num, __int128 den) {
  if (den == 0) throw InvalidArgument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  num %= den;
  if (num < 0) num += den;
  // gcd on 128 bits
  __int128 a = num, b = den;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  const __int128 g = a == 0 ? den : a;
  num /= g;
  den /= g;
  if (den > kMax) throw ArithmeticOverflow("circle denominator exceeds 64 bits");
  return UnitRational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

UnitRational::UnitRational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidArgument("zero denominator");
  if (den < 0) {
    if (den == std::numeric_limits<std::int64_t>::min())
      throw ArithmeticOverflow("denominator out of range");
    num = -num;
    den = -den;
  }
  std::int64_t r = num % den;
  if (r < 0) r += den;
  const std::int64_t g = std::gcd(r, den);
  num_ = r / g;
  den_ = den / g;
}

std::string UnitRational::to_string() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

UnitRational UnitRational::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return UnitRational(std::stoll(text), 1);
    return UnitRational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw InvalidArgument("malformed rational '" + text + "'");
  }
}

UnitRational phi(std::int64_t num, std::int64_t den) { return UnitRational(num, den); }

UnitRational phi(const mpq_class& r) {
  mpz_class den = r.get_den();
  if (!den.fits_slong_p()) throw ArithmeticOverflow("circle denominator exceeds 64 bits");
  mpz_class rem;
  mpz_fdiv_r(rem.get_mpz_t(), r.get_num_mpz_t(), den.get_mpz_t());
  return UnitRational(rem.get_si(), den.get_si());
}

UnitRational circle_add(const UnitRational& x, const UnitRational& y) {
  if (x.den() == y.den()) return from_wide(static_cast<__int128>(x.num()) + y.num(), x.den());
  const std::int64_t g = std::gcd(x.den(), y.den());
  const __int128 l = static_cast<__int128>(x.den() / g) * y.den();
  const __int128 n = static_cast<__int128>(x.num()) * (y.den() / g) +
                     static_cast<__int128>(y.num()) * (x.den() / g);
  return from_wide(n, l);
}

UnitRational circle_neg(const UnitRational& x) {
  return x.is_zero() ? x : UnitRational(x.den() - x.num(), x.den());
}

UnitRational circle_scale(std::int64_t m, const UnitRational& x) {
  // Reduce m modulo den first so the product fits.
  std::int64_t mr = m % x.den();
  return from_wide(static_cast<__int128>(mr) * x.num(), x.den());
}

UnitRational circle_scale(const mpz_class& m, const UnitRational& x) {
  const auto d = static_cast<unsigned long>(x.den());
  mpz_class r;
  const unsigned long mr = mpz_fdiv_r_ui(r.get_mpz_t(), m.get_mpz_t(), d);
  return from_wide(static_cast<__int128>(mr) * x.num(), x.den());
}

std::int64_t signed_numerator(const UnitRational& x) {
  // num/den > 1/2  <=>  2 num > den
  return 2 * static_cast<__int128>(x.num()) > x.den() ? x.num() - x.den() : x.num();
}

bool in_tplus(const UnitRational& x) {
  return residue_in_tplus(static_cast<std::uint64_t>(x.num()), static_cast<std::uint64_t>(x.den()));
}

std::int64_t element_order(const UnitRational& x) { return x.den(); }

}  // namespace qcdense
