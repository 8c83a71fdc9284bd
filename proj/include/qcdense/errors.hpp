#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qcdense {

/// Base of every error raised by the library. Precondition violations that
/// are not covered by a more specific type are reported as InvalidArgument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class KindMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class PrecisionMismatch : public Error {
 public:
  using Error::Error;
};

class InsufficientPrecision : public Error {
 public:
  InsufficientPrecision(std::uint64_t prime, std::uint32_t needed)
      : Error("insufficient precision at prime " + std::to_string(prime) +
              ": need exponent " + std::to_string(needed)),
        prime_(prime),
        needed_(needed) {}

  std::uint64_t prime() const noexcept { return prime_; }
  std::uint32_t needed_exponent() const noexcept { return needed_; }

 private:
  std::uint64_t prime_;
  std::uint32_t needed_;
};

class UnsupportedBound : public Error {
 public:
  using Error::Error;
};

/// The requested witness is not a member of the truncated sequence.
class TruncationTooSmall : public Error {
 public:
  using Error::Error;
};

class SizeLimit : public Error {
 public:
  using Error::Error;
};

class ArithmeticOverflow : public Error {
 public:
  using Error::Error;
};

/// Raised when an internal mathematical claim fails at runtime. This points
/// at an implementation defect, never at bad input.
class ClaimViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qcdense
