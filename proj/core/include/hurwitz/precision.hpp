#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <boost/multiprecision/mpfr.hpp>

namespace hurwitz {

/// Working precision: x87 extended (64-bit significand) on x86-64.
using Real = long double;
using Complex = std::complex<Real>;

/// Software high precision with a runtime digit count.
using HighReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                               boost::multiprecision::et_off>;

/// Term indices can exceed 2^63 (sign-flip truncation at small delta).
using BigIndex = __int128;

inline constexpr Real kPi = 3.141592653589793238462643383279502884L;
inline constexpr Real kTwoPi = 2 * kPi;

/// Digits of the high-precision mode used when a caller does not ask for a
/// specific count.
inline constexpr unsigned kDefaultHighDigits = 50;

/// Sets the thread's default mpfr precision for its lifetime and restores
/// the previous value afterwards.
class ScopedDigits {
 public:
  explicit ScopedDigits(unsigned digits);
  ~ScopedDigits();
  ScopedDigits(const ScopedDigits&) = delete;
  ScopedDigits& operator=(const ScopedDigits&) = delete;

 private:
  unsigned previous_;
};

std::string to_string(BigIndex value);
BigIndex parse_big_index(const std::string& text);

/// Unit roundoff of the working type.
inline constexpr Real kEpsilon = static_cast<Real>(1.08420217248550443401e-19L);

}  // namespace hurwitz
