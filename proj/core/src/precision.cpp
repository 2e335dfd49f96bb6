#include "hurwitz/precision.hpp"

#include <algorithm>
#include <limits>

#include "hurwitz/errors.hpp"

namespace hurwitz {

static_assert(std::numeric_limits<Real>::digits >= 64,
              "extended precision long double required");

ScopedDigits::ScopedDigits(unsigned digits)
    : previous_(HighReal::default_precision()) {
  HighReal::default_precision(digits);
}

ScopedDigits::~ScopedDigits() { HighReal::default_precision(previous_); }

std::string to_string(BigIndex value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  unsigned __int128 magnitude =
      negative ? static_cast<unsigned __int128>(-(value + 1)) + 1 : static_cast<unsigned __int128>(value);
  std::string digits;
  while (magnitude > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(magnitude % 10)));
    magnitude /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

BigIndex parse_big_index(const std::string& text) {
  if (text.empty()) fail(ErrorCode::InvalidArgument, "empty integer literal");
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) fail(ErrorCode::InvalidArgument, "bad integer literal '" + text + "'");
  BigIndex value = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c < '0' || c > '9') fail(ErrorCode::InvalidArgument, "bad integer literal '" + text + "'");
    value = value * 10 + (c - '0');
  }
  return negative ? -value : value;
}

}  // namespace hurwitz
