#include "hurwitz/exact.hpp"

#include <cmath>

#include "hurwitz/errors.hpp"

namespace hurwitz {

namespace {

BigInt parse_integer(const std::string& text) {
  if (text.empty()) fail(ErrorCode::InvalidArgument, "empty integer");
  std::size_t pos = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (pos == text.size()) fail(ErrorCode::InvalidArgument, "bad integer '" + text + "'");
  for (std::size_t i = pos; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') fail(ErrorCode::InvalidArgument, "bad integer '" + text + "'");
  }
  return BigInt(text[0] == '+' ? text.substr(1) : text);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(text));
  const BigInt num = parse_integer(text.substr(0, slash));
  const BigInt den = parse_integer(text.substr(slash + 1));
  if (den == 0) fail(ErrorCode::InvalidArgument, "zero denominator in '" + text + "'");
  return Rational(num, den);
}

std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

bool is_square_free(std::int64_t d) {
  std::int64_t m = d < 0 ? -d : d;
  if (m == 0) return false;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % (p * p) == 0) return false;
    if (m % p == 0) m /= p;
  }
  return true;
}

bool is_perfect_square(std::int64_t d) {
  if (d < 0) return false;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(d)));
  while (r * r > d) --r;
  while ((r + 1) * (r + 1) <= d) ++r;
  return r * r == d;
}

}  // namespace hurwitz
