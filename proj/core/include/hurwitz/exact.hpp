#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hurwitz {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p" or "p/q" into a reduced rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& value);

bool is_square_free(std::int64_t d);
bool is_perfect_square(std::int64_t d);

}  // namespace hurwitz
