#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace coklab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt ipow(std::uint64_t base, unsigned exponent);

double to_double(const Rational& value);
double to_double(const BigInt& value);

/// Renders as "num/den"; integers still carry "/1" so the column parses uniformly.
std::string to_string(const Rational& value);

/// Shortest round-trip decimal form of a double ("%.17g" precision).
std::string format_real(double value);

/// Accepts "num/den", "num", and optional sign. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

}  // namespace coklab
