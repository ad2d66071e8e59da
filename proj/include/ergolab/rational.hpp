#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace ergolab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "a/b", plain integers and decimal literals ("0.1", "-2.5e-3").
// Decimals are converted exactly, so "0.1" is 1/10 and not the nearest double.
Rational parse_rational(std::string_view text);

// Exact binary value of a finite double.
Rational rational_from_double(double x);

double to_double(const Rational& q);

// "a/b", or "a" when the denominator is 1.
std::string to_string(const Rational& q);

// true iff count_num / count_den < eps, decided exactly.
bool ratio_less(std::int64_t count_num, std::int64_t count_den, const Rational& eps);

}  // namespace ergolab
