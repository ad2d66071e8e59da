#include "ergolab/rational.hpp"

#include "ergolab/errors.hpp"

#include <cctype>
#include <cmath>
#include <string>

namespace ergolab {

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw DataError("malformed number: '" + std::string(whole) + "'");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw DataError("malformed number: '" + std::string(whole) + "'");
  }
  return BigInt(std::string(digits));
}

BigInt pow10(std::int64_t e) {
  BigInt r = 1;
  for (std::int64_t i = 0; i < e; ++i) r *= 10;
  return r;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::int64_t exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (exp_part.empty() || exp_part.size() > 6)
      throw DataError("malformed exponent: '" + std::string(whole) + "'");
    exponent = std::stoll(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty())
      throw DataError("malformed number: '" + std::string(whole) + "'");
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<std::int64_t>(frac_part.size());
  } else {
    digits = std::string(s);
  }
  Rational value(parse_integer(digits, whole));
  if (exponent >= 0) {
    value *= Rational(pow10(exponent));
  } else {
    value /= Rational(pow10(-exponent));
  }
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw DataError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash), text);
    Rational den = parse_decimal(text.substr(slash + 1), text);
    if (den == 0) throw DataError("zero denominator: '" + std::string(text) + "'");
    return num / den;
  }
  return parse_decimal(text, text);
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw DataError("non-finite value cannot be made rational");
  int exp = 0;
  double mant = std::frexp(x, &exp);
  // mant * 2^53 is an exact integer.
  auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(scaled);
  BigInt two_pow = 1;
  two_pow <<= static_cast<unsigned>(exp < 0 ? -exp : exp);
  if (exp >= 0) {
    r *= Rational(two_pow);
  } else {
    r /= Rational(two_pow);
  }
  return r;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

bool ratio_less(std::int64_t count_num, std::int64_t count_den, const Rational& eps) {
  // count_num / count_den < p / q  <=>  count_num * q < p * count_den
  const BigInt lhs = BigInt(count_num) * boost::multiprecision::denominator(eps);
  const BigInt rhs = boost::multiprecision::numerator(eps) * BigInt(count_den);
  return lhs < rhs;
}

}  // namespace ergolab
