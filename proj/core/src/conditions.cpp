#include "sktspec/conditions.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace skt {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// The shortest decimal string that round-trips to `x` is taken as the value
// the user wrote; it is converted to an exact rational.
Rational exact_decimal(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc{}) throw std::runtime_error("cannot format parameter value");
  const std::string text(buf, res.ptr);

  std::string mantissa = text;
  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string::npos) {
    mantissa = text.substr(0, e);
    exponent = std::stol(text.substr(e + 1));
  }
  bool negative = false;
  if (!mantissa.empty() && mantissa.front() == '-') {
    negative = true;
    mantissa.erase(0, 1);
  }
  if (const auto dot = mantissa.find('.'); dot != std::string::npos) {
    exponent -= static_cast<long>(mantissa.size() - dot - 1);
    mantissa.erase(dot, 1);
  }

  // cpp_int reads a leading 0 as an octal prefix.
  const auto first = mantissa.find_first_not_of('0');
  mantissa = first == std::string::npos ? "0" : mantissa.substr(first);
  BigInt digits(mantissa);
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(exponent)));
  Rational value = exponent >= 0 ? Rational(digits * scale) : Rational(digits, scale);
  return negative ? Rational(-value) : value;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Inequality greater(const Rational& lhs, const Rational& rhs) {
  return {lhs > rhs, to_double(lhs), to_double(rhs)};
}

}  // namespace

ConditionReport check_conditions(const ModelParams& p) {
  const Rational d1 = exact_decimal(p.d1), d2 = exact_decimal(p.d2);
  const Rational a11 = exact_decimal(p.alpha11), a12 = exact_decimal(p.alpha12);
  const Rational a21 = exact_decimal(p.alpha21), a22 = exact_decimal(p.alpha22);
  const Rational b11 = exact_decimal(p.b11), b22 = exact_decimal(p.b22);

  const Rational du = a11 - a21;  // alpha11 - alpha21
  const Rational dv = a22 - a12;  // alpha22 - alpha12
  const Rational bb = b11 * b22;
  const Rational mixed = a11 * a22 + a12 * a21 - bb;
  const Rational zero = 0;

  ConditionReport r;

  r.cond_1_6.i = {mixed >= zero, to_double(mixed), 0.0};
  r.cond_1_6.ii = greater(dv, b11);
  r.cond_1_6.iii = greater(du, b22);
  r.cond_1_6.holds = r.cond_1_6.i.holds && r.cond_1_6.ii.holds && r.cond_1_6.iii.holds;

  r.cond_1_7.product = greater(du * dv, bb);
  r.cond_1_7.alpha11_gt_alpha21 = du > zero;
  r.cond_1_7.alpha22_gt_alpha12 = dv > zero;
  r.cond_1_7.holds =
      r.cond_1_7.product.holds && r.cond_1_7.alpha11_gt_alpha21 && r.cond_1_7.alpha22_gt_alpha12;

  r.cond_1_8 = {to_double(mixed), mixed >= zero};

  r.regularity_positivity = d1 > zero && d2 > zero && a11 > zero && a12 > zero && a21 > zero &&
                            a22 > zero && b11 > zero && b22 > zero;

  const Rational V1 = du - b22;
  const Rational V2 = dv - b11;
  r.V1 = to_double(V1);
  r.V2 = to_double(V2);

  const Rational iii_value = (d1 - d2) * (V2 - V1) * (du * dv - bb);
  r.cond_1_9.i = (V1 == zero && V2 != zero) || (V2 == zero && V1 != zero);
  r.cond_1_9.ii = V1 * V2 > zero;
  r.cond_1_9.iii = iii_value > zero;
  r.cond_1_9.iii_value = to_double(iii_value);
  r.cond_1_9.holds = r.cond_1_9.i || r.cond_1_9.ii || r.cond_1_9.iii;

  const bool c17 = r.cond_1_7.holds;
  r.cond_2_1.i = (V1 == zero && V2 > zero) || (V2 == zero && V1 > zero);
  r.cond_2_1.ii = du > b22 && dv > b11;
  r.cond_2_1.iii = d1 > d2 && du > b22 && dv < b11 && c17;
  r.cond_2_1.iv = d1 < d2 && du < b22 && dv > b11 && c17;
  r.cond_2_1.holds = r.cond_2_1.i || r.cond_2_1.ii || r.cond_2_1.iii || r.cond_2_1.iv;

  r.theorem_2_2_applies = r.cond_2_1.holds;
  return r;
}

}  // namespace skt
