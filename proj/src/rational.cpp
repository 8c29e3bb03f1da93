// Copyright 2026 The narrative_eq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "narrative_eq/rational.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "narrative_eq/errors.hpp"

namespace narrative_eq {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw InputError("malformed rational '" + std::string(whole) + "'");
  }
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mpz_class ez = parse_integer(s.substr(e + 1), whole);
    if (!ez.fits_slong_p() || abs(ez) > 4096) {
      throw InputError("exponent out of range in '" + std::string(whole) + "'");
    }
    exponent = ez.get_si();
    s = s.substr(0, e);
  }
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto dot = s.find('.');
  std::string digits(s.substr(0, dot));
  std::string fraction;
  if (dot != std::string_view::npos) fraction = std::string(s.substr(dot + 1));
  if ((digits.empty() && fraction.empty()) ||
      (!digits.empty() && !all_digits(digits)) ||
      (!fraction.empty() && !all_digits(fraction))) {
    throw InputError("malformed rational '" + std::string(whole) + "'");
  }
  mpz_class n(digits.empty() && fraction.empty() ? "0" : digits + fraction, 10);
  exponent -= static_cast<long>(fraction.size());
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational r = exponent >= 0 ? Rational(mpz_class(n * scale)) : Rational(n, scale);
  return negative ? -r : r;
}

}  // namespace

Rational::Rational(long n, long d) : value_(n, d) {
  if (d == 0) throw InputError("zero denominator");
  value_.canonicalize();
}

Rational::Rational(const mpz_class& n, const mpz_class& d) : value_(n, d) {
  if (d == 0) throw InputError("zero denominator");
  value_.canonicalize();
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw NumericError("non-finite value cannot be made exact");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), x);
  return Rational(q);
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  if (text.empty()) throw InputError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class n = parse_integer(text.substr(0, slash), text);
    mpz_class d = parse_integer(text.substr(slash + 1), text);
    if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return Rational(n, d);
  }
  return parse_decimal(text, text);
}

std::string Rational::to_string() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw NumericError("division by zero");
  value_ /= o.value_;
  return *this;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational half_power(unsigned n) {
  mpz_class d;
  mpz_ui_pow_ui(d.get_mpz_t(), 2, n);
  return Rational(mpz_class(1), d);
}

mpz_class factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

}  // namespace narrative_eq
