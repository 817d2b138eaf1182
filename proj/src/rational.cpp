#include "stvrla/rational.hpp"

#include <cctype>

#include "stvrla/errors.hpp"

namespace stvrla {

namespace {

mpz_class pow10(int digits) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  return p;
}

mpz_class to_mpz(std::int64_t v) {
  // mpz_class has no portable int64 constructor on all platforms.
  return mpz_class(std::to_string(v));
}

}  // namespace

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidParameter("rational with zero denominator");
  Rational r(to_mpz(num), to_mpz(den));
  r.canonicalize();
  return r;
}

std::string to_fraction_string(const Rational& r) { return r.get_str(); }

std::string to_decimal_string(const Rational& r, int digits) {
  if (digits < 0) digits = 0;
  const bool negative = sgn(r) < 0;
  Rational a = abs(r);
  const mpz_class scale = pow10(digits);
  // round half away from zero: floor(a * scale + 1/2)
  Rational scaled = a * scale + Rational(1, 2);
  mpz_class q = scaled.get_num() / scaled.get_den();
  std::string s = q.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits)) {
      s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    }
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  if (negative && q != 0) s.insert(0, "-");
  return s;
}

double to_double(const Rational& r) { return r.get_d(); }

Rational parse_rational(std::string_view text) {
  std::string t(text);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  std::size_t start = 0;
  while (start < t.size() && std::isspace(static_cast<unsigned char>(t[start]))) ++start;
  t = t.substr(start);
  if (t.empty()) throw ParseError("empty rational");

  try {
    if (t.find('/') != std::string::npos) {
      Rational r(t);
      if (r.get_den() == 0) throw ParseError("zero denominator in '" + t + "'");
      r.canonicalize();
      return r;
    }
    const auto dot = t.find('.');
    if (dot == std::string::npos) return Rational(mpz_class(t));

    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    const int places = static_cast<int>(t.size() - dot - 1);
    if (digits.empty() || digits == "-" || digits == "+") throw ParseError("bad decimal '" + t + "'");
    if (digits.front() == '+') digits.erase(0, 1);
    Rational r{mpz_class(digits), pow10(places)};
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParseError("cannot parse rational '" + t + "'");
  }
}

}  // namespace stvrla
