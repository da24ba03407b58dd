#include "lightspan/rational.hpp"

#include <cctype>
#include <cstdio>

#include "lightspan/errors.hpp"

namespace lightspan {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : s.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw InputError("not a rational number: '" + std::string(text) + "'");
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

std::string to_string(const Rational& r) {
  // mpq_class(p, q) does not reduce, so a caller-built value may not be canonical.
  Rational c = r;
  c.canonicalize();
  return c.get_str(10);
}

double to_double(const Rational& r) { return r.get_d(); }

std::string to_decimal(const Rational& r, int digits) {
  // Round half away from zero at the requested precision.
  mpz_class scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Rational scaled = abs(r) * scale + Rational(1, 2);
  mpz_class q = scaled.get_num() / scaled.get_den();
  mpz_class whole = q / scale;
  mpz_class frac = q % scale;
  std::string fs = frac.get_str();
  if (static_cast<int>(fs.size()) < digits) fs.insert(0, digits - fs.size(), '0');
  std::string out = (sgn(r) < 0 && q != 0 ? "-" : "") + whole.get_str();
  if (digits > 0) out += "." + fs;
  return out;
}

}  // namespace lightspan
