#include "cpn/rational.hpp"

#include <cctype>

namespace cpn {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rat parse_rat(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s = s.substr(1);
  }
  if (s.empty()) throw ParseError("empty rational literal");

  Rat result;
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw ParseError("malformed rational literal '" + text + "'");
    }
    mpz_class n(num), d(den);
    if (d == 0) throw ParseError("zero denominator in '" + text + "'");
    result = Rat(n, d);
    result.canonicalize();
  } else if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || !all_digits(frac)) {
      throw ParseError("malformed decimal literal '" + text + "'");
    }
    mpz_class scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    mpz_class n = mpz_class(whole) * scale + mpz_class(frac.empty() ? "0" : frac);
    result = Rat(n, scale);
    result.canonicalize();
  } else {
    if (!all_digits(s)) throw ParseError("malformed rational literal '" + text + "'");
    result = Rat(mpz_class(s));
  }
  if (negative) result = -result;
  return result;
}

std::string format_rat(const Rat& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

bool rat_is_integer(const Rat& value) { return value.get_den() == 1; }

Rat rat_ceil(const Rat& value) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num().get_mpz_t(), value.get_den().get_mpz_t());
  return Rat(q);
}

const Rat& ExtRat::value() const {
  if (!finite_) throw CpnError("attempt to read the value of infinity");
  return value_;
}

std::string format_ext(const ExtRat& value) {
  return value.is_finite() ? format_rat(value.value()) : "inf";
}

}  // namespace cpn
