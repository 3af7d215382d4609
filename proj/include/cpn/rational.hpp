#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>

#include "cpn/errors.hpp"

namespace cpn {

// Exact rational number. Everything in the toolkit computes on these; no
// floating point enters any decision.
using Rat = mpq_class;

// Parses "p", "p/q" or a nonnegative decimal like "1.25" into an exact
// rational. Throws ParseError on anything else.
Rat parse_rat(const std::string& text);

// Lowest terms; integers print without the "/1".
std::string format_rat(const Rat& value);

bool rat_is_integer(const Rat& value);

// Smallest integer >= value, as a rational.
Rat rat_ceil(const Rat& value);

// A rational extended with +infinity. Comparison and min only; there is no
// infinity arithmetic.
class ExtRat {
 public:
  ExtRat() : finite_(true), value_(0) {}
  ExtRat(Rat value) : finite_(true), value_(std::move(value)) {}
  static ExtRat infinity() {
    ExtRat e;
    e.finite_ = false;
    return e;
  }

  bool is_finite() const { return finite_; }

  // Throws CpnError when infinite.
  const Rat& value() const;

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }
  friend bool operator!=(const ExtRat& a, const ExtRat& b) { return !(a == b); }
  friend bool operator<(const ExtRat& a, const ExtRat& b) {
    if (!a.finite_) return false;
    if (!b.finite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator>(const ExtRat& a, const ExtRat& b) { return b < a; }
  friend bool operator<=(const ExtRat& a, const ExtRat& b) { return !(b < a); }
  friend bool operator>=(const ExtRat& a, const ExtRat& b) { return !(a < b); }

 private:
  bool finite_;
  Rat value_;
};

inline const ExtRat& min(const ExtRat& a, const ExtRat& b) { return b < a ? b : a; }

std::string format_ext(const ExtRat& value);

}  // namespace cpn
