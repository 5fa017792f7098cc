#pragma once

#include "dyntop/rational.hpp"

namespace dyntop {

/// Rational bracket [lo, hi] around a (possibly irrational) real value.
struct Enclosure {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  friend bool operator==(const Enclosure&, const Enclosure&) = default;

  Enclosure operator+(const Enclosure& o) const { return {lo + o.lo, hi + o.hi}; }
  Enclosure& operator+=(const Enclosure& o) {
    lo += o.lo;
    hi += o.hi;
    return *this;
  }
  Enclosure scaled(const Rational& c) const {  // c >= 0
    return {lo * c, hi * c};
  }
};

/// Encloses sqrt(r) within a bracket of width <= tol.
///
/// Exact square roots give a degenerate bracket regardless of tol. Otherwise
/// the bracket is floor(k*sqrt(r))/k-style with a dyadic scale k, so shrinking
/// tol only ever nests the bracket (monotone refinement). Requires r >= 0,
/// tol > 0.
Enclosure sqrt_enclose(const Rational& r, const Rational& tol);

}  // namespace dyntop
