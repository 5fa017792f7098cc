#pragma once

#include "dyntop/rational.hpp"

#include <compare>
#include <string>
#include <string_view>

namespace dyntop {

/// A point of the cylinder quotient [0,1] x [-1,1] / ((x,1) ~ (x,-1)), kept in
/// canonical form: x in [0,1], y in (-1,1]. Construction normalizes y = -1 to 1.
struct CylPoint {
  Rational x;
  Rational y;

  CylPoint() : x(0), y(0) {}
  CylPoint(Rational px, Rational py);

  friend bool operator==(const CylPoint&, const CylPoint&) = default;
  friend std::strong_ordering operator<=>(const CylPoint& a, const CylPoint& b) {
    if (a.x != b.x) return a.x < b.x ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.y != b.y) return a.y < b.y ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

/// Canonicalizes a raw y with |y| <= 1 (idempotent).
Rational canonical_y(const Rational& y);

/// Squared quotient metric: |x1-x2|^2 + min(|y1-y2|, 2-|y1-y2|)^2.
/// Exact; zero iff the canonical points coincide.
Rational dist_sq(const CylPoint& a, const CylPoint& b);

/// Decides rho(a,b) < eps exactly via dist_sq(a,b) < eps^2. Requires eps > 0.
bool dist_lt(const CylPoint& a, const CylPoint& b, const Rational& eps);

/// Open metric ball.
struct Ball {
  CylPoint center;
  Rational radius;
  bool contains(const CylPoint& p) const { return dist_lt(p, center, radius); }
};

std::string to_string(const CylPoint& p);            // "(p/q, r/s)"
CylPoint parse_cyl_point(std::string_view text);

}  // namespace dyntop
