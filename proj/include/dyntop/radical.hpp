#pragma once

#include "dyntop/enclosure.hpp"
#include "dyntop/rational.hpp"

#include <map>
#include <string>

namespace dyntop {

/// Exact linear combination sum_j c_j * sqrt(m_j) with rational coefficients
/// and distinct squarefree radicands (m = 1 holds the rational part).
///
/// Such values are exactly the path lengths of the quotient shortest-path
/// metric. Because sqrt of distinct squarefree integers are linearly
/// independent over Q, a sum is zero iff all coefficients vanish; comparisons
/// of nonzero values resolve by nested enclosure refinement.
class RadicalSum {
 public:
  RadicalSum() = default;
  explicit RadicalSum(const Rational& value);

  /// sqrt of a non-negative rational, normalized to canonical form.
  static RadicalSum sqrt_of(const Rational& r);

  RadicalSum operator+(const RadicalSum& o) const;
  RadicalSum operator-(const RadicalSum& o) const;
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  Rational rational_part() const;

  /// Exact three-way comparison: -1, 0, +1.
  static int compare(const RadicalSum& a, const RadicalSum& b);
  friend bool operator==(const RadicalSum& a, const RadicalSum& b) { return compare(a, b) == 0; }
  friend bool operator<(const RadicalSum& a, const RadicalSum& b) { return compare(a, b) < 0; }
  friend bool operator<=(const RadicalSum& a, const RadicalSum& b) { return compare(a, b) <= 0; }

  Enclosure enclose(const Rational& tol) const;
  std::string str() const;

 private:
  void add_term(const BigInt& radicand, const Rational& coeff);
  std::map<BigInt, Rational> terms_;  // squarefree radicand -> nonzero coefficient
};

/// Splits n > 0 as s^2 * m with m squarefree, by trial division.
/// Throws std::domain_error when n is too large to resolve.
void squarefree_split(const BigInt& n, BigInt& square_root_part, BigInt& squarefree_part);

}  // namespace dyntop
