#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dyntop {

// Arbitrary-precision integers and reduced rationals. cpp_rational keeps
// gcd(|num|, den) == 1 and den >= 1 as a class invariant, which is exactly
// the canonical form every module relies on.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

/// Floor square root of a non-negative integer.
inline BigInt isqrt(const BigInt& n) {
  if (n < 0) throw std::domain_error("isqrt of negative integer");
  return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const BigInt& n, BigInt& root) {
  if (n < 0) return false;
  root = isqrt(n);
  return root * root == n;
}

/// Serializes as "p/q", with "/q" omitted when q == 1.
std::string to_string(const Rational& r);
std::string to_string(const BigInt& n);

/// Parses "p" or "p/q" (q > 0 after normalization). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Largest integer k with k <= r.
BigInt floor_div(const Rational& r);

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace dyntop
