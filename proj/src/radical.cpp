#include "dyntop/radical.hpp"

#include <sstream>

namespace dyntop {

void squarefree_split(const BigInt& n, BigInt& square_root_part, BigInt& squarefree_part) {
  if (n <= 0) throw std::domain_error("squarefree_split requires n > 0");
  BigInt s = 1, m = 1, rest = n;
  for (BigInt d = 2; d * d <= rest; ++d) {
    if (d > (1 << 21)) {
      // Remaining cofactor has no small factors; it is either prime,
      // a perfect square of a prime, or out of supported range.
      BigInt root;
      if (is_perfect_square(rest, root)) {
        s *= root;
        rest = 1;
      }
      break;
    }
    unsigned exp = 0;
    while (rest % d == 0) {
      rest /= d;
      ++exp;
    }
    if (exp == 0) continue;
    for (unsigned j = 0; j + 1 < exp; j += 2) s *= d;
    if (exp % 2 == 1) m *= d;
  }
  if (rest > 1) {
    if (rest > BigInt(1) << 84)
      throw std::domain_error("radicand too large to factor: " + rest.str());
    m *= rest;
  }
  square_root_part = s;
  squarefree_part = m;
}

RadicalSum::RadicalSum(const Rational& value) { add_term(1, value); }

RadicalSum RadicalSum::sqrt_of(const Rational& r) {
  if (r < 0) throw std::domain_error("sqrt_of negative value");
  RadicalSum out;
  if (r == 0) return out;
  // sqrt(p/q) = sqrt(p*q)/q = (s/q) * sqrt(m)
  BigInt s, m;
  squarefree_split(num(r) * den(r), s, m);
  out.add_term(m, Rational(s, den(r)));
  return out;
}

void RadicalSum::add_term(const BigInt& radicand, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.emplace(radicand, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

RadicalSum RadicalSum::operator+(const RadicalSum& o) const {
  RadicalSum out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, c);
  return out;
}

RadicalSum RadicalSum::operator-(const RadicalSum& o) const {
  RadicalSum out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
  return out;
}

bool RadicalSum::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

Rational RadicalSum::rational_part() const {
  auto it = terms_.find(BigInt(1));
  return it == terms_.end() ? Rational(0) : it->second;
}

Enclosure RadicalSum::enclose(const Rational& tol) const {
  Enclosure acc{Rational(0), Rational(0)};
  if (terms_.empty()) return acc;
  const Rational per_term = tol / Rational(static_cast<unsigned>(terms_.size()));
  for (const auto& [m, c] : terms_) {
    if (m == 1) {
      acc.lo += c;
      acc.hi += c;
      continue;
    }
    // Pick the per-term tolerance so that |c| * width <= per_term.
    Rational mag = c < 0 ? -c : c;
    Enclosure e = sqrt_enclose(Rational(m), per_term / mag);
    if (c >= 0) {
      acc.lo += c * e.lo;
      acc.hi += c * e.hi;
    } else {
      acc.lo += c * e.hi;
      acc.hi += c * e.lo;
    }
  }
  return acc;
}

int RadicalSum::compare(const RadicalSum& a, const RadicalSum& b) {
  const RadicalSum d = a - b;
  if (d.terms_.empty()) return 0;
  // Nonzero by linear independence of sqrt over squarefree radicands;
  // refine until the bracket excludes zero.
  Rational tol(1, 16);
  for (;;) {
    Enclosure e = d.enclose(tol);
    if (e.lo > 0) return 1;
    if (e.hi < 0) return -1;
    tol /= 1024;
  }
}

std::string RadicalSum::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    if (m == 1)
      os << to_string(c);
    else
      os << to_string(c) << "*sqrt(" << m.str() << ")";
  }
  return os.str();
}

}  // namespace dyntop
