#include "dyntop/enclosure.hpp"

namespace dyntop {

Enclosure sqrt_enclose(const Rational& r, const Rational& tol) {
  if (r < 0) throw std::domain_error("sqrt_enclose of negative value");
  if (tol <= 0) throw std::invalid_argument("sqrt_enclose requires tol > 0");
  if (r == 0) return {Rational(0), Rational(0)};

  const BigInt p = num(r), q = den(r);
  BigInt rp, rq;
  if (is_perfect_square(p, rp) && is_perfect_square(q, rq)) {
    Rational exact(rp, rq);
    return {exact, exact};
  }

  // sqrt(p/q) = sqrt(p*q)/q. With k the smallest power of two such that
  // 1/(q*k) <= tol and u = floor(k*sqrt(p*q)):  u/(qk) <= sqrt(r) < (u+1)/(qk).
  BigInt k = 1;
  while (Rational(1, q * k) > tol) k <<= 1;
  const BigInt u = isqrt(p * q * k * k);
  return {Rational(u, q * k), Rational(u + 1, q * k)};
}

}  // namespace dyntop
