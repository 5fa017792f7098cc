#include "dyntop/rational.hpp"

#include <sstream>

namespace dyntop {

std::string to_string(const BigInt& n) { return n.str(); }

std::string to_string(const Rational& r) {
  if (den(r) == 1) return num(r).str();
  return num(r).str() + "/" + den(r).str();
}

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) {
      return Rational(BigInt(std::string(text)));
    }
    BigInt p{std::string(text.substr(0, slash))};
    BigInt q{std::string(text.substr(slash + 1))};
    if (q == 0) throw std::invalid_argument("zero denominator");
    return Rational(p, q);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument("bad rational literal '" + std::string(text) + "': " + e.what());
  }
}

BigInt floor_div(const Rational& r) {
  BigInt q = num(r) / den(r);
  if (num(r) < 0 && q * den(r) != num(r)) --q;
  return q;
}

}  // namespace dyntop
