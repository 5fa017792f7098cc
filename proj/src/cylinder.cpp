#include "dyntop/cylinder.hpp"

namespace dyntop {

Rational canonical_y(const Rational& y) {
  if (y < -1 || y > 1) throw std::invalid_argument("y out of [-1,1]: " + to_string(y));
  return y == -1 ? Rational(1) : y;
}

CylPoint::CylPoint(Rational px, Rational py) : x(std::move(px)), y(canonical_y(py)) {
  if (x < 0 || x > 1) throw std::invalid_argument("x out of [0,1]: " + to_string(x));
}

Rational dist_sq(const CylPoint& a, const CylPoint& b) {
  Rational dx = a.x - b.x;
  if (dx < 0) dx = -dx;
  Rational dy = a.y - b.y;
  if (dy < 0) dy = -dy;
  const Rational wrap = 2 - dy;
  if (wrap < dy) dy = wrap;
  return dx * dx + dy * dy;
}

bool dist_lt(const CylPoint& a, const CylPoint& b, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("dist_lt requires eps > 0");
  return dist_sq(a, b) < eps * eps;
}

std::string to_string(const CylPoint& p) {
  return "(" + to_string(p.x) + ", " + to_string(p.y) + ")";
}

CylPoint parse_cyl_point(std::string_view text) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')')
    throw std::invalid_argument("bad point literal: " + std::string(text));
  text.remove_prefix(1);
  text.remove_suffix(1);
  const auto comma = text.find(',');
  if (comma == std::string_view::npos)
    throw std::invalid_argument("bad point literal: missing comma");
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  return CylPoint(parse_rational(trim(text.substr(0, comma))),
                  parse_rational(trim(text.substr(comma + 1))));
}

}  // namespace dyntop
