#pragma once

#include "dyntop/cylinder.hpp"
#include "dyntop/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace dyntop {

/// Explicit finite piece: point list plus a total successor map (indices).
/// Successors stay inside the table, so the piece is closed under the map.
struct FiniteOrbitTable {
  std::vector<CylPoint> points;
  std::vector<std::size_t> succ;
};

/// The fixed circle {0} x [-1,1]/~ ; every point is fixed, points are
/// addressed lazily by their canonical height.
struct FixedCircle {};

/// Lazily presented periodic cycle: a phase in [0, period) decodes to a
/// point, the map advances the phase by one. The period is declared by the
/// constructor, never enumerated.
struct LazyCyclePiece {
  BigInt period;
  std::function<CylPoint(const BigInt&)> decode;
  Rational x_lo, x_hi;  // closed x-range, for disjointness checks
  std::string label;
};

using Piece = std::variant<FiniteOrbitTable, FixedCircle, LazyCyclePiece>;

/// A point of a presentation: owning piece + local address.
/// Local address: table index, cycle phase, or circle height.
struct PointRef {
  std::uint32_t piece = 0;
  std::variant<std::size_t, BigInt, Rational> local;

  friend bool operator==(const PointRef&, const PointRef&) = default;
};

struct ReturnTimeSet {
  std::vector<std::uint64_t> residues;  // sorted, within [0, period)
  std::uint64_t period = 1;
  /// Syndetic gap certificate: least m such that every n has some
  /// 0 <= j <= m with n+j in the set. Absent when residues are empty.
  std::optional<std::uint64_t> gap;
};

class SystemPresentation {
 public:
  using Point = PointRef;

  explicit SystemPresentation(std::vector<Piece> pieces);

  std::size_t piece_count() const { return pieces_.size(); }
  const Piece& piece(std::size_t i) const { return pieces_.at(i); }

  PointRef table_point(std::uint32_t piece, std::size_t index) const;
  PointRef cycle_point(std::uint32_t piece, BigInt phase) const;
  PointRef circle_point(std::uint32_t piece, const Rational& height) const;

  CylPoint coords(const PointRef& p) const;
  PointRef step(const PointRef& p) const;
  PointRef step_n(const PointRef& p, const BigInt& n) const;
  bool points_equal(const PointRef& a, const PointRef& b) const { return a == b; }
  Rational dist_sq(const PointRef& a, const PointRef& b) const {
    return ::dyntop::dist_sq(coords(a), coords(b));
  }

  /// Declared period when the piece knows it without walking.
  std::optional<BigInt> declared_period(const PointRef& p) const;

  /// Smallest m <= max_steps with T^m p = p, walking honestly on finite
  /// pieces and answering from the declared period on lazy ones.
  std::optional<BigInt> detect_period(const PointRef& p, std::uint64_t max_steps) const;

  /// Residues {0 <= r < period : T^r x in U} with a syndetic gap certificate.
  /// Throws BudgetExceeded when the period is not detectable within budget.
  ReturnTimeSet return_times(const PointRef& x, const Ball& U,
                             std::uint64_t period_budget = 1u << 20) const;

  /// Orbit rows (step, point) for n = 0..steps.
  std::vector<std::pair<std::uint64_t, CylPoint>> orbit_rows(const PointRef& start,
                                                             std::uint64_t steps) const;

 private:
  void validate() const;
  std::vector<Piece> pieces_;
};

/// Materialized finite system: indexable points with successor indices.
struct FiniteView {
  using Point = std::size_t;

  std::vector<CylPoint> pts;
  std::vector<std::size_t> next;

  std::size_t size() const { return pts.size(); }
  std::size_t step(std::size_t i) const { return next.at(i); }
  bool points_equal(std::size_t a, std::size_t b) const { return a == b; }
  Rational dist_sq(std::size_t a, std::size_t b) const {
    return ::dyntop::dist_sq(pts.at(a), pts.at(b));
  }
  std::size_t step_n(std::size_t i, std::uint64_t n) const;
  std::optional<std::size_t> index_of(const CylPoint& p) const;

  /// Least period of point i, or absent when i is not periodic (pre-periodic
  /// tail of a non-injective map).
  std::optional<std::uint64_t> period_of(std::size_t i) const;

  ReturnTimeSet return_times(std::size_t x, const Ball& U) const;
};

/// Enumerates a presentation into a FiniteView. Lazy pieces are expanded when
/// their period fits the budget; the circle contributes the given sample
/// heights. Throws BudgetExceeded otherwise.
FiniteView materialize(const SystemPresentation& sys,
                       const std::vector<Rational>& circle_samples = {},
                       std::uint64_t budget = 1u << 16);

/// Rigid rotation k -> k+1 on Z/m realized on the circle (heights 2k/m - 1).
FiniteView make_rotation(std::uint64_t m);

/// Product system: componentwise action, max metric. The max of the squared
/// component distances is the square of the max metric, so comparisons stay
/// exact and rational.
template <class SA, class SB>
struct ProductSystem {
  using Point = std::pair<typename SA::Point, typename SB::Point>;
  const SA& a;
  const SB& b;

  Point step(const Point& p) const { return {a.step(p.first), b.step(p.second)}; }
  bool points_equal(const Point& p, const Point& q) const {
    return a.points_equal(p.first, q.first) && b.points_equal(p.second, q.second);
  }
  Rational dist_sq(const Point& p, const Point& q) const {
    Rational da = a.dist_sq(p.first, q.first);
    Rational db = b.dist_sq(p.second, q.second);
    return da < db ? db : da;
  }
};

template <class SA, class SB>
ProductSystem<SA, SB> product(const SA& a, const SB& b) {
  return ProductSystem<SA, SB>{a, b};
}

/// Honest walking period detector for any system (used for products and
/// cross-checks): smallest m <= max_steps with T^m p = p.
template <class S>
std::optional<std::uint64_t> walk_period(const S& s, const typename S::Point& p,
                                         std::uint64_t max_steps) {
  auto q = s.step(p);
  for (std::uint64_t m = 1; m <= max_steps; ++m) {
    if (s.points_equal(p, q)) return m;
    q = s.step(q);
  }
  return std::nullopt;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);

}  // namespace dyntop
