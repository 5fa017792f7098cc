#include "dyntop/systems.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace dyntop {

namespace {

BigInt mod_phase(BigInt phase, const BigInt& period) {
  phase %= period;
  if (phase < 0) phase += period;
  return phase;
}

std::optional<std::uint64_t> gap_of(const std::vector<std::uint64_t>& residues,
                                    std::uint64_t period) {
  if (residues.empty()) return std::nullopt;
  std::uint64_t worst = 0;
  for (std::size_t j = 0; j < residues.size(); ++j) {
    const std::uint64_t cur = residues[j];
    const std::uint64_t nxt =
        j + 1 < residues.size() ? residues[j + 1] : residues.front() + period;
    worst = std::max(worst, nxt - cur - 1);
  }
  return worst;
}

}  // namespace

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd_u64(a, b) * b;
}

SystemPresentation::SystemPresentation(std::vector<Piece> pieces)
    : pieces_(std::move(pieces)) {
  validate();
}

void SystemPresentation::validate() const {
  std::set<CylPoint> finite_pts;
  bool has_circle = false;
  for (const auto& pc : pieces_) {
    if (std::holds_alternative<FixedCircle>(pc)) has_circle = true;
  }
  for (const auto& pc : pieces_) {
    if (const auto* t = std::get_if<FiniteOrbitTable>(&pc)) {
      if (t->points.size() != t->succ.size())
        throw std::invalid_argument("orbit table: successor map not total");
      for (std::size_t s : t->succ)
        if (s >= t->points.size())
          throw std::invalid_argument("orbit table: successor out of range");
      for (const auto& p : t->points) {
        if (!finite_pts.insert(p).second)
          throw std::invalid_argument("pieces overlap at " + to_string(p));
        if (has_circle && p.x == 0)
          throw std::invalid_argument("finite piece collides with fixed circle");
      }
    } else if (const auto* lz = std::get_if<LazyCyclePiece>(&pc)) {
      if (lz->period <= 0) throw std::invalid_argument("lazy piece: period must be positive");
      if (!lz->decode) throw std::invalid_argument("lazy piece: missing codec");
      if (has_circle && lz->x_lo <= 0)
        throw std::invalid_argument("lazy piece x-range collides with fixed circle");
    }
  }
  // Lazy-vs-lazy and lazy-vs-finite disjointness via x-ranges.
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto* a = std::get_if<LazyCyclePiece>(&pieces_[i]);
    if (!a) continue;
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
      if (i == j) continue;
      if (const auto* b = std::get_if<LazyCyclePiece>(&pieces_[j])) {
        if (j < i) continue;
        if (!(a->x_hi < b->x_lo || b->x_hi < a->x_lo))
          throw std::invalid_argument("lazy pieces' x-ranges overlap");
      } else if (const auto* t = std::get_if<FiniteOrbitTable>(&pieces_[j])) {
        for (const auto& p : t->points)
          if (a->x_lo <= p.x && p.x <= a->x_hi)
            throw std::invalid_argument("finite piece enters lazy x-range");
      }
    }
  }
}

PointRef SystemPresentation::table_point(std::uint32_t piece, std::size_t index) const {
  const auto& t = std::get<FiniteOrbitTable>(pieces_.at(piece));
  if (index >= t.points.size()) throw std::out_of_range("table index");
  return PointRef{piece, index};
}

PointRef SystemPresentation::cycle_point(std::uint32_t piece, BigInt phase) const {
  const auto& lz = std::get<LazyCyclePiece>(pieces_.at(piece));
  return PointRef{piece, mod_phase(std::move(phase), lz.period)};
}

PointRef SystemPresentation::circle_point(std::uint32_t piece, const Rational& height) const {
  (void)std::get<FixedCircle>(pieces_.at(piece));
  return PointRef{piece, canonical_y(height)};
}

CylPoint SystemPresentation::coords(const PointRef& p) const {
  const Piece& pc = pieces_.at(p.piece);
  if (const auto* t = std::get_if<FiniteOrbitTable>(&pc))
    return t->points.at(std::get<std::size_t>(p.local));
  if (const auto* lz = std::get_if<LazyCyclePiece>(&pc))
    return lz->decode(std::get<BigInt>(p.local));
  return CylPoint(Rational(0), std::get<Rational>(p.local));
}

PointRef SystemPresentation::step(const PointRef& p) const {
  const Piece& pc = pieces_.at(p.piece);
  if (const auto* t = std::get_if<FiniteOrbitTable>(&pc))
    return PointRef{p.piece, t->succ.at(std::get<std::size_t>(p.local))};
  if (const auto* lz = std::get_if<LazyCyclePiece>(&pc))
    return PointRef{p.piece, mod_phase(std::get<BigInt>(p.local) + 1, lz->period)};
  return p;  // fixed circle
}

PointRef SystemPresentation::step_n(const PointRef& p, const BigInt& n) const {
  if (n < 0) throw std::invalid_argument("step_n requires n >= 0");
  const Piece& pc = pieces_.at(p.piece);
  if (std::holds_alternative<FixedCircle>(pc)) return p;
  if (const auto* lz = std::get_if<LazyCyclePiece>(&pc))
    return PointRef{p.piece, mod_phase(std::get<BigInt>(p.local) + n, lz->period)};
  // Finite table: walk with rho-shape detection so huge n stays cheap.
  const auto& t = std::get<FiniteOrbitTable>(pc);
  std::size_t cur = std::get<std::size_t>(p.local);
  std::unordered_map<std::size_t, std::uint64_t> first_seen;
  std::vector<std::size_t> order;  // order[k] = T^k of the start
  for (BigInt k = 0; k < n; ++k) {
    auto [it, inserted] = first_seen.emplace(cur, order.size());
    if (!inserted) {
      const std::uint64_t cyc_start = it->second;
      const std::uint64_t cyc_len = static_cast<std::uint64_t>(order.size()) - cyc_start;
      const std::uint64_t off =
          static_cast<std::uint64_t>((n - cyc_start) % cyc_len);
      return PointRef{p.piece, order[cyc_start + off]};
    }
    order.push_back(cur);
    cur = t.succ[cur];
  }
  return PointRef{p.piece, cur};
}

std::optional<BigInt> SystemPresentation::declared_period(const PointRef& p) const {
  const Piece& pc = pieces_.at(p.piece);
  if (std::holds_alternative<FixedCircle>(pc)) return BigInt(1);
  if (const auto* lz = std::get_if<LazyCyclePiece>(&pc)) return lz->period;
  return std::nullopt;
}

std::optional<BigInt> SystemPresentation::detect_period(const PointRef& p,
                                                        std::uint64_t max_steps) const {
  if (max_steps == 0) return std::nullopt;
  const Piece& pc = pieces_.at(p.piece);
  if (std::holds_alternative<FixedCircle>(pc)) return BigInt(1);
  if (const auto* lz = std::get_if<LazyCyclePiece>(&pc)) {
    // Phases form a single cycle of the declared length by construction.
    return lz->period <= max_steps ? std::optional<BigInt>(lz->period) : std::nullopt;
  }
  PointRef q = step(p);
  for (std::uint64_t m = 1; m <= max_steps; ++m) {
    if (q == p) return BigInt(m);
    q = step(q);
  }
  return std::nullopt;
}

ReturnTimeSet SystemPresentation::return_times(const PointRef& x, const Ball& U,
                                               std::uint64_t period_budget) const {
  auto period = detect_period(x, period_budget);
  if (!period || *period > period_budget)
    throw BudgetExceeded("return_times: point not periodic within budget");
  const std::uint64_t p = static_cast<std::uint64_t>(*period);
  ReturnTimeSet out;
  out.period = p;
  PointRef cur = x;
  for (std::uint64_t r = 0; r < p; ++r) {
    if (U.contains(coords(cur))) out.residues.push_back(r);
    cur = step(cur);
  }
  out.gap = gap_of(out.residues, p);
  return out;
}

std::vector<std::pair<std::uint64_t, CylPoint>> SystemPresentation::orbit_rows(
    const PointRef& start, std::uint64_t steps) const {
  std::vector<std::pair<std::uint64_t, CylPoint>> rows;
  rows.reserve(steps + 1);
  PointRef cur = start;
  for (std::uint64_t i = 0; i <= steps; ++i) {
    rows.emplace_back(i, coords(cur));
    cur = step(cur);
  }
  return rows;
}

std::size_t FiniteView::step_n(std::size_t i, std::uint64_t n) const {
  // rho-shape shortcut
  std::unordered_map<std::size_t, std::uint64_t> seen;
  std::vector<std::size_t> order;
  std::size_t cur = i;
  for (std::uint64_t k = 0; k < n; ++k) {
    auto [it, inserted] = seen.emplace(cur, k);
    if (!inserted) {
      const std::uint64_t cyc_start = it->second;
      const std::uint64_t cyc_len = k - cyc_start;
      return order[cyc_start + (n - cyc_start) % cyc_len];
    }
    order.push_back(cur);
    cur = next.at(cur);
  }
  return cur;
}

std::optional<std::size_t> FiniteView::index_of(const CylPoint& p) const {
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i] == p) return i;
  return std::nullopt;
}

std::optional<std::uint64_t> FiniteView::period_of(std::size_t i) const {
  std::size_t cur = next.at(i);
  for (std::uint64_t m = 1; m <= pts.size(); ++m) {
    if (cur == i) return m;
    cur = next.at(cur);
  }
  return std::nullopt;
}

ReturnTimeSet FiniteView::return_times(std::size_t x, const Ball& U) const {
  auto period = period_of(x);
  if (!period) throw BudgetExceeded("return_times: point is not periodic");
  ReturnTimeSet out;
  out.period = *period;
  std::size_t cur = x;
  for (std::uint64_t r = 0; r < *period; ++r) {
    if (U.contains(pts.at(cur))) out.residues.push_back(r);
    cur = next.at(cur);
  }
  out.gap = gap_of(out.residues, out.period);
  return out;
}

FiniteView materialize(const SystemPresentation& sys,
                       const std::vector<Rational>& circle_samples, std::uint64_t budget) {
  FiniteView out;
  std::vector<std::vector<std::size_t>> piece_base(sys.piece_count());
  // First pass: emit all points.
  for (std::uint32_t pi = 0; pi < sys.piece_count(); ++pi) {
    const Piece& pc = sys.piece(pi);
    if (const auto* t = std::get_if<FiniteOrbitTable>(&pc)) {
      for (const auto& p : t->points) out.pts.push_back(p);
    } else if (const auto* lz = std::get_if<LazyCyclePiece>(&pc)) {
      if (lz->period > budget)
        throw BudgetExceeded("materialize: lazy piece exceeds budget (" + lz->label + ")");
      for (BigInt ph = 0; ph < lz->period; ++ph) out.pts.push_back(lz->decode(ph));
    } else {
      for (const auto& h : circle_samples) out.pts.push_back(CylPoint(Rational(0), h));
    }
  }
  // Second pass: successors, using per-piece offsets.
  std::size_t base = 0;
  for (std::uint32_t pi = 0; pi < sys.piece_count(); ++pi) {
    const Piece& pc = sys.piece(pi);
    if (const auto* t = std::get_if<FiniteOrbitTable>(&pc)) {
      for (std::size_t s : t->succ) out.next.push_back(base + s);
      base += t->points.size();
    } else if (const auto* lz = std::get_if<LazyCyclePiece>(&pc)) {
      const std::uint64_t m = static_cast<std::uint64_t>(lz->period);
      for (std::uint64_t k = 0; k < m; ++k) out.next.push_back(base + (k + 1) % m);
      base += m;
    } else {
      for (std::size_t k = 0; k < circle_samples.size(); ++k) out.next.push_back(base + k);
      base += circle_samples.size();
    }
  }
  return out;
}

FiniteView make_rotation(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("rotation order must be positive");
  FiniteView out;
  for (std::uint64_t k = 0; k < m; ++k) {
    out.pts.push_back(CylPoint(Rational(0), canonical_y(Rational(2 * BigInt(k), m) - 1)));
    out.next.push_back((k + 1) % m);
  }
  return out;
}

}  // namespace dyntop
