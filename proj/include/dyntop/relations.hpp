#pragma once

#include "dyntop/cylinder.hpp"
#include "dyntop/rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace dyntop {

enum class ProximalVerdict { Proximal, AsymptoticToEqual, NotProximal };

/// Exact classification of a pair with finite joint trajectory data: either a
/// synchronizing time (orbits meet) or the positive minimum of dist_sq over
/// one joint eventual period plus tails.
struct PairClassification {
  ProximalVerdict verdict;
  std::optional<std::uint64_t> sync_time;   // least n with T^n x = T^n y
  std::optional<Rational> min_dist_sq;      // attained positive minimum
  std::optional<std::uint64_t> min_arg;     // first time attaining it
  std::uint64_t horizon = 0;                // scanned window [0, horizon)
};

/// Scans the pair trajectory until the joint state repeats (tail + cycle of
/// the pair walk covers every value the pair ever takes). Throws
/// BudgetExceeded when the joint state space is larger than `budget`.
template <class S>
PairClassification classify_proximal(const S& sys, const typename S::Point& x,
                                     const typename S::Point& y, std::uint64_t budget = 1u << 16) {
  using Point = typename S::Point;
  PairClassification out;
  if (sys.points_equal(x, y)) {
    out.verdict = ProximalVerdict::Proximal;
    out.sync_time = 0;
    out.horizon = 1;
    return out;
  }
  std::map<std::pair<Point, Point>, std::uint64_t> seen;
  Point a = x, b = y;
  std::optional<Rational> best;
  std::uint64_t best_at = 0;
  for (std::uint64_t n = 0;; ++n) {
    if (n > budget) throw BudgetExceeded("classify_proximal: joint trajectory budget");
    if (sys.points_equal(a, b)) {
      out.verdict = n == 0 ? ProximalVerdict::Proximal : ProximalVerdict::AsymptoticToEqual;
      out.sync_time = n;
      out.horizon = n + 1;
      return out;
    }
    auto [it, inserted] = seen.emplace(std::make_pair(a, b), n);
    if (!inserted) {
      out.verdict = ProximalVerdict::NotProximal;
      out.min_dist_sq = best;
      out.min_arg = best_at;
      out.horizon = n;
      return out;
    }
    const Rational d2 = sys.dist_sq(a, b);
    if (!best || d2 < *best) {
      best = d2;
      best_at = n;
    }
    a = sys.step(a);
    b = sys.step(b);
  }
}

struct DistalityViolation {
  std::size_t first, second;  // indices into the scanned point list
  std::uint64_t sync_time;
};

struct DistalityReport {
  std::uint64_t pairs_scanned = 0;
  bool truncated = false;  // budget cut the scan short
  std::vector<DistalityViolation> violations;
  bool violation_found() const { return !violations.empty(); }
};

/// Classifies every unordered pair of the given points, reporting proximal
/// non-equal pairs (distality counterexamples). Stops early once the pair
/// budget is spent and marks the report truncated.
template <class S>
DistalityReport distality_scan(const S& sys, const std::vector<typename S::Point>& points,
                               std::uint64_t pair_budget = 1u << 16) {
  DistalityReport rep;
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      if (rep.pairs_scanned >= pair_budget) {
        rep.truncated = true;
        return rep;
      }
      ++rep.pairs_scanned;
      const PairClassification c = classify_proximal(sys, points[a], points[b]);
      if (c.verdict != ProximalVerdict::NotProximal)
        rep.violations.push_back(DistalityViolation{a, b, *c.sync_time});
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

struct RegionalCheck {
  std::vector<int> alpha;
  BigInt time;
  Rational dist_sq_value;
};

/// Verified witness for regional proximality of order d at scale eps:
/// approximants within eps of the targets and a time vector whose nonzero
/// {0,1}-combinations all bring the approximants eps-close.
struct RegionalWitness {
  CylPoint x, y;            // target pair
  CylPoint x_approx, y_approx;
  Rational eps;
  std::uint32_t d;
  std::vector<BigInt> nbar;  // entries >= 1
  std::vector<RegionalCheck> checks;
};

struct RpSearchBounds {
  std::uint64_t nbar_max = 64;     // per-entry bound
  std::uint64_t budget = 1u << 24;  // candidate pairs x step box
};

/// Deterministic bounded search on a finite system: approximant candidates in
/// point-index order, then time vectors lexicographically (last entry
/// fastest). Returns the first verified witness or absent.
template <class S>
std::optional<RegionalWitness> rp_witness(const S& sys,
                                          const std::vector<typename S::Point>& points,
                                          const typename S::Point& x, const typename S::Point& y,
                                          std::uint32_t d, const Rational& eps,
                                          const RpSearchBounds& bounds,
                                          const std::function<CylPoint(const typename S::Point&)>&
                                              coords) {
  if (d == 0) throw std::invalid_argument("rp_witness requires d >= 1");
  if (eps <= 0) throw std::invalid_argument("rp_witness requires eps > 0");
  const Rational bound = eps * eps;
  const CylPoint cx = coords(x), cy = coords(y);

  std::vector<typename S::Point> near_x, near_y;
  for (const auto& p : points) {
    if (dist_lt(coords(p), cx, eps)) near_x.push_back(p);
    if (dist_lt(coords(p), cy, eps)) near_y.push_back(p);
  }
  BigInt box = 1;
  for (std::uint32_t j = 0; j < d; ++j) box *= bounds.nbar_max;
  if (BigInt(near_x.size()) * BigInt(near_y.size()) * box > bounds.budget)
    throw BudgetExceeded("rp_witness: search box exceeds budget");

  for (const auto& xp : near_x) {
    for (const auto& yp : near_y) {
      std::vector<BigInt> nbar(d, 1);
      for (;;) {
        bool ok = true;
        std::vector<RegionalCheck> checks;
        for (std::uint32_t mask = 1; ok && mask < (1u << d); ++mask) {
          RegionalCheck chk;
          BigInt n = 0;
          for (std::uint32_t j = 0; j < d; ++j) {
            const int bit = (mask >> j) & 1u;
            chk.alpha.push_back(bit);
            if (bit) n += nbar[j];
          }
          chk.time = n;
          auto a = xp, b = yp;
          for (BigInt s = 0; s < n; ++s) {
            a = sys.step(a);
            b = sys.step(b);
          }
          chk.dist_sq_value = sys.dist_sq(a, b);
          if (!(chk.dist_sq_value < bound)) ok = false;
          checks.push_back(std::move(chk));
        }
        if (ok) {
          RegionalWitness w;
          w.x = cx;
          w.y = cy;
          w.x_approx = coords(xp);
          w.y_approx = coords(yp);
          w.eps = eps;
          w.d = d;
          w.nbar = nbar;
          w.checks = std::move(checks);
          return w;
        }
        std::uint32_t j = d;
        bool advanced = false;
        while (j > 0) {
          --j;
          if (nbar[j] < bounds.nbar_max) {
            ++nbar[j];
            for (std::uint32_t t = j + 1; t < d; ++t) nbar[t] = 1;
            advanced = true;
            break;
          }
        }
        if (!advanced) break;
      }
    }
  }
  return std::nullopt;
}

/// Witness for a pair already known proximal: approximants are the points
/// themselves and a single synchronizing time (P subset of Q at witness level).
RegionalWitness witness_from_sync(const CylPoint& x, const CylPoint& y, const Rational& eps,
                                  std::uint64_t sync_time, const Rational& joint_dist_sq);

/// Re-verifies a regional witness from scratch through step and dist_lt.
/// The approximants are located in the system by their coordinates.
template <class S>
bool verify_regional_witness(const S& sys, const std::vector<typename S::Point>& points,
                             const RegionalWitness& w,
                             const std::function<CylPoint(const typename S::Point&)>& coords) {
  if (w.d == 0 || w.eps <= 0 || w.nbar.size() != w.d) return false;
  if (!dist_lt(w.x_approx, w.x, w.eps) || !dist_lt(w.y_approx, w.y, w.eps)) return false;
  for (const BigInt& n : w.nbar)
    if (n < 1) return false;
  std::optional<typename S::Point> xp, yp;
  for (const auto& p : points) {
    if (!xp && coords(p) == w.x_approx) xp = p;
    if (!yp && coords(p) == w.y_approx) yp = p;
  }
  if (!xp || !yp) return false;
  if (w.checks.size() != (std::size_t(1) << w.d) - 1) return false;
  std::size_t idx = 0;
  for (std::uint32_t mask = 1; mask < (1u << w.d); ++mask, ++idx) {
    const RegionalCheck& chk = w.checks[idx];
    if (chk.alpha.size() != w.d) return false;
    BigInt n = 0;
    for (std::uint32_t j = 0; j < w.d; ++j) {
      if (chk.alpha[j] != static_cast<int>((mask >> j) & 1u)) return false;
      if (chk.alpha[j]) n += w.nbar[j];
    }
    if (chk.time != n) return false;
    auto a = *xp, b = *yp;
    for (BigInt s = 0; s < n; ++s) {
      a = sys.step(a);
      b = sys.step(b);
    }
    if (sys.dist_sq(a, b) != chk.dist_sq_value) return false;
    if (!(chk.dist_sq_value < w.eps * w.eps)) return false;
  }
  return true;
}

}  // namespace dyntop
