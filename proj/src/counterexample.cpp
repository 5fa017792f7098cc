#include "dyntop/counterexample.hpp"

#include <algorithm>

namespace dyntop {

namespace {

Rational square(const Rational& r) { return r * r; }

/// Wrapped squared vertical distance between canonical heights.
Rational ydist_sq(const Rational& a, const Rational& b) {
  Rational dy = a - b;
  if (dy < 0) dy = -dy;
  const Rational wrap = 2 - dy;
  if (wrap < dy) dy = wrap;
  return dy * dy;
}

}  // namespace

BasicPiece::BasicPiece(std::uint32_t i) : i_(i) {
  if (i == 0) throw std::invalid_argument("piece index starts at 1");
  const BigInt bi(i);
  m_ = (BigInt(1) << (i + 1)) + 4 * bi + 1;
  b_ = Rational(2 * bi + 1, 2 * bi * (bi + 1));
  c_ = Rational(1, bi);
  w_ = Rational(1, 2 * bi * (bi + 1));
  dx_ = w_ / (BigInt(1) << i);
}

CylPoint BasicPiece::decode(const BigInt& position) const {
  BigInt pos = position % m_;
  if (pos < 0) pos += m_;
  const BigInt two_i(2 * BigInt(i_));
  if (pos <= two_i) {
    // left edge, height (2i - pos)/(2i); pos = 0 is A_i, pos = 2i is B_i
    return CylPoint(b_, Rational(two_i - pos, two_i));
  }
  const BigInt band = BigInt(1) << (i_ + 1);
  BigInt q = pos - two_i;
  if (q <= band) {
    BigInt s, j;
    if (q % 2 == 0) {
      s = q / 2;
      j = s % 2;
    } else {
      s = (q + 1) / 2;
      j = 1 - (s % 2);
    }
    return CylPoint(b_ + Rational(s) * dx_, Rational(j, two_i));
  }
  const BigInt t = pos - two_i - band;  // 1..2i, height -t/(2i)
  return CylPoint(c_, canonical_y(Rational(-t, two_i)));
}

std::vector<BigInt> BasicPiece::positions_in_ball(const Ball& ball, std::uint64_t budget) const {
  std::vector<BigInt> out;
  const Rational r_sq = square(ball.radius);
  auto push = [&](BigInt pos) {
    if (out.size() >= budget) throw BudgetExceeded("positions_in_ball: candidate budget");
    out.push_back(std::move(pos));
  };
  const BigInt two_i(2 * BigInt(i_));
  // Left edge: positions 0..2i, heights k/(2i) with k = 2i - pos.
  for (BigInt k = 0; k <= two_i; ++k) {
    if (ball.contains(CylPoint(b_, Rational(k, two_i)))) push(two_i - k);
  }
  // Right edge: positions 2i + 2^(i+1) + t, heights -t/(2i), t = 1..2i.
  const BigInt right_base = two_i + (BigInt(1) << (i_ + 1));
  for (BigInt t = 1; t <= two_i; ++t) {
    if (ball.contains(CylPoint(c_, canonical_y(Rational(-t, two_i))))) push(right_base + t);
  }
  // Zigzag columns s = 1..2^i at heights j/(2i): for each height, the
  // qualifying s form one contiguous interval (x is affine increasing in s).
  const BigInt s_max_all = BigInt(1) << i_;
  for (int j = 0; j <= 1; ++j) {
    const Rational y(j, two_i);
    const Rational slack = r_sq - ydist_sq(y, ball.center.y);
    if (slack <= 0) continue;
    auto inside = [&](const BigInt& s) {
      const Rational dxv = b_ + Rational(s) * dx_ - ball.center.x;
      return dxv * dxv < slack;
    };
    // Column nearest the ball center.
    Rational ideal = (ball.center.x - b_) / dx_;
    BigInt s0 = floor_div(ideal);
    if (s0 < 1) s0 = 1;
    if (s0 > s_max_all) s0 = s_max_all;
    if (!inside(s0) && s0 + 1 <= s_max_all && inside(s0 + 1)) ++s0;
    if (!inside(s0)) continue;
    // Expand to the interval's exact boundaries by binary search on each side.
    BigInt lo = 1, hi = s0;  // least inside
    if (inside(lo))
      hi = lo;
    else {
      // first inside in (lo, s0]
      BigInt a = lo, b2 = s0;
      while (a + 1 < b2) {
        BigInt mid = (a + b2) / 2;
        (inside(mid) ? b2 : a) = mid;
      }
      hi = b2;
    }
    const BigInt first = hi;
    BigInt a = s0, b2 = s_max_all;  // last inside in [s0, s_max]
    if (!inside(b2)) {
      while (a + 1 < b2) {
        BigInt mid = (a + b2) / 2;
        (inside(mid) ? a : b2) = mid;
      }
    } else {
      a = b2;
    }
    const BigInt last = a;
    if (BigInt(out.size()) + (last - first + 1) > budget)
      throw BudgetExceeded("positions_in_ball: zigzag interval exceeds budget");
    for (BigInt s = first; s <= last; ++s) {
      const BigInt jj(j);
      const BigInt q = ((s + jj) % 2 == 0) ? 2 * s : 2 * s - 1;
      push(two_i + q);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

LazyCyclePiece BasicPiece::as_lazy_piece() const {
  LazyCyclePiece lz;
  lz.period = m_;
  BasicPiece self = *this;
  lz.decode = [self](const BigInt& phase) { return self.decode(phase); };
  lz.x_lo = b_;
  lz.x_hi = c_;
  lz.label = "I_" + std::to_string(i_);
  return lz;
}

Truncation build_truncation(std::uint32_t levels) {
  if (levels == 0) throw std::invalid_argument("truncation needs at least one level");
  std::vector<Piece> pieces;
  pieces.emplace_back(FixedCircle{});
  std::vector<BasicPiece> basics;
  for (std::uint32_t i = 1; i <= levels; ++i) {
    basics.emplace_back(i);
    pieces.emplace_back(basics.back().as_lazy_piece());
  }
  return Truncation{levels, SystemPresentation(std::move(pieces)), std::move(basics)};
}

// ---------------------------------------------------------------------------

namespace {

std::uint32_t select_claim1_level(std::uint32_t d, const Rational& eps) {
  for (std::uint32_t i = 1;; ++i) {
    const BigInt bi(i);
    const Rational approach(2 * bi + 1, 2 * bi * (bi + 1));
    const BigInt steps = BigInt(1 + d) * d * bi;
    if (approach < eps && steps < (BigInt(1) << i)) return i;
  }
}

}  // namespace

Claim1Witness verify_claim1(std::uint32_t d, const Rational& eps, std::uint64_t step_budget) {
  if (d == 0) throw std::invalid_argument("verify_claim1 requires d >= 1");
  if (eps <= 0) throw std::invalid_argument("verify_claim1 requires eps > 0");
  const std::uint32_t i = select_claim1_level(d, eps);
  const BigInt max_steps = BigInt(1 + d) * d * i;
  if (max_steps > step_budget) throw BudgetExceeded("verify_claim1: step budget");

  const BasicPiece piece(i);
  Claim1Witness w;
  w.d = d;
  w.eps = eps;
  w.level = i;
  for (std::uint32_t j = 1; j <= d; ++j) w.nbar.emplace_back(2 * BigInt(j) * i);
  w.approx_dist_sq = square(piece.left_x());

  const Rational bound = square(eps);
  for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
    Claim1Check chk;
    BigInt n = 0;
    for (std::uint32_t j = 0; j < d; ++j) {
      const int bit = (mask >> j) & 1u;
      chk.alpha.push_back(bit);
      if (bit) n += w.nbar[j];
    }
    chk.time = n;
    chk.dist_sq_value = dist_sq(piece.decode(piece.position_A() + n),
                                piece.decode(piece.position_B() + n));
    chk.bound_sq = bound;
    if (!(chk.dist_sq_value < bound))
      throw std::logic_error("claim 1 check failed unexpectedly at level " + std::to_string(i));
    w.checks.push_back(std::move(chk));
  }
  return w;
}

bool recheck_claim1(const Claim1Witness& w) {
  if (w.d == 0 || w.eps <= 0) return false;
  if (w.level != select_claim1_level(w.d, w.eps)) return false;
  if (w.nbar.size() != w.d) return false;
  for (std::uint32_t j = 0; j < w.d; ++j)
    if (w.nbar[j] != 2 * BigInt(j + 1) * w.level) return false;
  const BasicPiece piece(w.level);
  if (w.approx_dist_sq != square(piece.left_x())) return false;
  if (!(w.approx_dist_sq < square(w.eps))) return false;
  if (w.checks.size() != (std::size_t(1) << w.d) - 1) return false;
  std::size_t idx = 0;
  for (std::uint32_t mask = 1; mask < (1u << w.d); ++mask, ++idx) {
    const Claim1Check& chk = w.checks[idx];
    if (chk.alpha.size() != w.d) return false;
    BigInt n = 0;
    for (std::uint32_t j = 0; j < w.d; ++j) {
      if (chk.alpha[j] != static_cast<int>((mask >> j) & 1u)) return false;
      if (chk.alpha[j]) n += w.nbar[j];
    }
    if (chk.time != n) return false;
    if (chk.bound_sq != square(w.eps)) return false;
    const Rational again = dist_sq(piece.decode(piece.position_A() + n),
                                   piece.decode(piece.position_B() + n));
    if (again != chk.dist_sq_value) return false;
    if (!(again < chk.bound_sq)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

StepBoundReport step_distance_bound_check(std::uint32_t i, std::uint64_t sample_budget) {
  const BasicPiece piece(i);
  StepBoundReport rep;
  rep.level = i;
  rep.bound_sq = square(Rational(1, 2 * BigInt(i)));
  rep.max_step_dist_sq = 0;
  rep.checked = 0;
  auto check_at = [&](const BigInt& pos) {
    const Rational d2 = dist_sq(piece.decode(pos + 1), piece.decode(pos));
    if (d2 > rep.max_step_dist_sq) rep.max_step_dist_sq = d2;
    ++rep.checked;
  };
  if (piece.cycle_length() <= sample_budget) {
    rep.exhaustive = true;
    for (BigInt pos = 0; pos < piece.cycle_length(); ++pos) check_at(pos);
  } else {
    rep.exhaustive = false;
    // Corner transitions and their neighbors, plus an even zigzag sample.
    std::vector<BigInt> sample = {piece.position_A(), piece.position_B() - 1, piece.position_B(),
                                  piece.position_C() - 1, piece.position_C(),
                                  piece.position_D() - 1, piece.position_D()};
    const BigInt band = BigInt(1) << (i + 1);
    const std::uint64_t n_zig = sample_budget > 64 ? sample_budget - 32 : 32;
    for (std::uint64_t k = 0; k < n_zig; ++k)
      sample.push_back(piece.position_B() + 1 + (band - 2) * k / n_zig);
    std::sort(sample.begin(), sample.end());
    sample.erase(std::unique(sample.begin(), sample.end()), sample.end());
    for (const BigInt& pos : sample) check_at(pos);
  }
  rep.ok = rep.max_step_dist_sq <= rep.bound_sq;
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

struct RefutationGeometry {
  std::uint32_t k;
  Rational r1, r2, diam_cap, separation_lb;
  Ball U1, U2;
};

RefutationGeometry refutation_geometry(const Rational& c, const Rational& dd) {
  if (!(0 <= dd && dd < c && c <= 1))
    throw DegenerateInput("refute_indfip requires 0 <= dd < c <= 1");
  std::uint32_t k = 1;
  while (!(c > Rational(2, BigInt(k)))) ++k;
  const BigInt bk(k);
  const Rational near_gap(2 * bk + 1, 2 * bk * (bk + 1));
  const Rational cap = std::min(Rational((c - dd) / 4), near_gap);
  const Rational r = 2 * cap / 5;  // 2r < cap and r + r < (c-dd)/4, both strict
  RefutationGeometry g;
  g.k = k;
  g.r1 = g.r2 = r;
  g.diam_cap = cap;
  g.separation_lb = (c - dd) - 2 * r;
  if (!(2 * g.r1 < cap) || !(g.separation_lb > 3 * (c - dd) / 4))
    throw DegenerateInput("refute_indfip: radii unconstructible");
  g.U1 = Ball{CylPoint(Rational(0), c), g.r1};
  g.U2 = Ball{CylPoint(Rational(0), dd), g.r2};
  return g;
}

}  // namespace

RefutationReport refute_indfip(const Rational& c, const Rational& dd, std::uint32_t max_level,
                               std::uint64_t candidate_budget) {
  const RefutationGeometry g = refutation_geometry(c, dd);
  RefutationReport rep;
  rep.c = c;
  rep.dd = dd;
  rep.k = g.k;
  rep.r1 = g.r1;
  rep.r2 = g.r2;
  rep.diam_cap = g.diam_cap;
  rep.separation_lb = g.separation_lb;
  rep.max_level = max_level;
  rep.violation_found = false;

  for (std::uint32_t i = 1; i <= max_level; ++i) {
    const BasicPiece piece(i);
    RefutationLevel lvl;
    lvl.level = i;
    lvl.cycle_length = piece.cycle_length();
    lvl.violations = 0;
    const std::vector<BigInt> u1 = piece.positions_in_ball(g.U1, candidate_budget);
    lvl.vacuous = u1.empty();
    for (const BigInt& pos : u1) {
      RefutationPointRecord rec;
      rec.position = pos;
      rec.point = piece.decode(pos);
      rec.residue_count = u1.size();  // |R_1| = number of U_1 positions on the cycle
      rec.checks = 0;
      // Residues r = (q - pos) mod m for q in u1; probe T^(r1+r2) P membership
      // in U_2 by decoding position pos + r1 + r2 = q1 + q2 - pos.
      for (const BigInt& q1 : u1) {
        for (const BigInt& q2 : u1) {
          BigInt target = (q1 + q2 - pos) % piece.cycle_length();
          if (target < 0) target += piece.cycle_length();
          ++rec.checks;
          if (g.U2.contains(piece.decode(target))) {
            ++lvl.violations;
            rep.violation_found = true;
          }
        }
      }
      lvl.points.push_back(std::move(rec));
    }
    rep.levels.push_back(std::move(lvl));
  }
  return rep;
}

bool recheck_refutation(const RefutationReport& rep) {
  RefutationGeometry g;
  try {
    g = refutation_geometry(rep.c, rep.dd);
  } catch (const DegenerateInput&) {
    return false;
  }
  if (g.k != rep.k || g.r1 != rep.r1 || g.r2 != rep.r2 || g.separation_lb != rep.separation_lb)
    return false;
  if (rep.levels.size() != rep.max_level) return false;
  bool any_violation = false;
  for (std::uint32_t i = 1; i <= rep.max_level; ++i) {
    const RefutationLevel& lvl = rep.levels[i - 1];
    if (lvl.level != i) return false;
    const BasicPiece piece(i);
    if (lvl.cycle_length != piece.cycle_length()) return false;
    const std::vector<BigInt> u1 = piece.positions_in_ball(g.U1);
    if (lvl.vacuous != u1.empty()) return false;
    if (lvl.points.size() != u1.size()) return false;
    std::uint64_t violations = 0;
    for (std::size_t pi = 0; pi < u1.size(); ++pi) {
      const RefutationPointRecord& rec = lvl.points[pi];
      if (rec.position != u1[pi]) return false;
      if (rec.point != piece.decode(u1[pi])) return false;
      if (rec.residue_count != u1.size()) return false;
      if (rec.checks != static_cast<std::uint64_t>(u1.size()) * u1.size()) return false;
      // Independent re-verification through step arithmetic: walk the two
      // residues from P and test the U_2 membership claim.
      for (const BigInt& q1 : u1) {
        for (const BigInt& q2 : u1) {
          BigInt m = piece.cycle_length();
          BigInt r1 = ((q1 - rec.position) % m + m) % m;
          BigInt r2 = ((q2 - rec.position) % m + m) % m;
          BigInt target = (rec.position + r1 + r2) % m;
          if (g.U2.contains(piece.decode(target))) ++violations;
        }
      }
    }
    if (violations != lvl.violations) return false;
    if (violations > 0) any_violation = true;
  }
  return any_violation == rep.violation_found;
}

// ---------------------------------------------------------------------------

std::optional<GeneralRpWitness> rp_infty_witness_general(const Rational& c_height,
                                                         std::uint32_t d, const Rational& eps,
                                                         std::uint32_t level_bound,
                                                         std::uint64_t step_bound,
                                                         std::uint64_t budget) {
  if (d == 0) throw std::invalid_argument("rp_infty_witness_general requires d >= 1");
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  const Rational c_canon = canonical_y(c_height);
  if (c_canon == 0)
    throw std::invalid_argument("C must differ from B = (0,0)");
  const CylPoint C(Rational(0), c_canon);
  const CylPoint B(Rational(0), Rational(0));
  const Ball near_C{C, eps}, near_B{B, eps};
  const Rational bound = eps * eps;

  for (std::uint32_t i = 1; i <= level_bound; ++i) {
    const BasicPiece piece(i);
    std::vector<BigInt> xs, ys;
    try {
      xs = piece.positions_in_ball(near_C);
      ys = piece.positions_in_ball(near_B);
    } catch (const BudgetExceeded&) {
      throw;  // caller chose eps so large the candidate set is unbounded
    }
    if (xs.empty() || ys.empty()) continue;

    // Search cost guard: pairs * step box size.
    BigInt box = 1;
    for (std::uint32_t j = 0; j < d; ++j) box *= step_bound;
    if (BigInt(xs.size()) * BigInt(ys.size()) * box > budget)
      throw BudgetExceeded("rp_infty_witness_general: search box exceeds budget");

    std::vector<BigInt> nbar(d, 1);
    for (const BigInt& px : xs) {
      for (const BigInt& py : ys) {
        // lexicographic scan of [1, step_bound]^d
        std::fill(nbar.begin(), nbar.end(), 1);
        for (;;) {
          bool all_ok = true;
          std::vector<Claim1Check> checks;
          for (std::uint32_t mask = 1; all_ok && mask < (1u << d); ++mask) {
            Claim1Check chk;
            BigInt n = 0;
            for (std::uint32_t j = 0; j < d; ++j) {
              const int bit = (mask >> j) & 1u;
              chk.alpha.push_back(bit);
              if (bit) n += nbar[j];
            }
            chk.time = n;
            chk.dist_sq_value = dist_sq(piece.decode(px + n), piece.decode(py + n));
            chk.bound_sq = bound;
            if (!(chk.dist_sq_value < bound)) all_ok = false;
            checks.push_back(std::move(chk));
          }
          if (all_ok) {
            GeneralRpWitness w;
            w.c_height = c_canon;
            w.d = d;
            w.eps = eps;
            w.level = i;
            w.x_position = px;
            w.y_position = py;
            w.x_approx = piece.decode(px);
            w.y_approx = piece.decode(py);
            w.nbar = nbar;
            w.checks = std::move(checks);
            return w;
          }
          // advance nbar lexicographically (last coordinate fastest)
          std::uint32_t j = d;
          while (j > 0) {
            --j;
            if (nbar[j] < step_bound) {
              ++nbar[j];
              for (std::uint32_t t = j + 1; t < d; ++t) nbar[t] = 1;
              break;
            }
            if (j == 0) goto next_pair;
          }
        }
      next_pair:;
      }
    }
  }
  return std::nullopt;
}

bool recheck_general_rp(const GeneralRpWitness& w) {
  if (w.d == 0 || w.eps <= 0 || w.nbar.size() != w.d) return false;
  const BasicPiece piece(w.level);
  if (piece.decode(w.x_position) != w.x_approx) return false;
  if (piece.decode(w.y_position) != w.y_approx) return false;
  const CylPoint C(Rational(0), w.c_height);
  const CylPoint B(Rational(0), Rational(0));
  if (!dist_lt(w.x_approx, C, w.eps) || !dist_lt(w.y_approx, B, w.eps)) return false;
  if (w.checks.size() != (std::size_t(1) << w.d) - 1) return false;
  std::size_t idx = 0;
  for (std::uint32_t mask = 1; mask < (1u << w.d); ++mask, ++idx) {
    const Claim1Check& chk = w.checks[idx];
    BigInt n = 0;
    for (std::uint32_t j = 0; j < w.d; ++j) {
      if (chk.alpha.at(j) != static_cast<int>((mask >> j) & 1u)) return false;
      if (chk.alpha[j]) n += w.nbar[j];
    }
    if (chk.time != n || chk.bound_sq != w.eps * w.eps) return false;
    const Rational again = dist_sq(piece.decode(w.x_position + n), piece.decode(w.y_position + n));
    if (again != chk.dist_sq_value || !(again < chk.bound_sq)) return false;
  }
  return true;
}

}  // namespace dyntop
