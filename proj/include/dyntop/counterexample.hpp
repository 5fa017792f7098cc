#pragma once

#include "dyntop/cylinder.hpp"
#include "dyntop/systems.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dyntop {

/// One basic periodic piece I_i embedded in the cylinder: left edge descending
/// from A_i, a zigzag across the bottom band, right edge descending from C_i,
/// and the wrap D_i -> A_i. Points are addressed by cycle position; the cycle
/// has length 2^(i+1) + 4i + 1 and is never enumerated.
///
/// Anchors: B_i = ((2i+1)/(2i(i+1)), 0), C_i = (1/i, 0), A_i above B_i at
/// y = 1 and D_i below C_i at y = -1 (canonically 1).
class BasicPiece {
 public:
  explicit BasicPiece(std::uint32_t i);

  std::uint32_t index() const { return i_; }
  const BigInt& cycle_length() const { return m_; }
  const Rational& left_x() const { return b_; }    // B_i.x
  const Rational& right_x() const { return c_; }   // C_i.x
  const Rational& width() const { return w_; }
  const Rational& column_step() const { return dx_; }
  Rational band_height() const { return Rational(1, 2 * BigInt(i_)); }

  CylPoint decode(const BigInt& position) const;

  BigInt position_A() const { return 0; }
  BigInt position_B() const { return BigInt(2 * i_); }
  BigInt position_C() const { return BigInt(2 * i_) + (BigInt(1) << (i_ + 1)); }
  BigInt position_D() const { return m_ - 1; }

  CylPoint point_A() const { return decode(position_A()); }
  CylPoint point_B() const { return decode(position_B()); }
  CylPoint point_C() const { return decode(position_C()); }
  CylPoint point_D() const { return decode(position_D()); }

  /// All cycle positions whose points lie in the open ball, found from the
  /// coordinate lattice without walking the cycle. Throws BudgetExceeded when
  /// more than `budget` positions qualify.
  std::vector<BigInt> positions_in_ball(const Ball& ball, std::uint64_t budget = 1u << 16) const;

  bool ball_contains_position(const Ball& ball, const BigInt& position) const {
    return ball.contains(decode(position));
  }

  LazyCyclePiece as_lazy_piece() const;

 private:
  std::uint32_t i_;
  BigInt m_;
  Rational b_, c_, w_, dx_;
};

/// Truncation X_N: the fixed circle piece (index 0) plus I_1..I_N (indices
/// 1..N) as lazy pieces.
struct Truncation {
  std::uint32_t levels;
  SystemPresentation sys;
  std::vector<BasicPiece> pieces;  // pieces[i-1] = I_i

  PointRef circle(const Rational& height) const { return sys.circle_point(0, height); }
  PointRef cycle(std::uint32_t i, BigInt position) const {
    return sys.cycle_point(i, std::move(position));
  }
  PointRef limit_A() const { return sys.circle_point(0, Rational(1)); }
  PointRef limit_B() const { return sys.circle_point(0, Rational(0)); }
};

Truncation build_truncation(std::uint32_t levels);

// ---------------------------------------------------------------------------

struct Claim1Check {
  std::vector<int> alpha;  // in {0,1}^d, nonzero
  BigInt time;             // nbar . alpha
  Rational dist_sq_value;
  Rational bound_sq;       // eps^2
};

/// Verified witness that (A,B) is regionally proximal of order d at scale eps:
/// level i with (2i+1)/(2i(i+1)) < eps and (1+d)di < 2^i, times
/// nbar = (2i, 4i, ..., 2di), and one exact distance check per alpha.
struct Claim1Witness {
  std::uint32_t d;
  Rational eps;
  std::uint32_t level;           // selected i (least feasible)
  std::vector<BigInt> nbar;
  Rational approx_dist_sq;       // dist_sq(A_i, A) = dist_sq(B_i, B) = b_i^2
  std::vector<Claim1Check> checks;
};

Claim1Witness verify_claim1(std::uint32_t d, const Rational& eps,
                            std::uint64_t step_budget = 1u << 24);

/// Re-runs every comparison of a witness from scratch (selection rule, step
/// arithmetic, exact distances). Returns false on any mismatch.
bool recheck_claim1(const Claim1Witness& w);

// ---------------------------------------------------------------------------

struct StepBoundReport {
  std::uint32_t level;
  bool exhaustive;
  std::uint64_t checked;
  Rational max_step_dist_sq;
  Rational bound_sq;  // (1/(2i))^2
  bool ok;
};

/// Checks dist_sq(TQ, Q) <= (1/(2i))^2 over I_i: exhaustively when the cycle
/// fits the budget, otherwise on a deterministic sample that always includes
/// the four corner transitions.
StepBoundReport step_distance_bound_check(std::uint32_t i, std::uint64_t sample_budget);

// ---------------------------------------------------------------------------

struct RefutationPointRecord {
  BigInt position;       // of P in I_i
  CylPoint point;
  std::uint64_t residue_count;   // |R_1|
  std::uint64_t checks;          // residue pairs examined
};

struct RefutationLevel {
  std::uint32_t level;
  BigInt cycle_length;
  bool vacuous;                  // I_i does not meet U_1
  std::vector<RefutationPointRecord> points;
  std::uint64_t violations;
};

struct RefutationReport {
  Rational c, dd;
  std::uint32_t k;               // least k with c > 2/k
  Rational r1, r2;               // chosen ball radii
  Rational diam_cap;             // the min{(c-dd)/4, (2k+1)/(2k(k+1))} bound
  Rational separation_lb;        // certified lower bound on rho(cl U1, cl U2)
  std::uint32_t max_level;
  std::vector<RefutationLevel> levels;
  bool violation_found;
};

/// Claim 2 bounded refutation: for C = (0,c), D = (0,dd) builds the proof's
/// neighborhoods and exhausts, level by level, all residue pairs r1, r2 of
/// returns of P to U_1, checking T^(r1+r2) P never lands in U_2.
RefutationReport refute_indfip(const Rational& c, const Rational& dd, std::uint32_t max_level,
                               std::uint64_t candidate_budget = 1u << 16);

bool recheck_refutation(const RefutationReport& report);

// ---------------------------------------------------------------------------

struct GeneralRpWitness {
  Rational c_height;       // C = (0, c)
  std::uint32_t d;
  Rational eps;
  std::uint32_t level;     // piece index of the approximants
  BigInt x_position, y_position;
  CylPoint x_approx, y_approx;
  std::vector<BigInt> nbar;
  std::vector<Claim1Check> checks;   // same record shape as claim 1
};

/// Bounded search for the Remark's statement (C,B) in RP^[d] for C on the
/// limit circle, C != B: scans pieces i <= level_bound, approximants within
/// eps, and the full box of time vectors with entries in [1, step_bound].
/// Absent is a legal outcome. Throws BudgetExceeded when the search space
/// exceeds the step budget.
std::optional<GeneralRpWitness> rp_infty_witness_general(const Rational& c_height,
                                                         std::uint32_t d, const Rational& eps,
                                                         std::uint32_t level_bound,
                                                         std::uint64_t step_bound,
                                                         std::uint64_t budget = 1u << 26);

bool recheck_general_rp(const GeneralRpWitness& w);

}  // namespace dyntop
