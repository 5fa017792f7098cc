#pragma once

#include "dyntop/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace dyntop {

using Tuple = std::vector<std::int64_t>;

/// The cube P_m^(l) = {p : 0 <= p_i <= m}.
struct Cube {
  int dim;
  std::int64_t side;
  BigInt cardinality() const;
  bool contains(std::span<const std::int64_t> p) const;
};

/// Fully periodic subset of Z_+^l: v is a member iff (v_i mod period_i)_i is a
/// listed residue tuple. This is the lattice form every return-time set of a
/// periodic orbit takes, and it is closed under the algebra below.
class PeriodicSet {
 public:
  PeriodicSet(Tuple period, std::set<Tuple> residues);

  int dim() const { return static_cast<int>(period_.size()); }
  const Tuple& period() const { return period_; }
  const std::set<Tuple>& residues() const { return residues_; }
  bool empty() const { return residues_.empty(); }
  bool member(std::span<const std::int64_t> v) const;

  /// Exact rewrite to a finer (componentwise multiple) period vector.
  PeriodicSet refine(const Tuple& finer_period) const;

  PeriodicSet intersect(const PeriodicSet& other, std::uint64_t box_budget = 1u << 22) const;

  /// Minkowski sum with P_n^(l) in residue arithmetic. Agrees with the true
  /// sum from the first period block onward; near zero it may include points
  /// whose preimage wraps, so consumers re-verify extracted elements.
  PeriodicSet thicken(std::int64_t n) const;

  /// {v : exists a >= 0 with v + a*(1,..,1) in S}. Requires uniform periods.
  PeriodicSet diagonal_saturate() const;

  /// Exact syndetic gap: least m such that every a in Z_+^l has some
  /// p in P_m^(l) with a+p in the set. Absent when the set is empty.
  std::optional<std::int64_t> syndetic_gap(std::uint64_t box_budget = 1u << 22) const;

  /// Members inside [0, bound]^l in lexicographic order.
  std::vector<Tuple> window(std::int64_t bound, std::uint64_t max_points = 1u << 22) const;

 private:
  Tuple period_;
  std::set<Tuple> residues_;
};

/// A syndetic set in lattice form together with its verified gap certificate.
struct SyndeticPresentation {
  PeriodicSet set;
  std::int64_t gap;
};

/// Builds a presentation by computing the exact gap. Throws DegenerateInput
/// on an empty set.
SyndeticPresentation certify_syndetic(PeriodicSet set);

/// Product of one-dimensional syndetic presentations: lattice periods and
/// residues multiply, the gap is the max of the factor gaps.
SyndeticPresentation product_syndetic(const std::vector<SyndeticPresentation>& factors);

/// One-dimensional return-time lattice {r + period Z_+ : r in residues}.
SyndeticPresentation syndetic_from_residues(std::int64_t period,
                                            const std::vector<std::int64_t>& residues);

// ---------------------------------------------------------------------------

struct SyndeticWindowVerdict {
  bool holds;
  std::optional<Tuple> counterexample;  // first failing base point
  std::uint64_t points_checked = 0;
};

/// Exhaustive check of the gap condition on [0, W-m]^l for an arbitrary
/// membership predicate.
SyndeticWindowVerdict is_syndetic_window(int dim,
                                         const std::function<bool(std::span<const std::int64_t>)>& member,
                                         std::int64_t gap, std::int64_t window,
                                         std::uint64_t budget = 1u << 24);

// ---------------------------------------------------------------------------

/// Intensional thickly syndetic set: for each cube size n the generator
/// produces a syndetic set S_n whose P_n-translates stay inside the set.
/// Generators may be partial (max_cube); asking beyond the certified range
/// throws BudgetExceeded.
struct TsPresentation {
  int dim;
  std::string name;
  std::function<SyndeticPresentation(std::int64_t)> generator;
  std::function<bool(std::span<const std::int64_t>)> member;
  std::optional<std::int64_t> max_cube;
};

/// The filter property, constructively: the generator of the intersection at
/// cube size n takes S_n from F1 (gap m), S_(n+m) from F2, and shifts every
/// base point of the latter into S_n by the lexicographically least element
/// of P_m^(l) that works.
TsPresentation ts_intersect(const TsPresentation& F1, const TsPresentation& F2);

struct TsWindowValidation {
  std::int64_t cube;
  std::int64_t claimed_gap;
  std::int64_t recomputed_gap;
  bool gap_ok;
  bool translates_ok;            // window ∩ (S_n ⊕ P_n) all satisfy membership
  std::uint64_t points_checked;
  bool ok() const { return gap_ok && translates_ok; }
};

/// Validates the TsPresentation invariant at one cube size over [0, window]^l.
TsWindowValidation validate_ts_window(const TsPresentation& F, std::int64_t n,
                                      std::int64_t window);

// --------------------------- fixture presentations ------------------------

/// Z_+ \ {a * b^k : k >= 0} with an explicit lattice generator (a >= 1, b >= 2).
TsPresentation ts_complement_geometric(std::int64_t a, std::int64_t b);

/// Everything (the trivial thickly syndetic set) in dimension l.
TsPresentation ts_all(int dim);

/// Z_+^2 with the vertical lines x in {a b^k} removed.
TsPresentation ts_grid_column_free(std::int64_t a, std::int64_t b);

/// Z_+^2 with the horizontal lines y in {a b^k} removed.
TsPresentation ts_grid_row_free(std::int64_t a, std::int64_t b);

/// Z_+^2 with the diagonal points (a b^k, a b^k) removed.
TsPresentation ts_grid_diag_free(std::int64_t a, std::int64_t b);

}  // namespace dyntop
