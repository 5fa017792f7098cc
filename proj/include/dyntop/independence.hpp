#pragma once

#include "dyntop/systems.hpp"
#include "dyntop/zplus.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace dyntop {

using PointSet = boost::dynamic_bitset<>;

PointSet set_of(std::size_t universe, std::initializer_list<std::size_t> members);
PointSet ball_members(const FiniteView& sys, const Ball& ball);

/// T^{-t} A.
PointSet preimage(const FiniteView& sys, const PointSet& A, std::uint64_t t);

/// Finite cover with explicit membership bitsets; elements nonempty, union X.
struct Cover {
  std::vector<PointSet> elements;
};
Cover make_cover(std::size_t universe, std::vector<PointSet> elements);

struct JoinCount {
  std::vector<PointSet> cells;      // nonempty join cells, deduplicated
  std::size_t minimal_subcover;     // exact unless exact == false
  bool exact;
  std::size_t greedy_upper_bound;
};

/// Join cover \/ T^{-t_i} U and its minimal subcover cardinality, exact via
/// branch-and-bound (greedy incumbent only prunes). greedy_only produces a
/// labeled upper bound instead.
JoinCount join_and_count(const FiniteView& sys, const Cover& cover,
                         const std::vector<std::uint64_t>& times, bool greedy_only = false,
                         std::uint64_t cell_budget = 1u << 14);

struct SeqEntropyPoint {
  std::size_t n;
  std::size_t cover_count;  // N(join of the first n pullbacks)
  double quotient;          // log(cover_count)/n, reporting only
};

std::vector<SeqEntropyPoint> seq_entropy_estimate(const FiniteView& sys, const Cover& cover,
                                                  const std::vector<std::uint64_t>& sequence);

/// Admissibility of a cover for a tuple: every element's closure (= itself on
/// explicit finite sets) omits at least one tuple point.
bool is_admissible(const Cover& cover, const std::vector<std::size_t>& tuple);

// ---------------------------------------------------------------------------

struct PatternWitness {
  std::vector<int> pattern;  // values in [1, n]
  std::size_t witness;       // point with T^{t_i} witness in U_{pattern(i)}
};

struct IndependenceCertificate {
  std::vector<PointSet> neighborhoods;
  std::vector<std::uint64_t> times;  // strictly increasing
  std::vector<PatternWitness> patterns;  // all n^k patterns
};

/// Depth-first search over increasing time sets maintaining one feasible set
/// per pattern prefix (prefixes shared through the recursion tree); prunes as
/// soon as any pattern's feasible set empties.
std::optional<IndependenceCertificate> independence_search(const FiniteView& sys,
                                                           const std::vector<PointSet>& nbhds,
                                                           std::size_t k, std::uint64_t horizon);

/// Independent checker: only stepping and set membership.
bool verify_independence_certificate(const FiniteView& sys, const IndependenceCertificate& cert);

// ---------------------------------------------------------------------------

struct IpCertificate {
  std::vector<std::uint64_t> generators;
  std::vector<std::uint64_t> ip_set;  // sorted nonzero {0,1}-sums
  /// Witnesses for the maximal patterns (J = whole IP-set). Any sub-(J,s)
  /// requirement is met by the same witness projected down, so these dominate.
  std::vector<PatternWitness> full_patterns;  // pattern values in {1,2}
};

struct IpFailure {
  std::vector<std::uint64_t> failing_J;   // subset of the IP-set
  std::vector<int> failing_s;             // signs in {1,2}, |J| entries
};

using IpCheckResult = std::variant<IpCertificate, IpFailure>;

/// Expands the finite IP-set of the generators and decides whether it is an
/// independence set for (A1, A2), reporting the first failing (J, s) in
/// prefix order otherwise. Generator count capped (default 4).
IpCheckResult ip_independence_check(const FiniteView& sys, const PointSet& A1, const PointSet& A2,
                                    const std::vector<std::uint64_t>& generators,
                                    std::size_t generator_cap = 4);

bool verify_ip_certificate(const FiniteView& sys, const PointSet& A1, const PointSet& A2,
                           const IpCertificate& cert);

// ---------------------------------------------------------------------------

/// Full transcript of the Lemma-3.1-style witness construction on a finite
/// system with fixed points x_1..x_n and a periodic point y.
struct SeTupleWitness {
  std::vector<std::size_t> fixed_points;
  std::size_t y;
  std::uint64_t period;
  std::vector<Rational> radii;
  std::size_t length;     // l
  std::int64_t cube;      // N
  Rational delta_sq;
  Rational delta_prime_sq;
  std::vector<std::vector<std::int64_t>> v_residues;        // per ball
  std::vector<std::vector<std::int64_t>> thickened_residues;  // per ball
  Tuple chosen_residues;  // extracted tuple of the pattern intersection
  std::vector<std::uint64_t> times;
  std::vector<std::uint64_t> shifts;  // per pattern: witness = T^shift y
  IndependenceCertificate certificate;
};

struct SeTupleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Constructs, per the proof scheme: the exact modulus delta', return-time
/// lattices N(y, V_i), product syndetic sets A_s, their P_N-thickenings, the
/// diagonally saturated orbit-witnessed sets, and their exact lattice
/// intersection; extracts a strictly increasing time vector and packages
/// per-pattern witnesses from y's orbit.
SeTupleWitness se_tuple_witness_from_fixed_points(const FiniteView& sys,
                                                  const std::vector<std::size_t>& fixed_points,
                                                  std::size_t y,
                                                  const std::vector<Rational>& radii,
                                                  std::size_t l, std::int64_t N);

}  // namespace dyntop
