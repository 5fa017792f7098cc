#include "dyntop/independence.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dyntop {

PointSet set_of(std::size_t universe, std::initializer_list<std::size_t> members) {
  PointSet s(universe);
  for (std::size_t m : members) s.set(m);
  return s;
}

PointSet ball_members(const FiniteView& sys, const Ball& ball) {
  PointSet s(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i)
    if (ball.contains(sys.pts[i])) s.set(i);
  return s;
}

PointSet preimage(const FiniteView& sys, const PointSet& A, std::uint64_t t) {
  PointSet s(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i)
    if (A.test(sys.step_n(i, t))) s.set(i);
  return s;
}

Cover make_cover(std::size_t universe, std::vector<PointSet> elements) {
  PointSet all(universe);
  for (const auto& e : elements) {
    if (e.size() != universe) throw std::invalid_argument("cover element universe mismatch");
    if (e.none()) throw std::invalid_argument("cover elements must be nonempty");
    all |= e;
  }
  if (!all.all()) throw std::invalid_argument("cover does not cover the space");
  return Cover{std::move(elements)};
}

namespace {

std::size_t greedy_cover(const std::vector<PointSet>& cells, std::size_t universe) {
  PointSet uncovered(universe);
  uncovered.set();
  std::size_t used = 0;
  while (uncovered.any()) {
    std::size_t best = cells.size();
    std::size_t best_gain = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::size_t gain = (cells[c] & uncovered).count();
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    if (best == cells.size()) throw std::logic_error("cells do not cover the space");
    uncovered -= cells[best];
    ++used;
  }
  return used;
}

void exact_cover_search(const std::vector<PointSet>& cells, const PointSet& uncovered,
                        std::size_t chosen, std::size_t& best, std::size_t max_cell) {
  if (uncovered.none()) {
    best = std::min(best, chosen);
    return;
  }
  // Lower bound: even perfectly disjoint cells need this many more.
  const std::size_t lb = (uncovered.count() + max_cell - 1) / max_cell;
  if (chosen + lb >= best) return;
  // Branch on the uncovered point with the fewest covering cells.
  std::size_t pivot = uncovered.find_first();
  std::size_t fewest = SIZE_MAX;
  for (std::size_t p = uncovered.find_first(); p != PointSet::npos; p = uncovered.find_next(p)) {
    std::size_t covering = 0;
    for (const auto& c : cells)
      if (c.test(p)) ++covering;
    if (covering < fewest) {
      fewest = covering;
      pivot = p;
    }
  }
  std::vector<std::size_t> candidates;
  for (std::size_t c = 0; c < cells.size(); ++c)
    if (cells[c].test(pivot)) candidates.push_back(c);
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    return (cells[a] & uncovered).count() > (cells[b] & uncovered).count();
  });
  for (std::size_t c : candidates)
    exact_cover_search(cells, uncovered - cells[c], chosen + 1, best, max_cell);
}

}  // namespace

JoinCount join_and_count(const FiniteView& sys, const Cover& cover,
                         const std::vector<std::uint64_t>& times, bool greedy_only,
                         std::uint64_t cell_budget) {
  if (times.empty()) throw std::invalid_argument("join_and_count: times must be nonempty");
  // Pull every cover element back through every time once.
  std::vector<std::vector<PointSet>> pulled(times.size());
  for (std::size_t ти = 0; ти < times.size(); ++ти) {
    pulled[ти].reserve(cover.elements.size());
    for (const auto& U : cover.elements) pulled[ти].push_back(preimage(sys, U, times[ти]));
  }
  // DFS over element choices, pruning empty intersections.
  std::set<PointSet> cells_set;
  PointSet whole(sys.size());
  whole.set();
  std::vector<std::size_t> choice(times.size(), 0);
  std::function<void(std::size_t, const PointSet&)> dfs = [&](std::size_t depth,
                                                              const PointSet& acc) {
    if (cells_set.size() > cell_budget) throw BudgetExceeded("join_and_count: cell budget");
    if (depth == times.size()) {
      cells_set.insert(acc);
      return;
    }
    for (std::size_t j = 0; j < cover.elements.size(); ++j) {
      PointSet next = acc & pulled[depth][j];
      if (next.any()) dfs(depth + 1, next);
    }
  };
  dfs(0, whole);

  JoinCount out;
  out.cells.assign(cells_set.begin(), cells_set.end());
  out.greedy_upper_bound = greedy_cover(out.cells, sys.size());
  if (greedy_only) {
    out.exact = false;
    out.minimal_subcover = out.greedy_upper_bound;
    return out;
  }
  std::size_t max_cell = 1;
  for (const auto& c : out.cells) max_cell = std::max(max_cell, c.count());
  std::size_t best = out.greedy_upper_bound;
  PointSet uncovered(sys.size());
  uncovered.set();
  exact_cover_search(out.cells, uncovered, 0, best, max_cell);
  out.minimal_subcover = best;
  out.exact = true;
  return out;
}

std::vector<SeqEntropyPoint> seq_entropy_estimate(const FiniteView& sys, const Cover& cover,
                                                  const std::vector<std::uint64_t>& sequence) {
  std::vector<SeqEntropyPoint> out;
  std::vector<std::uint64_t> prefix;
  for (std::size_t n = 1; n <= sequence.size(); ++n) {
    prefix.push_back(sequence[n - 1]);
    const JoinCount jc = join_and_count(sys, cover, prefix);
    out.push_back(SeqEntropyPoint{n, jc.minimal_subcover,
                                  std::log(static_cast<double>(jc.minimal_subcover)) / n});
  }
  return out;
}

bool is_admissible(const Cover& cover, const std::vector<std::size_t>& tuple) {
  for (const auto& U : cover.elements) {
    bool omits = false;
    for (std::size_t t : tuple)
      if (!U.test(t)) {
        omits = true;
        break;
      }
    if (!omits) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

struct IndependenceSearcher {
  const FiniteView& sys;
  const std::vector<PointSet>& nbhds;
  std::size_t k;
  std::uint64_t horizon;
  std::vector<std::uint64_t> times;
  std::vector<PointSet> frontier;  // feasible set per pattern prefix (n^depth entries)

  std::optional<IndependenceCertificate> run() {
    PointSet whole(sys.size());
    whole.set();
    frontier = {whole};
    if (descend(0, 0)) {
      IndependenceCertificate cert;
      cert.neighborhoods = nbhds;
      cert.times = times;
      const std::size_t n = nbhds.size();
      for (std::size_t idx = 0; idx < frontier.size(); ++idx) {
        PatternWitness pw;
        std::size_t code = idx;
        for (std::size_t j = 0; j < k; ++j) {
          pw.pattern.push_back(static_cast<int>(code % n) + 1);
          code /= n;
        }
        std::reverse(pw.pattern.begin(), pw.pattern.end());
        pw.witness = frontier[idx].find_first();
        cert.patterns.push_back(std::move(pw));
      }
      return cert;
    }
    return std::nullopt;
  }

  // Extends the time set from depth `depth` with candidates > last (or >= 0).
  bool descend(std::size_t depth, std::uint64_t min_time) {
    if (depth == k) return true;
    const std::size_t n = nbhds.size();
    for (std::uint64_t t = min_time; t <= horizon; ++t) {
      std::vector<PointSet> next;
      next.reserve(frontier.size() * n);
      std::vector<PointSet> pulled;
      pulled.reserve(n);
      for (const auto& U : nbhds) pulled.push_back(preimage(sys, U, t));
      bool viable = true;
      for (const auto& feas : frontier) {
        for (std::size_t c = 0; viable && c < n; ++c) {
          PointSet cell = feas & pulled[c];
          if (cell.none())
            viable = false;
          else
            next.push_back(std::move(cell));
        }
        if (!viable) break;
      }
      if (!viable) continue;
      std::vector<PointSet> saved = std::move(frontier);
      frontier = std::move(next);
      times.push_back(t);
      if (descend(depth + 1, t + 1)) return true;
      times.pop_back();
      frontier = std::move(saved);
    }
    return false;
  }
};

}  // namespace

std::optional<IndependenceCertificate> independence_search(const FiniteView& sys,
                                                           const std::vector<PointSet>& nbhds,
                                                           std::size_t k, std::uint64_t horizon) {
  if (k == 0) throw std::invalid_argument("independence_search: k >= 1");
  if (nbhds.empty()) throw std::invalid_argument("independence_search: need neighborhoods");
  IndependenceSearcher searcher{sys, nbhds, k, horizon, {}, {}};
  return searcher.run();
}

bool verify_independence_certificate(const FiniteView& sys, const IndependenceCertificate& cert) {
  const std::size_t n = cert.neighborhoods.size();
  const std::size_t k = cert.times.size();
  if (n == 0 || k == 0) return false;
  for (std::size_t j = 1; j < k; ++j)
    if (!(cert.times[j - 1] < cert.times[j])) return false;
  std::size_t expected = 1;
  for (std::size_t j = 0; j < k; ++j) {
    if (expected > cert.patterns.size()) break;
    expected *= n;
  }
  if (cert.patterns.size() != expected) return false;
  std::set<std::vector<int>> seen;
  for (const auto& pw : cert.patterns) {
    if (pw.pattern.size() != k) return false;
    if (!seen.insert(pw.pattern).second) return false;
    if (pw.witness >= sys.size()) return false;
    for (std::size_t j = 0; j < k; ++j) {
      const int c = pw.pattern[j];
      if (c < 1 || static_cast<std::size_t>(c) > n) return false;
      if (!cert.neighborhoods[c - 1].test(sys.step_n(pw.witness, cert.times[j]))) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::uint64_t> finite_ip_set(const std::vector<std::uint64_t>& generators) {
  std::set<std::uint64_t> sums;
  const std::size_t m = generators.size();
  for (std::uint64_t mask = 1; mask < (1ull << m); ++mask) {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (mask & (1ull << j)) s += generators[j];
    sums.insert(s);
  }
  return {sums.begin(), sums.end()};
}

bool ip_dfs(const FiniteView& sys, const std::vector<std::array<PointSet, 2>>& pulled,
            std::size_t depth, const PointSet& acc, std::vector<int>& signs,
            std::vector<PatternWitness>& leaves, IpFailure& failure) {
  if (depth == pulled.size()) {
    PatternWitness pw;
    pw.pattern.assign(signs.begin(), signs.end());
    pw.witness = acc.find_first();
    leaves.push_back(std::move(pw));
    return true;
  }
  for (int c = 1; c <= 2; ++c) {
    PointSet next = acc & pulled[depth][c - 1];
    signs.push_back(c);
    if (next.none()) {
      failure.failing_s.assign(signs.begin(), signs.end());
      return false;
    }
    if (!ip_dfs(sys, pulled, depth + 1, next, signs, leaves, failure)) return false;
    signs.pop_back();
  }
  return true;
}

}  // namespace

IpCheckResult ip_independence_check(const FiniteView& sys, const PointSet& A1, const PointSet& A2,
                                    const std::vector<std::uint64_t>& generators,
                                    std::size_t generator_cap) {
  if (generators.empty()) throw std::invalid_argument("ip check: need generators");
  for (auto g : generators)
    if (g == 0) throw std::invalid_argument("ip check: generators must be positive");
  if (generators.size() > generator_cap)
    throw BudgetExceeded("ip check: generator cap exceeded");
  const std::vector<std::uint64_t> F = finite_ip_set(generators);
  std::vector<std::array<PointSet, 2>> pulled;
  pulled.reserve(F.size());
  for (std::uint64_t j : F)
    pulled.push_back({preimage(sys, A1, j), preimage(sys, A2, j)});

  PointSet whole(sys.size());
  whole.set();
  std::vector<int> signs;
  std::vector<PatternWitness> leaves;
  IpFailure failure;
  if (ip_dfs(sys, pulled, 0, whole, signs, leaves, failure)) {
    IpCertificate cert;
    cert.generators = generators;
    cert.ip_set = F;
    cert.full_patterns = std::move(leaves);
    return cert;
  }
  failure.failing_J.assign(F.begin(), F.begin() + failure.failing_s.size());
  return failure;
}

bool verify_ip_certificate(const FiniteView& sys, const PointSet& A1, const PointSet& A2,
                           const IpCertificate& cert) {
  const std::size_t f = cert.ip_set.size();
  if (cert.full_patterns.size() != (std::size_t(1) << f)) return false;
  for (std::size_t j = 1; j < f; ++j)
    if (!(cert.ip_set[j - 1] < cert.ip_set[j])) return false;
  for (const auto& pw : cert.full_patterns) {
    if (pw.pattern.size() != f) return false;
    for (std::size_t j = 0; j < f; ++j) {
      const PointSet& target = pw.pattern[j] == 1 ? A1 : A2;
      if (pw.pattern[j] != 1 && pw.pattern[j] != 2) return false;
      if (!target.test(sys.step_n(pw.witness, cert.ip_set[j]))) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

SeTupleWitness se_tuple_witness_from_fixed_points(const FiniteView& sys,
                                                  const std::vector<std::size_t>& fixed_points,
                                                  std::size_t y,
                                                  const std::vector<Rational>& radii,
                                                  std::size_t l, std::int64_t N) {
  const std::size_t n = fixed_points.size();
  if (n == 0 || radii.size() != n) throw std::invalid_argument("se_tuple: arity mismatch");
  if (l == 0) throw std::invalid_argument("se_tuple: l >= 1");
  if (N < 0) throw std::invalid_argument("se_tuple: N >= 0");
  for (std::size_t x : fixed_points)
    if (sys.next.at(x) != x) throw std::invalid_argument("se_tuple: point is not fixed");
  const auto period = sys.period_of(y);
  if (!period) throw std::invalid_argument("se_tuple: y is not periodic");
  const std::int64_t p = static_cast<std::int64_t>(*period);

  SeTupleWitness w;
  w.fixed_points = fixed_points;
  w.y = y;
  w.period = *period;
  w.radii = radii;
  w.length = l;
  w.cube = N;

  // Orbit of y, once.
  std::vector<std::size_t> orbit;
  orbit.reserve(*period);
  for (std::size_t cur = y, s = 0; s < *period; ++s, cur = sys.next[cur]) orbit.push_back(cur);

  // U-returns must be nonempty (precondition).
  std::vector<Ball> balls;
  for (std::size_t i = 0; i < n; ++i) {
    balls.push_back(Ball{sys.pts[fixed_points[i]], radii[i]});
    bool visited = false;
    for (std::size_t q : orbit)
      if (balls.back().contains(sys.pts[q])) visited = true;
    if (!visited)
      throw SeTupleError("ball " + std::to_string(i + 1) + " unvisited by the orbit of y");
  }

  // delta and exact modulus of continuity over steps 1..N.
  Rational delta_sq = radii[0] * radii[0];
  for (const auto& r : radii) delta_sq = std::min(delta_sq, Rational(r * r));
  w.delta_sq = delta_sq;
  Rational dp_sq = delta_sq;
  for (std::size_t a = 0; a < sys.size(); ++a) {
    for (std::size_t b = a + 1; b < sys.size(); ++b) {
      std::size_t u = a, v = b;
      bool bad = false;
      for (std::int64_t j = 0; j < N && !bad; ++j) {
        u = sys.next[u];
        v = sys.next[v];
        if (!(sys.dist_sq(u, v) < delta_sq)) bad = true;
      }
      if (bad) dp_sq = std::min(dp_sq, sys.dist_sq(a, b));
    }
  }
  w.delta_prime_sq = dp_sq;

  // V-returns under the shrunken balls.
  std::vector<SyndeticPresentation> v_lattices;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::int64_t> res;
    for (std::int64_t t = 0; t < p; ++t)
      if (sys.dist_sq(orbit[t], fixed_points[i]) < dp_sq) res.push_back(t);
    if (res.empty())
      throw SeTupleError("N too large: delta'^2 = " + to_string(dp_sq) + " leaves ball " +
                         std::to_string(i + 1) + " unvisited");
    w.v_residues.push_back(res);
    v_lattices.push_back(syndetic_from_residues(p, res));
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::int64_t> th;
    const PeriodicSet t = v_lattices[i].set.thicken(N);
    for (const auto& r : t.residues()) th.push_back(r[0]);
    w.thickened_residues.push_back(th);
  }

  // Per-pattern product lattices, thickened and diagonally saturated, then
  // the exact intersection over all n^l patterns.
  std::optional<PeriodicSet> inter;
  std::vector<std::size_t> pat(l, 0);
  for (;;) {
    std::vector<SyndeticPresentation> factors;
    for (std::size_t j = 0; j < l; ++j) factors.push_back(v_lattices[pat[j]]);
    const SyndeticPresentation A_s = product_syndetic(factors);
    const PeriodicSet B_s = A_s.set.thicken(N).diagonal_saturate();
    inter = inter ? inter->intersect(B_s) : B_s;
    if (inter->empty()) break;
    std::size_t j = l;
    bool done = true;
    while (j > 0) {
      --j;
      if (++pat[j] < n) {
        done = false;
        std::fill(pat.begin() + j + 1, pat.end(), 0);
        break;
      }
      pat[j] = 0;
    }
    if (done) break;
  }
  if (!inter || inter->empty())
    throw SeTupleError("pattern intersection empty for l=" + std::to_string(l) +
                       ", N=" + std::to_string(N) + " (orbit visits too sparse)");

  // Extract a strictly increasing time vector >= N from a residue tuple, and
  // find per-pattern shifts by direct scan; try residue tuples in order until
  // one verifies (thickening residues may wrap near zero).
  auto find_shift = [&](const std::vector<std::uint64_t>& times,
                        const std::vector<std::size_t>& s) -> std::optional<std::uint64_t> {
    for (std::int64_t a = 0; a < p; ++a) {
      bool ok = true;
      for (std::size_t j = 0; ok && j < l; ++j) {
        const std::size_t at = orbit[(times[j] + a) % p];
        if (!balls[s[j]].contains(sys.pts[at])) ok = false;
      }
      if (ok) return static_cast<std::uint64_t>(a);
    }
    return std::nullopt;
  };

  for (const auto& residue : inter->residues()) {
    std::vector<std::uint64_t> times;
    std::uint64_t prev = 0;
    for (std::size_t j = 0; j < l; ++j) {
      std::uint64_t t = static_cast<std::uint64_t>(residue[j]);
      while (t < static_cast<std::uint64_t>(N) || (j > 0 && t <= prev)) t += p;
      times.push_back(t);
      prev = t;
    }
    // All patterns must admit a shift.
    std::vector<std::uint64_t> shifts;
    bool all_ok = true;
    std::vector<std::size_t> s(l, 0);
    for (;;) {
      auto a = find_shift(times, s);
      if (!a) {
        all_ok = false;
        break;
      }
      shifts.push_back(*a);
      std::size_t j = l;
      bool done = true;
      while (j > 0) {
        --j;
        if (++s[j] < n) {
          done = false;
          std::fill(s.begin() + j + 1, s.end(), 0);
          break;
        }
        s[j] = 0;
      }
      if (done) break;
    }
    if (!all_ok) continue;

    w.chosen_residues = residue;
    w.times = times;
    w.shifts = shifts;
    // Package the certificate: neighborhoods as explicit ball member sets,
    // witnesses from y's orbit.
    IndependenceCertificate cert;
    for (const auto& b : balls) cert.neighborhoods.push_back(ball_members(sys, b));
    cert.times = times;
    std::vector<std::size_t> sp(l, 0);
    std::size_t pat_idx = 0;
    for (;;) {
      PatternWitness pw;
      for (std::size_t j = 0; j < l; ++j) pw.pattern.push_back(static_cast<int>(sp[j]) + 1);
      pw.witness = orbit[shifts[pat_idx] % p];
      cert.patterns.push_back(std::move(pw));
      ++pat_idx;
      std::size_t j = l;
      bool done = true;
      while (j > 0) {
        --j;
        if (++sp[j] < n) {
          done = false;
          std::fill(sp.begin() + j + 1, sp.end(), 0);
          break;
        }
        sp[j] = 0;
      }
      if (done) break;
    }
    w.certificate = std::move(cert);
    return w;
  }
  throw SeTupleError("no extracted tuple verified (thickening boundary)");
}

}  // namespace dyntop
