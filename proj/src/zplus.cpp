#include "dyntop/zplus.hpp"

#include <algorithm>
#include <numeric>

namespace dyntop {

namespace {

std::int64_t lcm_i64(std::int64_t a, std::int64_t b) {
  return a / std::gcd(a, b) * b;
}

/// Iterates v over the box prod [0, bounds_i), calling fn(v).
void for_each_in_box(const Tuple& bounds, const std::function<void(const Tuple&)>& fn) {
  Tuple v(bounds.size(), 0);
  for (;;) {
    fn(v);
    std::size_t j = v.size();
    while (j > 0) {
      --j;
      if (++v[j] < bounds[j]) break;
      v[j] = 0;
      if (j == 0) return;
    }
    if (bounds.empty()) return;
  }
}

BigInt box_volume(const Tuple& bounds) {
  BigInt vol = 1;
  for (auto b : bounds) vol *= b;
  return vol;
}

}  // namespace

BigInt Cube::cardinality() const {
  BigInt c = 1;
  for (int j = 0; j < dim; ++j) c *= side + 1;
  return c;
}

bool Cube::contains(std::span<const std::int64_t> p) const {
  if (static_cast<int>(p.size()) != dim) return false;
  for (auto v : p)
    if (v < 0 || v > side) return false;
  return true;
}

PeriodicSet::PeriodicSet(Tuple period, std::set<Tuple> residues)
    : period_(std::move(period)), residues_(std::move(residues)) {
  for (auto q : period_)
    if (q < 1) throw std::invalid_argument("PeriodicSet: periods must be >= 1");
  for (const auto& r : residues_) {
    if (r.size() != period_.size()) throw std::invalid_argument("PeriodicSet: residue arity");
    for (std::size_t j = 0; j < r.size(); ++j)
      if (r[j] < 0 || r[j] >= period_[j])
        throw std::invalid_argument("PeriodicSet: residue out of range");
  }
}

bool PeriodicSet::member(std::span<const std::int64_t> v) const {
  if (static_cast<int>(v.size()) != dim()) return false;
  Tuple r(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] < 0) return false;
    r[j] = v[j] % period_[j];
  }
  return residues_.count(r) > 0;
}

PeriodicSet PeriodicSet::refine(const Tuple& finer) const {
  if (finer.size() != period_.size()) throw std::invalid_argument("refine: arity");
  Tuple ratio(finer.size());
  for (std::size_t j = 0; j < finer.size(); ++j) {
    if (finer[j] % period_[j] != 0) throw std::invalid_argument("refine: not a multiple");
    ratio[j] = finer[j] / period_[j];
  }
  std::set<Tuple> out;
  for (const auto& r : residues_) {
    for_each_in_box(ratio, [&](const Tuple& k) {
      Tuple v(r.size());
      for (std::size_t j = 0; j < r.size(); ++j) v[j] = r[j] + k[j] * period_[j];
      out.insert(std::move(v));
    });
  }
  return PeriodicSet(finer, std::move(out));
}

PeriodicSet PeriodicSet::intersect(const PeriodicSet& other, std::uint64_t box_budget) const {
  if (other.dim() != dim()) throw std::invalid_argument("intersect: dimension mismatch");
  Tuple joint(period_.size());
  for (std::size_t j = 0; j < joint.size(); ++j)
    joint[j] = lcm_i64(period_[j], other.period_[j]);
  if (box_volume(joint) > box_budget) throw BudgetExceeded("PeriodicSet::intersect: box");
  PeriodicSet a = refine(joint), b = other.refine(joint);
  std::set<Tuple> out;
  std::set_intersection(a.residues_.begin(), a.residues_.end(), b.residues_.begin(),
                        b.residues_.end(), std::inserter(out, out.begin()));
  return PeriodicSet(joint, std::move(out));
}

PeriodicSet PeriodicSet::thicken(std::int64_t n) const {
  if (n < 0) throw std::invalid_argument("thicken: n >= 0");
  std::set<Tuple> out;
  Tuple bounds(period_.size(), n + 1);
  for (const auto& r : residues_) {
    for_each_in_box(bounds, [&](const Tuple& p) {
      Tuple v(r.size());
      for (std::size_t j = 0; j < r.size(); ++j) v[j] = (r[j] + p[j]) % period_[j];
      out.insert(std::move(v));
    });
  }
  return PeriodicSet(period_, std::move(out));
}

PeriodicSet PeriodicSet::diagonal_saturate() const {
  for (auto q : period_)
    if (q != period_[0])
      throw std::invalid_argument("diagonal_saturate: uniform periods required");
  const std::int64_t p = period_[0];
  std::set<Tuple> out;
  for (const auto& r : residues_) {
    for (std::int64_t a = 0; a < p; ++a) {
      Tuple v(r.size());
      for (std::size_t j = 0; j < r.size(); ++j) v[j] = ((r[j] - a) % p + p) % p;
      out.insert(std::move(v));
    }
  }
  return PeriodicSet(period_, std::move(out));
}

std::optional<std::int64_t> PeriodicSet::syndetic_gap(std::uint64_t box_budget) const {
  if (residues_.empty()) return std::nullopt;
  if (box_volume(period_) > box_budget) throw BudgetExceeded("syndetic_gap: box");
  std::int64_t worst = 0;
  Tuple bounds = period_;
  for_each_in_box(bounds, [&](const Tuple& a) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (const auto& r : residues_) {
      std::int64_t need = 0;
      for (std::size_t j = 0; j < r.size(); ++j) {
        std::int64_t shift = (r[j] - a[j]) % period_[j];
        if (shift < 0) shift += period_[j];
        need = std::max(need, shift);
      }
      best = std::min(best, need);
    }
    worst = std::max(worst, best);
  });
  return worst;
}

std::vector<Tuple> PeriodicSet::window(std::int64_t bound, std::uint64_t max_points) const {
  std::vector<Tuple> out;
  Tuple bounds(period_.size(), bound + 1);
  if (box_volume(bounds) > max_points) throw BudgetExceeded("PeriodicSet::window");
  for_each_in_box(bounds, [&](const Tuple& v) {
    if (member(v)) out.push_back(v);
  });
  return out;
}

SyndeticPresentation certify_syndetic(PeriodicSet set) {
  auto gap = set.syndetic_gap();
  if (!gap) throw DegenerateInput("certify_syndetic: empty set");
  return SyndeticPresentation{std::move(set), *gap};
}

SyndeticPresentation product_syndetic(const std::vector<SyndeticPresentation>& factors) {
  if (factors.empty()) throw std::invalid_argument("product_syndetic: no factors");
  Tuple period;
  std::set<Tuple> residues{{}};
  std::int64_t gap = 0;
  for (const auto& f : factors) {
    if (f.set.dim() != 1) throw std::invalid_argument("product_syndetic: factors must be 1-dim");
    if (f.set.empty()) throw DegenerateInput("product_syndetic: empty factor");
    period.push_back(f.set.period()[0]);
    std::set<Tuple> next;
    for (const auto& prefix : residues) {
      for (const auto& r : f.set.residues()) {
        Tuple v = prefix;
        v.push_back(r[0]);
        next.insert(std::move(v));
      }
    }
    residues = std::move(next);
    gap = std::max(gap, f.gap);
  }
  return SyndeticPresentation{PeriodicSet(std::move(period), std::move(residues)), gap};
}

SyndeticPresentation syndetic_from_residues(std::int64_t period,
                                            const std::vector<std::int64_t>& residues) {
  std::set<Tuple> rs;
  for (auto r : residues) rs.insert(Tuple{r % period});
  return certify_syndetic(PeriodicSet(Tuple{period}, std::move(rs)));
}

SyndeticWindowVerdict is_syndetic_window(
    int dim, const std::function<bool(std::span<const std::int64_t>)>& member, std::int64_t gap,
    std::int64_t window, std::uint64_t budget) {
  if (window < gap) throw std::invalid_argument("is_syndetic_window: window < gap");
  SyndeticWindowVerdict verdict;
  verdict.holds = true;
  Tuple base_bounds(dim, window - gap + 1);
  if (box_volume(base_bounds) * Cube{dim, gap}.cardinality() > budget)
    throw BudgetExceeded("is_syndetic_window: budget");
  Tuple cube_bounds(dim, gap + 1);
  for_each_in_box(base_bounds, [&](const Tuple& a) {
    if (!verdict.holds) return;
    ++verdict.points_checked;
    bool hit = false;
    for_each_in_box(cube_bounds, [&](const Tuple& p) {
      if (hit) return;
      Tuple v(a.size());
      for (std::size_t j = 0; j < a.size(); ++j) v[j] = a[j] + p[j];
      if (member(v)) hit = true;
    });
    if (!hit) {
      verdict.holds = false;
      verdict.counterexample = a;
    }
  });
  return verdict;
}

TsPresentation ts_intersect(const TsPresentation& F1, const TsPresentation& F2) {
  if (F1.dim != F2.dim) throw std::invalid_argument("ts_intersect: dimension mismatch");
  TsPresentation out;
  out.dim = F1.dim;
  out.name = "(" + F1.name + " ∩ " + F2.name + ")";
  auto m1 = F1.member, m2 = F2.member;
  out.member = [m1, m2](std::span<const std::int64_t> v) { return m1(v) && m2(v); };
  if (F1.max_cube && F2.max_cube)
    out.max_cube = std::min(*F1.max_cube, *F2.max_cube);  // upper estimate; generator may throw earlier
  auto g1 = F1.generator, g2 = F2.generator;
  const int dim = F1.dim;
  out.generator = [g1, g2, dim](std::int64_t n) {
    const SyndeticPresentation s1 = g1(n);
    const std::int64_t m = s1.gap;
    const SyndeticPresentation s2 = g2(n + m);
    // Joint refinement so the shift choice depends only on the residue class.
    Tuple joint(dim);
    for (int j = 0; j < dim; ++j)
      joint[j] = lcm_i64(s1.set.period()[j], s2.set.period()[j]);
    const PeriodicSet r1 = s1.set.refine(joint);
    const PeriodicSet r2 = s2.set.refine(joint);
    std::set<Tuple> emitted;
    Tuple cube_bounds(dim, m + 1);
    for (const auto& sbar : r2.residues()) {
      bool found = false;
      Tuple chosen;
      for_each_in_box(cube_bounds, [&](const Tuple& mm) {
        if (found) return;
        Tuple v(sbar.size());
        for (std::size_t j = 0; j < sbar.size(); ++j) v[j] = sbar[j] + mm[j];
        if (r1.member(v)) {
          found = true;
          chosen = v;
        }
      });
      if (!found)
        throw std::logic_error("ts_intersect: gap certificate of the first factor failed");
      for (std::size_t j = 0; j < chosen.size(); ++j) chosen[j] %= joint[j];
      emitted.insert(std::move(chosen));
    }
    return certify_syndetic(PeriodicSet(joint, std::move(emitted)));
  };
  return out;
}

TsWindowValidation validate_ts_window(const TsPresentation& F, std::int64_t n,
                                      std::int64_t window) {
  TsWindowValidation v{};
  v.cube = n;
  const SyndeticPresentation s = F.generator(n);
  v.claimed_gap = s.gap;
  auto recomputed = s.set.syndetic_gap();
  v.recomputed_gap = recomputed.value_or(-1);
  v.gap_ok = recomputed && *recomputed <= s.gap;
  v.translates_ok = true;
  Tuple cube_bounds(F.dim, n + 1);
  for (const auto& base : s.set.window(window)) {
    for_each_in_box(cube_bounds, [&](const Tuple& p) {
      Tuple pt(base.size());
      for (std::size_t j = 0; j < base.size(); ++j) pt[j] = base[j] + p[j];
      ++v.points_checked;
      if (!F.member(pt)) v.translates_ok = false;
    });
    if (!v.translates_ok) break;
  }
  return v;
}

// --------------------------- fixture presentations ------------------------

namespace {

bool is_geometric_value(std::int64_t v, std::int64_t a, std::int64_t b) {
  if (v < a || v % a != 0) return false;
  std::int64_t q = v / a;
  while (q % b == 0) q /= b;
  return q == 1;
}

}  // namespace

TsPresentation ts_complement_geometric(std::int64_t a, std::int64_t b) {
  if (a < 1 || b < 2) throw std::invalid_argument("ts_complement_geometric: a >= 1, b >= 2");
  TsPresentation F;
  F.dim = 1;
  F.name = "Z+ \\ {" + std::to_string(a) + "*" + std::to_string(b) + "^k}";
  F.member = [a, b](std::span<const std::int64_t> v) {
    return v[0] >= 0 && !is_geometric_value(v[0], a, b);
  };
  F.generator = [a, b](std::int64_t n) {
    // modulus a*b^K with a*b^(K-1) > n+1; window [a*b^(K-1)+1, a*b^(K-1)+1+n]
    // avoids every excluded residue and every excluded value.
    std::int64_t pot = a;  // a * b^(K-1), K >= 1
    while (pot <= n + 1) pot *= b;
    const std::int64_t modulus = pot * b;
    return syndetic_from_residues(modulus, {pot + 1});
  };
  return F;
}

TsPresentation ts_all(int dim) {
  TsPresentation F;
  F.dim = dim;
  F.name = "Z+^" + std::to_string(dim);
  F.member = [dim](std::span<const std::int64_t> v) {
    for (auto x : v)
      if (x < 0) return false;
    return static_cast<int>(v.size()) == dim;
  };
  F.generator = [dim](std::int64_t) {
    return certify_syndetic(PeriodicSet(Tuple(dim, 1), {Tuple(dim, 0)}));
  };
  return F;
}

namespace {

TsPresentation lift_to_grid(const TsPresentation& line, int coord, const std::string& name) {
  TsPresentation F;
  F.dim = 2;
  F.name = name;
  auto member1 = line.member;
  F.member = [member1, coord](std::span<const std::int64_t> v) {
    if (v.size() != 2 || v[0] < 0 || v[1] < 0) return false;
    Tuple w{v[coord]};
    return member1(w);
  };
  auto gen1 = line.generator;
  F.generator = [gen1, coord](std::int64_t n) {
    const SyndeticPresentation s = gen1(n);
    Tuple period(2, 1);
    period[coord] = s.set.period()[0];
    std::set<Tuple> residues;
    for (const auto& r : s.set.residues()) {
      Tuple v(2, 0);
      v[coord] = r[0];
      residues.insert(std::move(v));
    }
    return SyndeticPresentation{PeriodicSet(std::move(period), std::move(residues)), s.gap};
  };
  return F;
}

}  // namespace

TsPresentation ts_grid_column_free(std::int64_t a, std::int64_t b) {
  return lift_to_grid(ts_complement_geometric(a, b), 0,
                      "Z+^2 \\ columns{" + std::to_string(a) + "*" + std::to_string(b) + "^k}");
}

TsPresentation ts_grid_row_free(std::int64_t a, std::int64_t b) {
  return lift_to_grid(ts_complement_geometric(a, b), 1,
                      "Z+^2 \\ rows{" + std::to_string(a) + "*" + std::to_string(b) + "^k}");
}

TsPresentation ts_grid_diag_free(std::int64_t a, std::int64_t b) {
  TsPresentation F = lift_to_grid(ts_complement_geometric(a, b), 0, "");
  F.name = "Z+^2 \\ diag{" + std::to_string(a) + "*" + std::to_string(b) + "^k}";
  F.member = [a, b](std::span<const std::int64_t> v) {
    if (v.size() != 2 || v[0] < 0 || v[1] < 0) return false;
    return !(v[0] == v[1] && is_geometric_value(v[0], a, b));
  };
  return F;
}

}  // namespace dyntop
