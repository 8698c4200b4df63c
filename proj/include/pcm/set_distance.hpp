#pragma once

#include "pcm/space.hpp"

#include <optional>

namespace pcm {

/// A point-to-set or set-to-set distance value, together with a witness
/// when the lattice bound coincides with a member value. In the orthant
/// lattice an inf/sup need not be attained by any single member, in which
/// case `attained_by` is empty.
struct SetDistanceResult {
  ConeVector value;
  std::optional<std::vector<std::size_t>> attained_by; // {b} or {a, b}
};

/// p(x,A) = inf{p(x,a) : a in A}, realized as the coordinatewise minimum.
inline SetDistanceResult point_set_dist(const FinitePcmSpace& s, std::size_t x,
                                        const IndexSet& subset) {
  detail::require_nonempty(subset, "point_set_dist");
  std::vector<ConeVector> vals;
  vals.reserve(subset.size());
  for (std::size_t a : subset) vals.push_back(s.p(x, a));
  ConeVector inf = lattice_inf(std::span<const ConeVector>(vals));
  std::optional<std::vector<std::size_t>> witness;
  for (std::size_t k = 0; k < subset.size(); ++k)
    if (vals[k] == inf) {
      witness = std::vector<std::size_t>{subset[k]};
      break;
    }
  return {std::move(inf), std::move(witness)};
}

/// delta_p(A,B) = sup{p(a,B) : a in A}.
inline SetDistanceResult delta(const FinitePcmSpace& s, const IndexSet& a_set,
                               const IndexSet& b_set) {
  detail::require_nonempty(a_set, "delta");
  detail::require_nonempty(b_set, "delta");
  std::vector<ConeVector> vals;
  std::vector<std::optional<std::vector<std::size_t>>> inner;
  vals.reserve(a_set.size());
  for (std::size_t a : a_set) {
    SetDistanceResult r = point_set_dist(s, a, b_set);
    vals.push_back(std::move(r.value));
    inner.push_back(std::move(r.attained_by));
  }
  ConeVector sup = lattice_sup(std::span<const ConeVector>(vals));
  std::optional<std::vector<std::size_t>> witness;
  for (std::size_t k = 0; k < a_set.size(); ++k)
    if (vals[k] == sup) {
      if (inner[k]) witness = std::vector<std::size_t>{a_set[k], (*inner[k])[0]};
      break;
    }
  return {std::move(sup), std::move(witness)};
}

/// H_p(A,B) = max{delta_p(A,B), delta_p(B,A)}, the max taken in the lattice.
inline SetDistanceResult hausdorff(const FinitePcmSpace& s, const IndexSet& a_set,
                                   const IndexSet& b_set) {
  SetDistanceResult dab = delta(s, a_set, b_set);
  SetDistanceResult dba = delta(s, b_set, a_set);
  ConeVector value = lattice_sup(dab.value, dba.value);
  std::optional<std::vector<std::size_t>> witness;
  if (dab.value == value && dab.attained_by)
    witness = dab.attained_by;
  else if (dba.value == value && dba.attained_by)
    witness = dba.attained_by;
  return {std::move(value), std::move(witness)};
}

/// Outcome of the selection step: for a in A and h > 1, a member b of B
/// claimed to satisfy p(a,b) <= h H_p(A,B). Existence is audited, not
/// assumed; when no member satisfies the bound, `satisfied` is false and
/// `chosen` is the best-effort b minimizing max_norm(p(a,b)).
struct SelectionResult {
  std::size_t chosen;
  bool satisfied;
  ConeVector bound;    // h * H_p(A,B)
  ConeVector achieved; // p(a, chosen)
};

/// Tie-break among satisfying members: smallest max_norm(p(a,b)), then
/// smallest point index. Deterministic by construction.
inline SelectionResult select(const FinitePcmSpace& s, std::size_t a, const IndexSet& a_set,
                              const IndexSet& b_set, const Rational& h) {
  if (!(Rational(1) < h)) throw error("selection requires h > 1");
  detail::require_nonempty(b_set, "select");
  if (std::find(a_set.begin(), a_set.end(), a) == a_set.end())
    throw error("selection point must belong to the first subset");
  ConeVector bound = h * hausdorff(s, a_set, b_set).value;

  std::optional<std::size_t> best;
  Rational best_norm;
  bool best_satisfied = false;
  for (std::size_t b : normalized(b_set)) {
    const ConeVector& pab = s.p(a, b);
    bool sat = cone_leq(pab, bound);
    Rational nrm = max_norm(pab);
    bool better;
    if (!best)
      better = true;
    else if (sat != best_satisfied)
      better = sat; // satisfying members always beat non-satisfying ones
    else
      better = nrm < best_norm;
    if (better) {
      best = b;
      best_norm = nrm;
      best_satisfied = sat;
    }
  }
  return {*best, best_satisfied, std::move(bound), s.p(a, *best)};
}

} // namespace pcm
