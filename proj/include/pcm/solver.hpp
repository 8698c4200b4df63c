#pragma once

#include "pcm/contraction.hpp"

#include <set>

namespace pcm {

/// Exactly {x : x in Tx}, by exhaustive scan. This is the independent
/// oracle against which every convergence claim is checked.
inline IndexSet enumerate_fixed_points(const MultiValuedMap& map) {
  IndexSet out;
  for (std::size_t i = 0; i < map.size(); ++i) {
    const IndexSet& img = map.image(i);
    if (std::binary_search(img.begin(), img.end(), i)) out.push_back(i);
  }
  return out;
}

namespace detail {

/// Sum of the contraction constants: 2*lambda for the one-parameter
/// conditions, alpha+beta+gamma for reich, k for nadler (via its reich
/// specialization (0,0,k)).
inline Rational constant_sum(const ContractionParams& params) {
  switch (params.kind) {
    case ContractionKind::kannan:
    case ContractionKind::chatterjea:
      return Rational(2) * params.lambda;
    case ContractionKind::reich:
      return params.alpha + params.beta + params.gamma;
    case ContractionKind::nadler:
      return params.k;
  }
  throw error("unreachable contraction kind");
}

} // namespace detail

/// Midpoint of (1, 1/s) where s is the constant sum: strictly above the
/// selection lemma's h > 1, strictly below 1/s so the decay ratio stays
/// below 1. Taking h = 1/s itself would force the ratio to exactly 1 and
/// lose geometric decay; pass that h explicitly to observe the breakdown.
inline Rational default_h(const ContractionParams& params) {
  params.validate();
  Rational s = detail::constant_sum(params);
  if (s.is_zero()) throw error("default_h undefined for all-zero constants");
  return (Rational(1) + Rational(1) / s) / Rational(2);
}

/// Decay ratio of consecutive step distances implied by the condition and
/// the selection bound h: h*lambda/(1-h*lambda) for kannan/chatterjea,
/// h*(beta+gamma)/(1-h*alpha) for reich (nadler = reich(0,0,k)).
inline Rational decay_ratio(const ContractionParams& params, const Rational& h) {
  switch (params.kind) {
    case ContractionKind::kannan:
    case ContractionKind::chatterjea: {
      Rational hl = h * params.lambda;
      if (!(hl < Rational(1))) throw error("decay ratio undefined: h*lambda >= 1");
      return hl / (Rational(1) - hl);
    }
    case ContractionKind::reich: {
      Rational ha = h * params.alpha;
      if (!(ha < Rational(1))) throw error("decay ratio undefined: h*alpha >= 1");
      return h * (params.beta + params.gamma) / (Rational(1) - ha);
    }
    case ContractionKind::nadler:
      return h * params.k;
  }
  throw error("unreachable contraction kind");
}

enum class Termination { fixed_point, budget_exhausted, cycle_detected };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::fixed_point: return "fixed-point";
    case Termination::budget_exhausted: return "budget-exhausted";
    case Termination::cycle_detected: return "cycle-detected";
  }
  return "?";
}

struct StepRecord {
  ConeVector step_dist;     // p(x_{n+1}, x_n)
  bool selection_satisfied; // bound of the selection lemma met
  bool decay_ok;            // p(x_{n+1},x_n) <= k p(x_n,x_{n-1}); vacuous on the first step
};

/// The sequence x_0, x_1, ... with x_{n+1} in T x_n, its per-step
/// distances and the constants driving it.
struct IterationTrace {
  std::vector<std::size_t> points;
  Rational h;
  Rational k;
  std::vector<StepRecord> steps; // steps[n]: transition points[n] -> points[n+1]
  Termination terminated = Termination::budget_exhausted;
  std::optional<std::size_t> fixed_point;
};

/// Exact after-the-fact audit of the trace.
struct CauchyDiagnostics {
  /// max_norm(p(x_m,x_n)) <= (k^n/(1-k)) * M * max_norm(p(x_1,x_0)) for
  /// all traced m > n, with M = 1. False whenever k >= 1 and the trace has
  /// a pair to check, since the bound then certifies nothing.
  bool geometric_bound_ok = true;
  /// Eventually constant in the induced cone metric (tail d-distances 0).
  bool d_cauchy_ok = false;
  /// The terminal point x satisfies p(x, Tx) = p(x, x).
  bool limit_ok = false;
};

inline std::size_t default_budget(const FinitePcmSpace& s) { return 4 * s.size() * s.size(); }

namespace detail {

inline CauchyDiagnostics diagnose(const FinitePcmSpace& s, const MultiValuedMap& map,
                                  const IterationTrace& trace) {
  CauchyDiagnostics diag;
  const auto& xs = trace.points;
  if (xs.size() >= 2) {
    if (!(trace.k < Rational(1))) {
      diag.geometric_bound_ok = false;
    } else {
      Rational base = max_norm(s.p(xs[1], xs[0]));
      for (std::size_t n = 0; n + 1 < xs.size() && diag.geometric_bound_ok; ++n) {
        Rational bound = pow(trace.k, n) / (Rational(1) - trace.k) * base;
        for (std::size_t m = n + 1; m < xs.size(); ++m)
          if (!(max_norm(s.p(xs[m], xs[n])) <= bound)) {
            diag.geometric_bound_ok = false;
            break;
          }
      }
    }
  }
  if (trace.terminated == Termination::fixed_point && trace.fixed_point) {
    std::size_t x = *trace.fixed_point;
    // Constant tail: every later pairwise induced distance is d(x,x) = 0.
    InducedConeMetric d = induce_cone_metric(s);
    diag.d_cauchy_ok = d.d(x, x) == zero_vector(s.dimension());
    diag.limit_ok = point_set_dist(s, x, map.image(x)).value == s.p(x, x);
  }
  return diag;
}

} // namespace detail

/// The constructive iteration from the fixed-point proofs: start at x0,
/// step into T x_n via the selection lemma with bound h * H_p(Tx_n, Tx_{n-1}),
/// stop at the first x_n in T x_n, on a repeated (predecessor, point) pair,
/// or when the budget runs out. The first step is under-determined by the
/// construction; it takes the image member minimizing max_norm(p(x0, .)),
/// then smallest index.
inline std::pair<IterationTrace, CauchyDiagnostics> iterate(
    const FinitePcmSpace& s, const MultiValuedMap& map, std::size_t x0,
    const ContractionParams& params, std::optional<Rational> h_override = std::nullopt,
    std::optional<std::size_t> budget_override = std::nullopt) {
  if (map.size() != s.size()) throw error("map and space have different ground sets");
  if (x0 >= s.size()) throw error("start point outside the space");
  params.validate();
  Rational h = h_override ? *h_override : default_h(params);
  if (!(Rational(1) < h)) throw error("iteration requires h > 1");
  std::size_t budget = budget_override ? *budget_override : default_budget(s);
  if (budget < 1) throw error("budget must be at least 1");

  IterationTrace trace;
  trace.h = h;
  trace.k = decay_ratio(params, h);

  auto is_fixed = [&](std::size_t x) {
    const IndexSet& img = map.image(x);
    return std::binary_search(img.begin(), img.end(), x);
  };

  trace.points.push_back(x0);
  if (is_fixed(x0)) {
    trace.terminated = Termination::fixed_point;
    trace.fixed_point = x0;
    return {trace, detail::diagnose(s, map, trace)};
  }

  // x1: cheapest member of T x0.
  {
    const IndexSet& img = map.image(x0);
    std::size_t pick = img.front();
    Rational pick_norm = max_norm(s.p(x0, pick));
    for (std::size_t b : img) {
      Rational nrm = max_norm(s.p(x0, b));
      if (nrm < pick_norm) {
        pick = b;
        pick_norm = nrm;
      }
    }
    trace.steps.push_back({s.p(pick, x0), true, true});
    trace.points.push_back(pick);
  }

  std::set<std::pair<std::size_t, std::size_t>> seen_transitions;
  seen_transitions.insert({x0, trace.points.back()});

  for (;;) {
    std::size_t cur = trace.points.back();
    std::size_t prev = trace.points[trace.points.size() - 2];
    if (is_fixed(cur)) {
      trace.terminated = Termination::fixed_point;
      trace.fixed_point = cur;
      break;
    }
    if (trace.steps.size() >= budget) {
      trace.terminated = Termination::budget_exhausted;
      break;
    }
    SelectionResult sel = select(s, cur, map.image(prev), map.image(cur), h);
    const ConeVector& prev_dist = trace.steps.back().step_dist;
    bool decay = cone_leq(s.p(sel.chosen, cur), trace.k * prev_dist);
    trace.steps.push_back({s.p(sel.chosen, cur), sel.satisfied, decay});
    trace.points.push_back(sel.chosen);
    if (!seen_transitions.insert({cur, sel.chosen}).second) {
      // The next point is a function of (predecessor, point), so a repeated
      // transition proves the tail cycles forever.
      if (is_fixed(sel.chosen)) {
        trace.terminated = Termination::fixed_point;
        trace.fixed_point = sel.chosen;
      } else {
        trace.terminated = Termination::cycle_detected;
      }
      break;
    }
  }
  if (trace.terminated == Termination::fixed_point && !trace.fixed_point)
    trace.fixed_point = trace.points.back();
  return {trace, detail::diagnose(s, map, trace)};
}

/// Cauchy transfer from (X,p) to the induced (X,d), in the only sense a
/// finite trace supports: the sequence is Cauchy in both iff it is
/// eventually constant, i.e. it reached a fixed point and the tail sits
/// still there with induced distance zero. The induced metric is rebuilt
/// here so the check runs through d rather than restating p facts.
inline bool check_cauchy_transfer(const FinitePcmSpace& s, const IterationTrace& trace) {
  if (trace.points.empty()) throw error("empty trace");
  if (trace.terminated != Termination::fixed_point) return false;
  InducedConeMetric d = induce_cone_metric(s);
  std::size_t x = trace.points.back();
  return d.d(x, x) == zero_vector(s.dimension());
}

} // namespace pcm
