#pragma once

#include "pcm/set_distance.hpp"

namespace pcm {

/// The map T assigning each point a nonempty subset of the ground set.
/// Images are stored sorted; whether they belong to CB^p is a separate
/// check (images_in_cbp), not an assumption.
class MultiValuedMap {
public:
  explicit MultiValuedMap(std::vector<IndexSet> images) : images_(std::move(images)) {
    if (images_.empty()) throw error("map needs at least one point");
    for (auto& img : images_) {
      img = normalized(std::move(img));
      if (img.empty()) throw error("map image must be nonempty");
      if (img.back() >= images_.size()) throw error("map image leaves the ground set");
    }
  }

  std::size_t size() const { return images_.size(); }
  const IndexSet& image(std::size_t i) const { return images_[i]; }

private:
  std::vector<IndexSet> images_;
};

/// Indices of points whose image is not a member of CB^p(X).
inline IndexSet images_not_in_cbp(const FinitePcmSpace& s, const MultiValuedMap& map) {
  IndexSet out;
  for (std::size_t i = 0; i < map.size(); ++i)
    if (!is_cbp_member(s, map.image(i))) out.push_back(i);
  return out;
}

enum class ContractionKind { kannan, chatterjea, reich, nadler };

inline std::string to_string(ContractionKind k) {
  switch (k) {
    case ContractionKind::kannan: return "kannan";
    case ContractionKind::chatterjea: return "chatterjea";
    case ContractionKind::reich: return "reich";
    case ContractionKind::nadler: return "nadler";
  }
  return "?";
}

/// Constants of the contraction condition under test.
///
///   kannan:      H_p(Tx,Ty) <= lambda [p(Tx,x) + p(Ty,y)],  lambda in (0, 1/2)
///   chatterjea:  H_p(Tx,Ty) <= lambda [p(Tx,y) + p(Ty,x)],  lambda in (0, 1/2)
///   reich:       H_p(Tx,Ty) <= alpha p(Tx,x) + beta p(Ty,y) + gamma p(x,y),
///                alpha, beta, gamma >= 0, alpha + beta + gamma < 1
///   nadler:      H_p(Tx,Ty) <= k p(x,y),  k in (0, 1)
struct ContractionParams {
  ContractionKind kind = ContractionKind::kannan;
  Rational lambda;              // kannan / chatterjea
  Rational alpha, beta, gamma;  // reich
  Rational k;                   // nadler

  static ContractionParams make_kannan(Rational lambda) {
    ContractionParams p;
    p.kind = ContractionKind::kannan;
    p.lambda = std::move(lambda);
    return p;
  }
  static ContractionParams make_chatterjea(Rational lambda) {
    ContractionParams p;
    p.kind = ContractionKind::chatterjea;
    p.lambda = std::move(lambda);
    return p;
  }
  static ContractionParams make_reich(Rational alpha, Rational beta, Rational gamma) {
    ContractionParams p;
    p.kind = ContractionKind::reich;
    p.alpha = std::move(alpha);
    p.beta = std::move(beta);
    p.gamma = std::move(gamma);
    return p;
  }
  static ContractionParams make_nadler(Rational k) {
    ContractionParams p;
    p.kind = ContractionKind::nadler;
    p.k = std::move(k);
    return p;
  }

  /// Enforces the ranges the theorems assume.
  void validate() const {
    switch (kind) {
      case ContractionKind::kannan:
      case ContractionKind::chatterjea:
        if (!(Rational(0) < lambda && lambda < Rational(1, 2)))
          throw error("lambda must lie in (0, 1/2)");
        break;
      case ContractionKind::reich:
        if (alpha.is_negative() || beta.is_negative() || gamma.is_negative())
          throw error("reich constants must be nonnegative");
        if (!(alpha + beta + gamma < Rational(1)))
          throw error("reich constants must satisfy alpha + beta + gamma < 1");
        break;
      case ContractionKind::nadler:
        if (!(Rational(0) < k && k < Rational(1)))
          throw error("k must lie in (0, 1)");
        break;
    }
  }
};

struct PairViolation {
  std::size_t x, y;
  ConeVector lhs;   // H_p(Tx, Ty)
  ConeVector rhs;
  ConeVector slack; // rhs - lhs
};

inline bool operator==(const PairViolation& a, const PairViolation& b) {
  return a.x == b.x && a.y == b.y && a.lhs == b.lhs && a.rhs == b.rhs && a.slack == b.slack;
}

/// Exhaustive result over all ordered pairs, including x = y.
struct ContractionReport {
  bool passed = true;
  std::vector<PairViolation> violations;
  std::size_t pair_count = 0;
};

namespace detail {

inline ConeVector condition_rhs(const FinitePcmSpace& s, const MultiValuedMap& map,
                                const ContractionParams& params, std::size_t x, std::size_t y) {
  switch (params.kind) {
    case ContractionKind::kannan:
      return params.lambda * (point_set_dist(s, x, map.image(x)).value +
                              point_set_dist(s, y, map.image(y)).value);
    case ContractionKind::chatterjea:
      return params.lambda * (point_set_dist(s, y, map.image(x)).value +
                              point_set_dist(s, x, map.image(y)).value);
    case ContractionKind::reich:
      return params.alpha * point_set_dist(s, x, map.image(x)).value +
             params.beta * point_set_dist(s, y, map.image(y)).value +
             params.gamma * s.p(x, y);
    case ContractionKind::nadler:
      return params.k * s.p(x, y);
  }
  throw error("unreachable contraction kind");
}

/// The bare inequality check, with no range restriction on the constants.
/// Used for tightness analysis around min_constant; the public checker
/// validates the theorem ranges first.
inline ContractionReport check_inequality(const FinitePcmSpace& s, const MultiValuedMap& map,
                                          const ContractionParams& params) {
  if (map.size() != s.size()) throw error("map and space have different ground sets");
  ContractionReport report;
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t y = 0; y < s.size(); ++y) {
      ++report.pair_count;
      ConeVector lhs = hausdorff(s, map.image(x), map.image(y)).value;
      ConeVector rhs = condition_rhs(s, map, params, x, y);
      if (!cone_leq(lhs, rhs)) {
        report.passed = false;
        ConeVector slack = rhs - lhs;
        report.violations.push_back({x, y, std::move(lhs), std::move(rhs), std::move(slack)});
      }
    }
  return report;
}

} // namespace detail

/// Verifies the contraction condition over every ordered pair of points.
/// All set-distance terms use the lattice point-to-set distance; the
/// inequality is cone-order membership of rhs - lhs, not a norm comparison.
inline ContractionReport check_condition(const FinitePcmSpace& s, const MultiValuedMap& map,
                                         const ContractionParams& params) {
  params.validate();
  return detail::check_inequality(s, map, params);
}

/// Smallest exact constant making the one-parameter condition hold, or
/// nothing when some coordinate needs lhs <= 0 against a zero base.
/// The caller compares the result against the theorem threshold (1/2 for
/// kannan/chatterjea, 1 for nadler); values at or above it are still
/// reported, they just leave the theorem's hypotheses.
inline std::optional<Rational> min_constant(const FinitePcmSpace& s, const MultiValuedMap& map,
                                            ContractionKind kind) {
  if (kind == ContractionKind::reich)
    throw error("min_constant handles one-parameter families only");
  if (map.size() != s.size()) throw error("map and space have different ground sets");
  ContractionParams unit;
  unit.kind = kind;
  unit.lambda = 1;
  unit.k = 1;
  Rational lo = 0;
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t y = 0; y < s.size(); ++y) {
      ConeVector lhs = hausdorff(s, map.image(x), map.image(y)).value;
      ConeVector base = detail::condition_rhs(s, map, unit, x, y);
      for (std::size_t c = 0; c < lhs.dimension(); ++c) {
        if (Rational(0) < base[c]) {
          lo = max(lo, lhs[c] / base[c]);
        } else if (Rational(0) < lhs[c]) {
          return std::nullopt; // positive lhs against a zero base
        }
      }
    }
  return lo;
}

inline Rational contraction_threshold(ContractionKind kind) {
  return kind == ContractionKind::nadler ? Rational(1) : Rational(1, 2);
}

/// Reich with (lambda, lambda, 0) specializes to Kannan, and with
/// (0, 0, k) to Nadler. True iff the two checkers produce identical
/// violation lists, pair for pair.
inline bool check_reich_specialization(const FinitePcmSpace& s, const MultiValuedMap& map,
                                       ContractionKind target, const Rational& constant) {
  ContractionParams reich, direct;
  switch (target) {
    case ContractionKind::kannan:
      reich = ContractionParams::make_reich(constant, constant, 0);
      direct = ContractionParams::make_kannan(constant);
      break;
    case ContractionKind::nadler:
      reich = ContractionParams::make_reich(0, 0, constant);
      direct = ContractionParams::make_nadler(constant);
      break;
    default:
      throw error("specialization targets are kannan and nadler");
  }
  ContractionReport a = detail::check_inequality(s, map, reich);
  ContractionReport b = detail::check_inequality(s, map, direct);
  return a.passed == b.passed && a.violations == b.violations;
}

} // namespace pcm
