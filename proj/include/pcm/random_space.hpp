#pragma once

#include "pcm/contraction.hpp"

#include <cstdint>

namespace pcm {

/// SplitMix64, written out so streams are identical on every platform and
/// standard library. <random> engines would do, but their distribution
/// helpers are not required to be reproducible across implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4a2a2f9fb38e5ULL;
    return z ^ (z >> 31);
  }

  /// Uniform-enough draw in [0, bound); bound is tiny here so modulo bias
  /// is irrelevant and determinism is what matters.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

/// p(x,y) = d(x,y) + sup{w(x), w(y)} where d is the coordinatewise
/// absolute-difference metric of the position vectors and w assigns each
/// point a nonnegative self-distance weight. Every such table satisfies
/// the partial cone metric axioms:
///   p(x,x) = w(x) >= 0 and p(x,x) <= p(x,y) since d >= 0 and the sup
///   dominates w(x); symmetry is inherited from d and sup; and the
///   triangle-type bound follows coordinatewise from |a-c| <= |a-b|+|b-c|
///   together with max(wx,wz) + wy <= max(wx,wy) + max(wy,wz).
inline FinitePcmSpace make_lifted_space(const std::vector<std::string>& labels,
                                        const std::vector<ConeVector>& positions,
                                        const std::vector<ConeVector>& weights) {
  std::size_t n = labels.size();
  if (positions.size() != n || weights.size() != n)
    throw error("lifted space needs one position and one weight per point");
  if (n == 0) throw error("lifted space needs at least one point");
  std::size_t dim = positions[0].dimension();
  for (const auto& q : positions)
    if (q.dimension() != dim) throw error("position dimension mismatch");
  for (const auto& w : weights) {
    if (w.dimension() != dim) throw error("weight dimension mismatch");
    if (!cone_contains(w)) throw error("weights must lie in the cone");
  }
  std::vector<ConeVector> table;
  table.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      std::vector<Rational> coords(dim);
      for (std::size_t c = 0; c < dim; ++c)
        coords[c] = abs(positions[i][c] - positions[j][c]) +
                    max(weights[i][c], weights[j][c]);
      table.emplace_back(std::move(coords));
    }
  return FinitePcmSpace(labels, dim, std::move(table));
}

/// Raw material of a random instance: the positions and weights feeding
/// the lift, kept so callers can re-emit the instance as a document.
struct LiftDraw {
  std::vector<std::string> labels;
  std::vector<ConeVector> positions;
  std::vector<ConeVector> weights;
};

/// Deterministic random draw: positions are distinct vectors with
/// coordinates a/6, a in [0,12], weights have coordinates b/4, b in [0,8].
/// Distinctness of positions matters only for variety, not validity, and
/// is enforced by redrawing.
inline LiftDraw draw_lift(std::uint64_t seed, std::size_t points, std::size_t dim) {
  if (points == 0) throw error("generate needs at least one point");
  if (dim == 0) throw error("generate needs dimension at least one");
  SplitMix64 rng(seed);
  LiftDraw draw;
  draw.labels.resize(points);
  for (std::size_t i = 0; i < points; ++i) draw.labels[i] = "x" + std::to_string(i);

  auto draw_vector = [&](std::uint64_t range, std::uint64_t den) {
    std::vector<Rational> coords(dim);
    for (std::size_t c = 0; c < dim; ++c)
      coords[c] = Rational(BigInt(rng.below(range + 1)), BigInt(den));
    return ConeVector(std::move(coords));
  };

  draw.positions.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    ConeVector q = draw_vector(12, 6);
    for (std::size_t attempt = 0; attempt < 1000; ++attempt) {
      bool clash = false;
      for (const auto& seen : draw.positions)
        if (seen == q) {
          clash = true;
          break;
        }
      if (!clash) break;
      q = draw_vector(12, 6);
    }
    draw.positions.push_back(std::move(q));
  }

  draw.weights.reserve(points);
  for (std::size_t i = 0; i < points; ++i) draw.weights.push_back(draw_vector(8, 4));
  return draw;
}

inline FinitePcmSpace generate_random_space(std::uint64_t seed, std::size_t points,
                                            std::size_t dim) {
  LiftDraw d = draw_lift(seed, points, dim);
  return make_lifted_space(d.labels, d.positions, d.weights);
}

/// Deterministic random multi-valued map on n points: each image is a
/// nonempty subset drawn by unbiased-enough coin flips, with a forced
/// member when all flips miss.
inline MultiValuedMap generate_random_map(std::uint64_t seed, std::size_t points) {
  if (points == 0) throw error("map needs at least one point");
  SplitMix64 rng(seed);
  std::vector<IndexSet> images(points);
  for (std::size_t i = 0; i < points; ++i) {
    for (std::size_t j = 0; j < points; ++j)
      if (rng.below(3) == 0) images[i].push_back(j);
    if (images[i].empty()) images[i].push_back(rng.below(points));
  }
  return MultiValuedMap(std::move(images));
}

} // namespace pcm
