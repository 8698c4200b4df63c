#pragma once

#include "pcm/rational.hpp"

#include <initializer_list>
#include <span>
#include <sstream>
#include <vector>

namespace pcm {

/// Point of Q^n, ordered by the nonnegative orthant cone.
class ConeVector {
public:
  ConeVector() = default;
  explicit ConeVector(std::size_t dimension) : coords_(dimension) {}
  ConeVector(std::initializer_list<Rational> cs) : coords_(cs) {}
  explicit ConeVector(std::vector<Rational> cs) : coords_(std::move(cs)) {}

  std::size_t dimension() const { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  Rational& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<Rational>& coords() const { return coords_; }

  friend ConeVector operator+(const ConeVector& u, const ConeVector& v) {
    require_same_dim(u, v);
    ConeVector r(u.dimension());
    for (std::size_t i = 0; i < r.dimension(); ++i) r[i] = u[i] + v[i];
    return r;
  }
  friend ConeVector operator-(const ConeVector& u, const ConeVector& v) {
    require_same_dim(u, v);
    ConeVector r(u.dimension());
    for (std::size_t i = 0; i < r.dimension(); ++i) r[i] = u[i] - v[i];
    return r;
  }
  friend ConeVector operator*(const Rational& s, const ConeVector& v) {
    ConeVector r(v.dimension());
    for (std::size_t i = 0; i < r.dimension(); ++i) r[i] = s * v[i];
    return r;
  }
  ConeVector& operator+=(const ConeVector& v) { return *this = *this + v; }

  friend bool operator==(const ConeVector& u, const ConeVector& v) {
    return u.coords_ == v.coords_;
  }
  friend bool operator!=(const ConeVector& u, const ConeVector& v) { return !(u == v); }

  static void require_same_dim(const ConeVector& u, const ConeVector& v) {
    if (u.dimension() != v.dimension())
      throw error("cone vector dimension mismatch (" + std::to_string(u.dimension()) +
                  " vs " + std::to_string(v.dimension()) + ")");
  }

  /// Renders `(r1, r2, ..., rn)`.
  friend std::string to_string(const ConeVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.dimension(); ++i) {
      if (i) s += ", ";
      s += to_string(v[i]);
    }
    return s + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const ConeVector& v) {
    return os << to_string(v);
  }

private:
  std::vector<Rational> coords_;
};

inline ConeVector zero_vector(std::size_t dimension) { return ConeVector(dimension); }

/// Membership in the nonnegative orthant: every coordinate >= 0.
inline bool cone_contains(const ConeVector& v) {
  for (std::size_t i = 0; i < v.dimension(); ++i)
    if (v[i].is_negative()) return false;
  return true;
}

/// Cone order: u <= v iff v - u lies in the cone.
inline bool cone_leq(const ConeVector& u, const ConeVector& v) {
  ConeVector::require_same_dim(u, v);
  for (std::size_t i = 0; i < u.dimension(); ++i)
    if (v[i] < u[i]) return false;
  return true;
}

/// Interior order: u << v iff v - u is strictly positive coordinatewise.
inline bool cone_lt_interior(const ConeVector& u, const ConeVector& v) {
  ConeVector::require_same_dim(u, v);
  for (std::size_t i = 0; i < u.dimension(); ++i)
    if (!(u[i] < v[i])) return false;
  return true;
}

/// Coordinatewise maximum: the least upper bound in the orthant order.
inline ConeVector lattice_sup(std::span<const ConeVector> vs) {
  if (vs.empty()) throw error("lattice_sup of empty set");
  ConeVector r = vs[0];
  for (std::size_t k = 1; k < vs.size(); ++k) {
    ConeVector::require_same_dim(r, vs[k]);
    for (std::size_t i = 0; i < r.dimension(); ++i)
      if (r[i] < vs[k][i]) r[i] = vs[k][i];
  }
  return r;
}

/// Coordinatewise minimum: the greatest lower bound in the orthant order.
inline ConeVector lattice_inf(std::span<const ConeVector> vs) {
  if (vs.empty()) throw error("lattice_inf of empty set");
  ConeVector r = vs[0];
  for (std::size_t k = 1; k < vs.size(); ++k) {
    ConeVector::require_same_dim(r, vs[k]);
    for (std::size_t i = 0; i < r.dimension(); ++i)
      if (vs[k][i] < r[i]) r[i] = vs[k][i];
  }
  return r;
}

inline ConeVector lattice_sup(const ConeVector& u, const ConeVector& v) {
  const ConeVector vs[] = {u, v};
  return lattice_sup(std::span<const ConeVector>(vs));
}
inline ConeVector lattice_inf(const ConeVector& u, const ConeVector& v) {
  const ConeVector vs[] = {u, v};
  return lattice_inf(std::span<const ConeVector>(vs));
}

/// Max-norm: maximum of the absolute values of the coordinates.
inline Rational max_norm(const ConeVector& v) {
  Rational m = 0;
  for (std::size_t i = 0; i < v.dimension(); ++i) m = max(m, abs(v[i]));
  return m;
}

enum class NormKind { max_norm };

/// The nonnegative orthant of Q^n together with the norm it is measured
/// in. The max-norm is monotone on the orthant, so the normal constant
/// is exactly 1; it is carried explicitly so other monotone norms can be
/// added later.
struct OrthantCone {
  std::size_t dimension = 1;
  NormKind norm_kind = NormKind::max_norm;
  Rational normal_constant = 1;
};

} // namespace pcm
