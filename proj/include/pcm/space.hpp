#pragma once

#include "pcm/cone.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pcm {

/// Indices into a space's point list; kept sorted and duplicate-free.
using IndexSet = std::vector<std::size_t>;

inline IndexSet normalized(IndexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

/// Finite ground set X with a complete symmetric table of p-values.
///
/// The table is stored once as the upper triangle (i <= j) and read
/// symmetrically, which also makes the symmetry axiom hold by
/// construction. Entries are expected to lie in the cone; this is not
/// enforced here but verified by check_pcm_axioms, so defective tables
/// can still be loaded and examined.
class FinitePcmSpace {
public:
  FinitePcmSpace(std::vector<std::string> labels, std::size_t dimension,
                 std::vector<ConeVector> upper_triangle)
      : labels_(std::move(labels)), dim_(dimension), table_(std::move(upper_triangle)) {
    const std::size_t n = labels_.size();
    if (n == 0) throw error("space needs at least one point");
    if (dim_ == 0) throw error("space dimension must be positive");
    if (table_.size() != n * (n + 1) / 2)
      throw error("space table has wrong size");
    for (const auto& v : table_)
      if (v.dimension() != dim_) throw error("space table entry has wrong dimension");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (labels_[i] == labels_[j]) throw error("duplicate point label '" + labels_[i] + "'");
  }

  std::size_t size() const { return labels_.size(); }
  std::size_t dimension() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }

  std::optional<std::size_t> index_of(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    return std::nullopt;
  }
  std::size_t require_index(std::string_view label) const {
    if (auto i = index_of(label)) return *i;
    throw error("unknown point '" + std::string(label) + "'");
  }

  const ConeVector& p(std::size_t i, std::size_t j) const {
    return table_[tri_index(i, j)];
  }

  IndexSet all_points() const {
    IndexSet s(size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = i;
    return s;
  }

private:
  std::size_t tri_index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * labels_.size() - i * (i - 1) / 2 + (j - i);
  }

  std::vector<std::string> labels_;
  std::size_t dim_;
  std::vector<ConeVector> table_; // upper triangle, row-major
};

// ---------------------------------------------------------------------------
// Metric recipes

/// Explicit table: one entry per unordered pair, diagonal mandatory.
struct TableRecipe {
  std::map<std::pair<std::string, std::string>, ConeVector> entries;
  friend bool operator==(const TableRecipe&, const TableRecipe&) = default;
};

/// p(x,y) = (a|x-y|, b max{x,y}) on numeric labels; dimension 2.
struct AbsdiffScaledmaxRecipe {
  Rational a;
  Rational b;
  friend bool operator==(const AbsdiffScaledmaxRecipe&, const AbsdiffScaledmaxRecipe&) = default;
};

/// p(x,y) = (max{x,y}, alpha max{x,y}) on nonnegative numeric labels; dimension 2.
struct MaxAlphaRecipe {
  Rational alpha;
  friend bool operator==(const MaxAlphaRecipe&, const MaxAlphaRecipe&) = default;
};

/// p(x,y) = d(x,y) + sup{w(x), w(y)} for a zero-diagonal symmetric d-table
/// and one cone vector w per point. The diagonal comes out as p(x,x) = w(x).
struct WeightedLiftRecipe {
  std::map<std::pair<std::string, std::string>, ConeVector> d_entries;
  std::map<std::string, ConeVector> weights;
  friend bool operator==(const WeightedLiftRecipe&, const WeightedLiftRecipe&) = default;
};

using MetricRecipe =
    std::variant<TableRecipe, AbsdiffScaledmaxRecipe, MaxAlphaRecipe, WeightedLiftRecipe>;

namespace detail {

inline const ConeVector& table_lookup(
    const std::map<std::pair<std::string, std::string>, ConeVector>& entries,
    const std::string& x, const std::string& y, const char* what) {
  if (auto it = entries.find({x, y}); it != entries.end()) return it->second;
  if (auto it = entries.find({y, x}); it != entries.end()) return it->second;
  throw error(std::string("missing ") + what + " entry for (" + x + ", " + y + ")");
}

} // namespace detail

/// Builds the fully populated symmetric table from a recipe. Formula
/// recipes parse the point labels as exact rationals.
inline FinitePcmSpace build_space(std::vector<std::string> labels, std::size_t dimension,
                                  const MetricRecipe& recipe) {
  const std::size_t n = labels.size();
  if (n == 0) throw error("space needs at least one point");
  std::vector<ConeVector> tri;
  tri.reserve(n * (n + 1) / 2);

  if (const auto* t = std::get_if<TableRecipe>(&recipe)) {
    for (const auto& [key, v] : t->entries) {
      auto known = [&](const std::string& l) {
        return std::find(labels.begin(), labels.end(), l) != labels.end();
      };
      if (!known(key.first)) throw error("unknown point '" + key.first + "' in table");
      if (!known(key.second)) throw error("unknown point '" + key.second + "' in table");
      auto mirror = t->entries.find({key.second, key.first});
      if (mirror != t->entries.end() && mirror->second != v)
        throw error("conflicting table entries for (" + key.first + ", " + key.second + ")");
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        tri.push_back(detail::table_lookup(t->entries, labels[i], labels[j], "table"));
  } else if (const auto* f = std::get_if<AbsdiffScaledmaxRecipe>(&recipe)) {
    if (dimension != 2) throw error("absdiff-scaledmax requires dimension 2");
    if (f->a.is_negative() || f->b.is_negative())
      throw error("absdiff-scaledmax requires nonnegative scale factors");
    std::vector<Rational> vals;
    for (const auto& l : labels) vals.push_back(rat_parse(l));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        tri.push_back(ConeVector{f->a * abs(vals[i] - vals[j]), f->b * max(vals[i], vals[j])});
  } else if (const auto* m = std::get_if<MaxAlphaRecipe>(&recipe)) {
    if (dimension != 2) throw error("max-alpha requires dimension 2");
    if (m->alpha.is_negative()) throw error("max-alpha requires alpha >= 0");
    std::vector<Rational> vals;
    for (const auto& l : labels) {
      Rational v = rat_parse(l);
      if (v.is_negative()) throw error("max-alpha requires nonnegative labels");
      vals.push_back(v);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        Rational mx = max(vals[i], vals[j]);
        tri.push_back(ConeVector{mx, m->alpha * mx});
      }
  } else {
    const auto& w = std::get<WeightedLiftRecipe>(recipe);
    auto weight = [&](const std::string& l) -> const ConeVector& {
      auto it = w.weights.find(l);
      if (it == w.weights.end()) throw error("missing w entry for point '" + l + "'");
      return it->second;
    };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const ConeVector& wi = weight(labels[i]);
        const ConeVector& wj = weight(labels[j]);
        if (i == j) {
          tri.push_back(wi); // d-diagonal is zero
        } else {
          const ConeVector& d =
              detail::table_lookup(w.d_entries, labels[i], labels[j], "d-table");
          tri.push_back(d + lattice_sup(wi, wj));
        }
      }
  }
  return FinitePcmSpace(std::move(labels), dimension, std::move(tri));
}

// ---------------------------------------------------------------------------
// Axiom checking

enum class Axiom { PCM1, PCM2, PCM3, PCM4, CM1, CM2, CM3 };

inline std::string to_string(Axiom a) {
  switch (a) {
    case Axiom::PCM1: return "PCM1";
    case Axiom::PCM2: return "PCM2";
    case Axiom::PCM3: return "PCM3";
    case Axiom::PCM4: return "PCM4";
    case Axiom::CM1: return "CM1";
    case Axiom::CM2: return "CM2";
    case Axiom::CM3: return "CM3";
  }
  return "?";
}

struct AxiomViolation {
  Axiom axiom;
  std::vector<std::size_t> witness; // point indices; (x,z,y) for triangle axioms
  ConeVector lhs;
  ConeVector rhs;
  ConeVector slack; // rhs - lhs; a negative coordinate shows the failure
};

/// Exhaustive, deterministically ordered list of axiom violations.
/// `passed` iff no violations. Violations appear in axiom order, then in
/// lexicographic witness order.
struct AxiomReport {
  bool passed = true;
  std::vector<AxiomViolation> violations;

  void add(Axiom a, std::vector<std::size_t> witness, ConeVector lhs, ConeVector rhs) {
    passed = false;
    ConeVector slack = rhs - lhs;
    violations.push_back({a, std::move(witness), std::move(lhs), std::move(rhs), std::move(slack)});
  }
};

/// Checks PCM1 over all ordered pairs, PCM2 over all pairs, and PCM4 over
/// all triples. PCM3 holds by table symmetry. Triangle triples are
/// canonicalized to x <= y (by index): the mirrored triple (y,z,x) is the
/// same inequality under symmetry, so each violation class is reported once.
inline AxiomReport check_pcm_axioms(const FinitePcmSpace& s) {
  AxiomReport report;
  const std::size_t n = s.size();
  const ConeVector zero = zero_vector(s.dimension());
  for (std::size_t i = 0; i < n; ++i)
    if (!cone_leq(zero, s.p(i, i)))
      report.add(Axiom::PCM1, {i, i}, zero, s.p(i, i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && !cone_leq(s.p(i, i), s.p(i, j)))
        report.add(Axiom::PCM1, {i, j}, s.p(i, i), s.p(i, j));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (s.p(i, i) == s.p(i, j) && s.p(i, j) == s.p(j, j))
        report.add(Axiom::PCM2, {i, j}, s.p(i, j), s.p(i, i));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        ConeVector rhs = s.p(x, z) + s.p(z, y) - s.p(z, z);
        if (!cone_leq(s.p(x, y), rhs))
          report.add(Axiom::PCM4, {x, z, y}, s.p(x, y), std::move(rhs));
      }
  return report;
}

/// Symmetric zero-diagonal table of induced cone-metric values.
class InducedConeMetric {
public:
  InducedConeMetric(std::size_t n_points, std::size_t dimension,
                    std::vector<ConeVector> upper_triangle)
      : n_(n_points), dim_(dimension), table_(std::move(upper_triangle)) {
    if (table_.size() != n_ * (n_ + 1) / 2) throw error("metric table has wrong size");
    for (std::size_t i = 0; i < n_; ++i)
      if (d(i, i) != zero_vector(dim_)) throw error("metric diagonal must be zero");
  }

  std::size_t size() const { return n_; }
  std::size_t dimension() const { return dim_; }
  const ConeVector& d(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return table_[i * n_ - i * (i - 1) / 2 + (j - i)];
  }

private:
  std::size_t n_;
  std::size_t dim_;
  std::vector<ConeVector> table_;
};

/// d(x,y) = 2 p(x,y) - p(x,x) - p(y,y). The diagonal vanishes identically.
/// Does not require the space to pass the PCM axioms; a defective input
/// shows up as CM violations of the output instead.
inline InducedConeMetric induce_cone_metric(const FinitePcmSpace& s) {
  const std::size_t n = s.size();
  std::vector<ConeVector> tri;
  tri.reserve(n * (n + 1) / 2);
  Rational two = 2;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      tri.push_back(two * s.p(i, j) - s.p(i, i) - s.p(j, j));
  return InducedConeMetric(n, s.dimension(), std::move(tri));
}

/// CM1 (nonnegativity, zero only on the diagonal) and CM3 (triangle)
/// exhaustively; CM2 and the zero diagonal hold by construction.
inline AxiomReport check_cm_axioms(const InducedConeMetric& m) {
  AxiomReport report;
  const std::size_t n = m.size();
  const ConeVector zero = zero_vector(m.dimension());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!cone_leq(zero, m.d(i, j)))
        report.add(Axiom::CM1, {i, j}, zero, m.d(i, j));
      else if (m.d(i, j) == zero)
        report.add(Axiom::CM1, {i, j}, m.d(i, j), zero);
    }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        ConeVector rhs = m.d(x, z) + m.d(z, y);
        if (!cone_leq(m.d(x, y), rhs))
          report.add(Axiom::CM3, {x, z, y}, m.d(x, y), std::move(rhs));
      }
  return report;
}

// ---------------------------------------------------------------------------
// Closure

namespace detail {
inline void require_nonempty(const IndexSet& a, const char* what) {
  if (a.empty()) throw error(std::string("empty subset in ") + what);
}
} // namespace detail

/// Closure criterion: a lies in the closure of A iff p(a,A) = p(a,a).
inline bool point_in_closure(const FinitePcmSpace& s, std::size_t a, const IndexSet& subset) {
  detail::require_nonempty(subset, "point_in_closure");
  std::vector<ConeVector> vals;
  vals.reserve(subset.size());
  for (std::size_t x : subset) vals.push_back(s.p(a, x));
  return lattice_inf(std::span<const ConeVector>(vals)) == s.p(a, a);
}

/// A is closed iff no point outside A passes the closure criterion.
inline bool is_closed(const FinitePcmSpace& s, const IndexSet& subset) {
  detail::require_nonempty(subset, "is_closed");
  IndexSet sorted = normalized(subset);
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (std::binary_search(sorted.begin(), sorted.end(), a)) continue;
    if (point_in_closure(s, a, sorted)) return false;
  }
  return true;
}

/// Membership in CB^p: closed and bounded. Boundedness asks for a lattice
/// upper bound of {p(a,b) : a,b in A}, which a finite subset always has;
/// the bound is still computed so the check stays honest to its definition.
inline bool is_cbp_member(const FinitePcmSpace& s, const IndexSet& subset) {
  detail::require_nonempty(subset, "is_cbp_member");
  std::vector<ConeVector> pairwise;
  for (std::size_t a : subset)
    for (std::size_t b : subset) pairwise.push_back(s.p(a, b));
  ConeVector bound = lattice_sup(std::span<const ConeVector>(pairwise));
  bool bounded = true;
  for (const auto& v : pairwise) bounded = bounded && cone_leq(v, bound);
  return bounded && is_closed(s, subset);
}

} // namespace pcm
