#pragma once

#include "pcm/contraction.hpp"

#include <cctype>
#include <sstream>

namespace pcm {

/// Parsed form of the space file format. Parsing normalizes: table entries
/// are keyed in point order (row index <= column index), zero diagonal
/// d-table entries are dropped, map images are sorted and deduplicated.
/// On normalized documents parse(serialize(doc)) == doc.
struct SpaceDocument {
  std::size_t dimension = 0;
  std::vector<std::string> points;
  MetricRecipe metric;
  std::optional<std::vector<IndexSet>> map; // one image per point, by index

  friend bool operator==(const SpaceDocument&, const SpaceDocument&) = default;

  FinitePcmSpace to_space() const { return build_space(points, dimension, metric); }

  MultiValuedMap to_map() const {
    if (!map) throw error("document has no map section");
    return MultiValuedMap(*map);
  }
};

namespace detail {

struct DocLine {
  std::size_t number;
  std::string text;
};

inline std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<DocLine> significant_lines(const std::string& text) {
  std::vector<DocLine> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string t = trim(raw);
    if (!t.empty()) out.push_back({number, std::move(t)});
  }
  return out;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> toks;
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

[[noreturn]] inline void fail(std::size_t line, const std::string& msg) {
  throw error("line " + std::to_string(line) + ": " + msg);
}

inline Rational parse_number(const std::string& tok, std::size_t line) {
  if (tok.find('.') != std::string::npos)
    fail(line, "floating-point literal '" + tok + "' rejected; use exact rationals like 7/10");
  try {
    return rat_parse(tok);
  } catch (const error& e) {
    fail(line, e.what());
  }
}

inline ConeVector parse_vector(const std::string& body, std::size_t dim, std::size_t line) {
  std::string t = trim(body);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')')
    fail(line, "expected a parenthesized vector, got '" + body + "'");
  std::string inner = t.substr(1, t.size() - 2);
  std::vector<Rational> coords;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = inner.find(',', pos);
    std::string piece = trim(std::string_view(inner).substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (piece.empty()) fail(line, "empty vector component");
    coords.push_back(parse_number(piece, line));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (coords.size() != dim)
    fail(line, "expected " + std::to_string(dim) + " components, got " +
                   std::to_string(coords.size()));
  return ConeVector(std::move(coords));
}

/// Splits at the first '->'; both halves trimmed.
inline std::pair<std::string, std::string> split_arrow(const DocLine& ln) {
  std::size_t arrow = ln.text.find("->");
  if (arrow == std::string::npos) fail(ln.number, "expected '->' in '" + ln.text + "'");
  return {trim(std::string_view(ln.text).substr(0, arrow)),
          trim(std::string_view(ln.text).substr(arrow + 2))};
}

inline const std::vector<std::string> kReservedLabels = {"dimension", "points", "metric",
                                                         "map", "w", "d-table"};

inline void validate_label(const std::string& label, std::size_t line) {
  if (label.empty()) fail(line, "empty point label");
  for (const auto& r : kReservedLabels)
    if (label == r) fail(line, "'" + label + "' is a reserved word, not a point label");
  if (label.find("->") != std::string::npos ||
      label.find_first_of(",(){}#") != std::string::npos)
    fail(line, "label '" + label + "' contains a delimiter character");
}

inline std::size_t require_point(const std::vector<std::string>& points,
                                 const std::string& label, std::size_t line,
                                 const char* where) {
  auto it = std::find(points.begin(), points.end(), label);
  if (it == points.end())
    fail(line, std::string("unknown point '") + label + "' in " + where);
  return static_cast<std::size_t>(it - points.begin());
}

/// Table entry `x , y -> (…)`, stored under the point-order key.
inline void parse_table_entry(
    const DocLine& ln, const std::vector<std::string>& points, std::size_t dim,
    const char* where,
    std::map<std::pair<std::string, std::string>, ConeVector>& entries) {
  auto [lhs, rhs] = split_arrow(ln);
  std::size_t comma = lhs.find(',');
  if (comma == std::string::npos)
    fail(ln.number, "expected 'x , y' on the left of '->'");
  std::string xl = trim(std::string_view(lhs).substr(0, comma));
  std::string yl = trim(std::string_view(lhs).substr(comma + 1));
  std::size_t xi = require_point(points, xl, ln.number, where);
  std::size_t yi = require_point(points, yl, ln.number, where);
  if (yi < xi) std::swap(xl, yl);
  ConeVector v = parse_vector(rhs, dim, ln.number);
  auto [it, inserted] = entries.try_emplace({xl, yl}, v);
  if (!inserted && it->second != v)
    fail(ln.number, "conflicting entry for (" + xl + ", " + yl + ")");
}

} // namespace detail

inline SpaceDocument parse_document(const std::string& text) {
  auto lines = detail::significant_lines(text);
  std::size_t idx = 0;
  auto need = [&](const char* what) -> const detail::DocLine& {
    if (idx >= lines.size())
      throw error(std::string("unexpected end of document, expected ") + what);
    return lines[idx];
  };

  SpaceDocument doc;
  {
    const auto& ln = need("'dimension <n>'");
    auto toks = detail::split_ws(ln.text);
    if (toks.size() != 2 || toks[0] != "dimension")
      detail::fail(ln.number, "expected 'dimension <n>'");
    const std::string& d = toks[1];
    if (d.empty() || !std::all_of(d.begin(), d.end(),
                                  [](unsigned char c) { return std::isdigit(c); }))
      detail::fail(ln.number, "dimension must be a positive integer, got '" + d + "'");
    doc.dimension = std::stoull(d);
    if (doc.dimension == 0) detail::fail(ln.number, "dimension must be positive");
    ++idx;
  }
  {
    const auto& ln = need("'points <labels…>'");
    auto toks = detail::split_ws(ln.text);
    if (toks.empty() || toks[0] != "points")
      detail::fail(ln.number, "expected 'points <labels…>'");
    if (toks.size() < 2) detail::fail(ln.number, "points list must be nonempty");
    for (std::size_t i = 1; i < toks.size(); ++i) {
      detail::validate_label(toks[i], ln.number);
      if (std::find(doc.points.begin(), doc.points.end(), toks[i]) != doc.points.end())
        detail::fail(ln.number, "duplicate point label '" + toks[i] + "'");
      doc.points.push_back(toks[i]);
    }
    ++idx;
  }

  const auto& mln = need("'metric <kind>'");
  auto mtoks = detail::split_ws(mln.text);
  if (mtoks.size() < 2 || mtoks[0] != "metric")
    detail::fail(mln.number, "expected 'metric <kind>'");
  const std::string& kind = mtoks[1];
  ++idx;

  if (kind == "table") {
    if (mtoks.size() != 2) detail::fail(mln.number, "'metric table' takes no arguments");
    TableRecipe t;
    while (idx < lines.size() && lines[idx].text != "map") {
      detail::parse_table_entry(lines[idx], doc.points, doc.dimension, "table", t.entries);
      ++idx;
    }
    for (std::size_t i = 0; i < doc.points.size(); ++i) {
      if (!t.entries.count({doc.points[i], doc.points[i]}))
        throw error("missing diagonal entry for point '" + doc.points[i] + "'");
      for (std::size_t j = i + 1; j < doc.points.size(); ++j)
        if (!t.entries.count({doc.points[i], doc.points[j]}))
          throw error("missing table entry for (" + doc.points[i] + ", " + doc.points[j] +
                      ")");
    }
    doc.metric = std::move(t);
  } else if (kind == "absdiff-scaledmax") {
    if (mtoks.size() != 4)
      detail::fail(mln.number, "expected 'metric absdiff-scaledmax <a> <b>'");
    doc.metric = AbsdiffScaledmaxRecipe{detail::parse_number(mtoks[2], mln.number),
                                        detail::parse_number(mtoks[3], mln.number)};
  } else if (kind == "max-alpha") {
    if (mtoks.size() != 3) detail::fail(mln.number, "expected 'metric max-alpha <alpha>'");
    doc.metric = MaxAlphaRecipe{detail::parse_number(mtoks[2], mln.number)};
  } else if (kind == "weighted-lift") {
    if (mtoks.size() != 2)
      detail::fail(mln.number, "'metric weighted-lift' takes no arguments");
    {
      const auto& dln = need("'d-table'");
      if (dln.text != "d-table") detail::fail(dln.number, "expected 'd-table'");
      ++idx;
    }
    WeightedLiftRecipe w;
    while (idx < lines.size() && lines[idx].text != "map") {
      const auto& ln = lines[idx];
      auto toks = detail::split_ws(ln.text);
      if (!toks.empty() && toks[0] == "w") {
        auto [lhs, rhs] = detail::split_arrow(ln);
        std::string label = detail::trim(std::string_view(lhs).substr(1));
        detail::require_point(doc.points, label, ln.number, "w");
        ConeVector v = detail::parse_vector(rhs, doc.dimension, ln.number);
        auto [it, inserted] = w.weights.try_emplace(label, v);
        if (!inserted && it->second != v)
          detail::fail(ln.number, "conflicting w entry for point '" + label + "'");
      } else {
        detail::parse_table_entry(ln, doc.points, doc.dimension, "d-table", w.d_entries);
      }
      ++idx;
    }
    for (std::size_t i = 0; i < doc.points.size(); ++i) {
      auto diag = w.d_entries.find({doc.points[i], doc.points[i]});
      if (diag != w.d_entries.end()) {
        if (diag->second != zero_vector(doc.dimension))
          throw error("nonzero d-table diagonal for point '" + doc.points[i] + "'");
        w.d_entries.erase(diag);
      }
      if (!w.weights.count(doc.points[i]))
        throw error("missing w entry for point '" + doc.points[i] + "'");
      for (std::size_t j = i + 1; j < doc.points.size(); ++j)
        if (!w.d_entries.count({doc.points[i], doc.points[j]}))
          throw error("missing d-table entry for (" + doc.points[i] + ", " +
                      doc.points[j] + ")");
    }
    doc.metric = std::move(w);
  } else {
    detail::fail(mln.number, "unknown metric kind '" + kind + "'");
  }

  if (idx < lines.size()) {
    const auto& ln = lines[idx];
    if (ln.text != "map")
      detail::fail(ln.number, "expected 'map' or end of document, got '" + ln.text + "'");
    ++idx;
    std::vector<std::optional<IndexSet>> images(doc.points.size());
    while (idx < lines.size()) {
      const auto& mn = lines[idx];
      auto [lhs, rhs] = detail::split_arrow(mn);
      std::size_t xi = detail::require_point(doc.points, lhs, mn.number, "map");
      if (images[xi]) detail::fail(mn.number, "duplicate map entry for '" + lhs + "'");
      if (rhs.size() < 2 || rhs.front() != '{' || rhs.back() != '}')
        detail::fail(mn.number, "expected '{y1, y2, …}' on the right of '->'");
      std::string inner = detail::trim(std::string_view(rhs).substr(1, rhs.size() - 2));
      if (inner.empty()) detail::fail(mn.number, "image of '" + lhs + "' must be nonempty");
      IndexSet img;
      std::size_t pos = 0;
      while (true) {
        std::size_t comma = inner.find(',', pos);
        std::string piece = detail::trim(std::string_view(inner).substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (piece.empty()) detail::fail(mn.number, "empty label in image set");
        img.push_back(detail::require_point(doc.points, piece, mn.number, "map"));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      images[xi] = normalized(img);
      ++idx;
    }
    std::vector<IndexSet> complete;
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (!images[i]) throw error("missing map entry for point '" + doc.points[i] + "'");
      complete.push_back(std::move(*images[i]));
    }
    doc.map = std::move(complete);
  }
  return doc;
}

/// Canonical rendering: table entries in point order, d-table without
/// diagonal lines, one w line per point, map images sorted. Inverse of
/// parse_document on documents parse_document produces.
inline std::string serialize(const SpaceDocument& doc) {
  std::ostringstream out;
  out << "dimension " << doc.dimension << "\n";
  out << "points";
  for (const auto& l : doc.points) out << " " << l;
  out << "\n";

  if (const auto* t = std::get_if<TableRecipe>(&doc.metric)) {
    out << "metric table\n";
    for (std::size_t i = 0; i < doc.points.size(); ++i)
      for (std::size_t j = i; j < doc.points.size(); ++j) {
        const ConeVector& v = detail::table_lookup(t->entries, doc.points[i],
                                                   doc.points[j], "table");
        out << doc.points[i] << " , " << doc.points[j] << " -> " << to_string(v) << "\n";
      }
  } else if (const auto* f = std::get_if<AbsdiffScaledmaxRecipe>(&doc.metric)) {
    out << "metric absdiff-scaledmax " << to_string(f->a) << " " << to_string(f->b)
        << "\n";
  } else if (const auto* m = std::get_if<MaxAlphaRecipe>(&doc.metric)) {
    out << "metric max-alpha " << to_string(m->alpha) << "\n";
  } else {
    const auto& w = std::get<WeightedLiftRecipe>(doc.metric);
    out << "metric weighted-lift\n";
    out << "d-table\n";
    for (std::size_t i = 0; i < doc.points.size(); ++i)
      for (std::size_t j = i + 1; j < doc.points.size(); ++j) {
        const ConeVector& v = detail::table_lookup(w.d_entries, doc.points[i],
                                                   doc.points[j], "d-table");
        out << doc.points[i] << " , " << doc.points[j] << " -> " << to_string(v) << "\n";
      }
    for (const auto& l : doc.points) {
      auto it = w.weights.find(l);
      if (it == w.weights.end()) throw error("missing w entry for point '" + l + "'");
      out << "w " << l << " -> " << to_string(it->second) << "\n";
    }
  }

  if (doc.map) {
    out << "map\n";
    for (std::size_t i = 0; i < doc.points.size(); ++i) {
      out << doc.points[i] << " -> {";
      const IndexSet& img = (*doc.map)[i];
      for (std::size_t k = 0; k < img.size(); ++k) {
        if (k) out << ", ";
        out << doc.points[img[k]];
      }
      out << "}\n";
    }
  }
  return out.str();
}

/// Document view of a generated space, for `generate` to print.
inline SpaceDocument document_from_lift(const std::vector<std::string>& labels,
                                        std::size_t dimension,
                                        const std::vector<ConeVector>& positions,
                                        const std::vector<ConeVector>& weights) {
  if (labels.size() != positions.size() || labels.size() != weights.size())
    throw error("label, position and weight counts differ");
  SpaceDocument doc;
  doc.dimension = dimension;
  doc.points = labels;
  WeightedLiftRecipe w;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    w.weights.emplace(labels[i], weights[i]);
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      std::vector<Rational> coords(dimension);
      for (std::size_t c = 0; c < dimension; ++c)
        coords[c] = abs(positions[i][c] - positions[j][c]);
      w.d_entries.emplace(std::make_pair(labels[i], labels[j]),
                          ConeVector(std::move(coords)));
    }
  }
  doc.metric = std::move(w);
  return doc;
}

} // namespace pcm
