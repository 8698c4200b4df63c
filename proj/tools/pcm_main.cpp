// pcm: exact checks and solves on finite partial cone metric spaces.
//
// Output is deterministic: no timestamps, no addresses, fixed iteration
// orders. Exit codes: 0 all checks passed, 1 a checked property failed,
// 2 input or usage error.

#include "pcm/document.hpp"
#include "pcm/random_space.hpp"
#include "pcm/solver.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace pcm;

// ---------------------------------------------------------------------------
// Rendering helpers. Text mode spaces after commas; records mode packs
// every value into a single shell-friendly token.

std::string vec_str(const ConeVector& v, bool records) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.dimension(); ++i) {
    if (i) out += records ? "," : ", ";
    out += to_string(v[i]);
  }
  return out + ")";
}

std::string tuple_str(const FinitePcmSpace& s, const std::vector<std::size_t>& idx,
                      bool records) {
  std::string out = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += records ? "," : ", ";
    out += s.label(idx[i]);
  }
  return out + ")";
}

std::string set_str(const FinitePcmSpace& s, const IndexSet& set, bool records) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += records ? "," : ", ";
    out += s.label(set[i]);
  }
  return out + "}";
}

struct Output {
  bool records = false;

  void space_header(const FinitePcmSpace& s) const {
    if (records)
      std::cout << "record type=space points=" << s.size() << " dimension=" << s.dimension()
                << "\n";
    else
      std::cout << "space: " << s.size() << " points, dimension " << s.dimension() << "\n";
  }

  void map_header(const FinitePcmSpace& s, const MultiValuedMap& map) const {
    if (records) {
      for (std::size_t i = 0; i < map.size(); ++i)
        std::cout << "record type=map-image point=" << s.label(i)
                  << " image=" << set_str(s, map.image(i), true) << "\n";
    } else {
      std::cout << "map:";
      for (std::size_t i = 0; i < map.size(); ++i)
        std::cout << (i ? "; " : " ") << s.label(i) << " -> "
                  << set_str(s, map.image(i), false);
      std::cout << "\n";
    }
  }

  void axiom_violations(const FinitePcmSpace& s, const AxiomReport& report) const {
    for (const auto& v : report.violations) {
      if (records)
        std::cout << "record type=axiom-violation axiom=" << to_string(v.axiom)
                  << " witness=" << tuple_str(s, v.witness, true)
                  << " lhs=" << vec_str(v.lhs, true) << " rhs=" << vec_str(v.rhs, true)
                  << " slack=" << vec_str(v.slack, true) << "\n";
      else
        std::cout << to_string(v.axiom) << " violation at " << tuple_str(s, v.witness, false)
                  << ": lhs = " << vec_str(v.lhs, false)
                  << ", rhs = " << vec_str(v.rhs, false)
                  << ", slack = " << vec_str(v.slack, false) << "\n";
    }
  }

  void summary(const std::string& command, bool passed, const std::string& detail) const {
    if (records) {
      std::cout << "record type=summary command=" << command
                << " passed=" << (passed ? "true" : "false");
      if (!detail.empty()) std::cout << " " << detail;
      std::cout << "\n";
    } else {
      std::cout << command << ": " << (passed ? "PASS" : "FAIL");
      if (!detail.empty()) std::cout << " (" << detail << ")";
      std::cout << "\n";
    }
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

IndexSet parse_subset(const FinitePcmSpace& s, const std::string& csv) {
  IndexSet out;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = csv.find(',', pos);
    std::string piece = detail::trim(std::string_view(csv).substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (piece.empty()) throw error("empty label in subset '" + csv + "'");
    out.push_back(s.require_index(piece));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return normalized(out);
}

// ---------------------------------------------------------------------------
// Contraction flag plumbing shared by check-contraction and solve.

struct ContractionFlags {
  std::string kind;
  std::string lambda, alpha, beta, gamma, k;

  void attach(CLI::App* cmd, bool with_reich) {
    std::vector<std::string> kinds = {"kannan", "chatterjea", "nadler"};
    if (with_reich) kinds.push_back("reich");
    cmd->add_option("--kind", kind, "contraction condition")
        ->required()
        ->check(CLI::IsMember(kinds));
    cmd->add_option("--lambda", lambda, "constant for kannan/chatterjea");
    cmd->add_option("--alpha", alpha, "reich constant");
    cmd->add_option("--beta", beta, "reich constant");
    cmd->add_option("--gamma", gamma, "reich constant");
    cmd->add_option("--k", k, "constant for nadler");
  }

  ContractionParams to_params() const {
    auto given = [](const std::string& v) { return !v.empty(); };
    auto forbid = [&](const std::string& v, const char* name) {
      if (given(v))
        throw error(std::string(name) + " does not apply to kind '" + kind + "'");
    };
    if (kind == "kannan" || kind == "chatterjea") {
      if (!given(lambda)) throw error("--lambda is required for kind '" + kind + "'");
      forbid(alpha, "--alpha");
      forbid(beta, "--beta");
      forbid(gamma, "--gamma");
      forbid(k, "--k");
      Rational l = rat_parse(lambda);
      return kind == "kannan" ? ContractionParams::make_kannan(l)
                              : ContractionParams::make_chatterjea(l);
    }
    if (kind == "reich") {
      if (!given(alpha) || !given(beta) || !given(gamma))
        throw error("--alpha, --beta and --gamma are required for kind 'reich'");
      forbid(lambda, "--lambda");
      forbid(k, "--k");
      return ContractionParams::make_reich(rat_parse(alpha), rat_parse(beta),
                                           rat_parse(gamma));
    }
    if (kind == "nadler") {
      if (!given(k)) throw error("--k is required for kind 'nadler'");
      forbid(lambda, "--lambda");
      forbid(alpha, "--alpha");
      forbid(beta, "--beta");
      forbid(gamma, "--gamma");
      return ContractionParams::make_nadler(rat_parse(k));
    }
    throw error("unknown kind '" + kind + "'");
  }

  std::string describe(const ContractionParams& p, bool records) const {
    switch (p.kind) {
      case ContractionKind::kannan:
      case ContractionKind::chatterjea:
        return records ? "kind=" + to_string(p.kind) + " lambda=" + to_string(p.lambda)
                       : to_string(p.kind) + " lambda = " + to_string(p.lambda);
      case ContractionKind::reich:
        return records ? "kind=reich alpha=" + to_string(p.alpha) +
                             " beta=" + to_string(p.beta) + " gamma=" + to_string(p.gamma)
                       : "reich alpha = " + to_string(p.alpha) +
                             ", beta = " + to_string(p.beta) +
                             ", gamma = " + to_string(p.gamma);
      case ContractionKind::nadler:
        return records ? "kind=nadler k=" + to_string(p.k)
                       : "nadler k = " + to_string(p.k);
    }
    throw error("unreachable contraction kind");
  }
};

void warn_cbp(const Output& out, const FinitePcmSpace& s, const MultiValuedMap& map) {
  for (std::size_t i : images_not_in_cbp(s, map)) {
    if (out.records)
      std::cout << "record type=cbp-warning point=" << s.label(i) << "\n";
    else
      std::cout << "warning: image of " << s.label(i) << " is not in CB^p\n";
  }
}

// ---------------------------------------------------------------------------
// Subcommand bodies. Each returns the process exit code.

int run_check_axioms(const Output& out, const FinitePcmSpace& s) {
  out.space_header(s);
  AxiomReport report = check_pcm_axioms(s);
  out.axiom_violations(s, report);
  out.summary("check-axioms", report.passed,
              report.passed ? ""
                            : (out.records
                                   ? "violations=" + std::to_string(report.violations.size())
                                   : std::to_string(report.violations.size()) +
                                         (report.violations.size() == 1 ? " violation"
                                                                        : " violations")));
  return report.passed ? 0 : 1;
}

int run_induce_metric(const Output& out, const FinitePcmSpace& s) {
  out.space_header(s);
  InducedConeMetric d = induce_cone_metric(s);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i; j < s.size(); ++j) {
      if (out.records)
        std::cout << "record type=induced x=" << s.label(i) << " y=" << s.label(j)
                  << " d=" << vec_str(d.d(i, j), true) << "\n";
      else
        std::cout << "d(" << s.label(i) << ", " << s.label(j)
                  << ") = " << vec_str(d.d(i, j), false) << "\n";
    }
  AxiomReport report = check_cm_axioms(d);
  out.axiom_violations(s, report);
  out.summary("induce-metric", report.passed,
              report.passed ? ""
                            : (out.records
                                   ? "violations=" + std::to_string(report.violations.size())
                                   : std::to_string(report.violations.size()) +
                                         (report.violations.size() == 1 ? " violation"
                                                                        : " violations")));
  return report.passed ? 0 : 1;
}

int run_check_closed(const Output& out, const FinitePcmSpace& s, const std::string& subset_csv) {
  IndexSet subset = parse_subset(s, subset_csv);
  out.space_header(s);
  IndexSet closure;
  for (std::size_t a = 0; a < s.size(); ++a)
    if (point_in_closure(s, a, subset)) closure.push_back(a);
  IndexSet outside;
  for (std::size_t a : closure)
    if (!std::binary_search(subset.begin(), subset.end(), a)) outside.push_back(a);
  bool closed = outside.empty();
  if (out.records) {
    std::cout << "record type=closure subset=" << set_str(s, subset, true)
              << " closure=" << set_str(s, closure, true) << "\n";
    for (std::size_t a : outside)
      std::cout << "record type=closure-escape point=" << s.label(a) << "\n";
  } else {
    std::cout << "subset: " << set_str(s, subset, false) << "\n";
    std::cout << "closure: " << set_str(s, closure, false) << "\n";
    for (std::size_t a : outside)
      std::cout << "in closure but not in subset: " << s.label(a) << "\n";
  }
  out.summary("check-closed", closed, "");
  return closed ? 0 : 1;
}

int run_distances(const Output& out, const FinitePcmSpace& s, const std::string& a_csv,
                  const std::string& b_csv) {
  IndexSet a_set = parse_subset(s, a_csv);
  IndexSet b_set = parse_subset(s, b_csv);
  out.space_header(s);
  if (!out.records) {
    std::cout << "A = " << set_str(s, a_set, false) << "\n";
    std::cout << "B = " << set_str(s, b_set, false) << "\n";
  }
  auto attained = [&](const SetDistanceResult& r) -> std::string {
    if (!r.attained_by) return out.records ? "none" : "not attained by a member";
    return tuple_str(s, *r.attained_by, out.records);
  };
  auto point_side = [&](const IndexSet& from, const IndexSet& to, const char* to_name) {
    for (std::size_t x : from) {
      SetDistanceResult r = point_set_dist(s, x, to);
      if (out.records)
        std::cout << "record type=point-set x=" << s.label(x) << " set=" << to_name
                  << " value=" << vec_str(r.value, true) << " attained=" << attained(r)
                  << "\n";
      else
        std::cout << "p(" << s.label(x) << ", " << to_name << ") = " << vec_str(r.value, false)
                  << ", attained by " << attained(r) << "\n";
    }
  };
  point_side(a_set, b_set, "B");
  point_side(b_set, a_set, "A");
  SetDistanceResult dab = delta(s, a_set, b_set);
  SetDistanceResult dba = delta(s, b_set, a_set);
  SetDistanceResult h = hausdorff(s, a_set, b_set);
  auto emit = [&](const char* name, const char* rec, const SetDistanceResult& r) {
    if (out.records)
      std::cout << "record type=" << rec << " value=" << vec_str(r.value, true)
                << " attained=" << attained(r) << "\n";
    else
      std::cout << name << " = " << vec_str(r.value, false) << ", attained by "
                << attained(r) << "\n";
  };
  emit("delta(A, B)", "delta-ab", dab);
  emit("delta(B, A)", "delta-ba", dba);
  emit("H(A, B)", "hausdorff", h);
  return 0;
}

int run_check_contraction(const Output& out, const FinitePcmSpace& s,
                          const MultiValuedMap& map, const ContractionFlags& flags) {
  ContractionParams params = flags.to_params();
  params.validate();
  out.space_header(s);
  out.map_header(s, map);
  warn_cbp(out, s, map);
  ContractionReport report = check_condition(s, map, params);
  for (const auto& v : report.violations) {
    if (out.records)
      std::cout << "record type=pair-violation x=" << s.label(v.x) << " y=" << s.label(v.y)
                << " lhs=" << vec_str(v.lhs, true) << " rhs=" << vec_str(v.rhs, true)
                << " slack=" << vec_str(v.slack, true) << "\n";
    else
      std::cout << "violation at (" << s.label(v.x) << ", " << s.label(v.y)
                << "): lhs = " << vec_str(v.lhs, false) << ", rhs = " << vec_str(v.rhs, false)
                << ", slack = " << vec_str(v.slack, false) << "\n";
  }
  std::string detail;
  if (out.records)
    detail = flags.describe(params, true) + " violations=" +
             std::to_string(report.violations.size()) + " pairs=" +
             std::to_string(report.pair_count);
  else
    detail = flags.describe(params, false) + ", " +
             std::to_string(report.violations.size()) + " of " +
             std::to_string(report.pair_count) + " pairs violated";
  out.summary("check-contraction", report.passed, detail);
  return report.passed ? 0 : 1;
}

int run_min_lambda(const Output& out, const FinitePcmSpace& s, const MultiValuedMap& map,
                   const std::string& kind_name) {
  ContractionKind kind = kind_name == "kannan"       ? ContractionKind::kannan
                         : kind_name == "chatterjea" ? ContractionKind::chatterjea
                                                     : ContractionKind::nadler;
  out.space_header(s);
  out.map_header(s, map);
  std::optional<Rational> m = min_constant(s, map, kind);
  Rational threshold = contraction_threshold(kind);
  if (!m) {
    if (out.records)
      std::cout << "record type=min-constant kind=" << kind_name << " value=infeasible\n";
    else
      std::cout << "min-lambda " << kind_name << ": infeasible (no finite constant)\n";
    out.summary("min-lambda", false, "");
    return 1;
  }
  bool admissible = *m < threshold;
  if (out.records)
    std::cout << "record type=min-constant kind=" << kind_name
              << " value=" << to_string(*m) << " threshold=" << to_string(threshold)
              << " admissible=" << (admissible ? "true" : "false") << "\n";
  else
    std::cout << "min-lambda " << kind_name << " = " << to_string(*m) << " (threshold "
              << to_string(threshold) << ": "
              << (admissible ? "admissible" : "outside the theorem range") << ")\n";
  return 0;
}

int run_fixed_points(const Output& out, const FinitePcmSpace& s, const MultiValuedMap& map) {
  out.space_header(s);
  out.map_header(s, map);
  IndexSet fps = enumerate_fixed_points(map);
  if (out.records)
    std::cout << "record type=fixed-points set=" << set_str(s, fps, true) << "\n";
  else
    std::cout << "fixed points: " << set_str(s, fps, false) << "\n";
  return 0;
}

int run_solve(const Output& out, const FinitePcmSpace& s, const MultiValuedMap& map,
              const ContractionFlags& flags, const std::string& start_label,
              const std::string& h_text, std::uint64_t budget, bool budget_given) {
  ContractionParams params = flags.to_params();
  std::size_t x0 = s.require_index(start_label);
  std::optional<Rational> h;
  if (!h_text.empty()) h = rat_parse(h_text);
  std::optional<std::size_t> budget_opt;
  if (budget_given) budget_opt = static_cast<std::size_t>(budget);

  auto [trace, diag] = iterate(s, map, x0, params, h, budget_opt);

  out.space_header(s);
  out.map_header(s, map);
  if (out.records) {
    std::cout << "record type=solve-params " << flags.describe(params, true)
              << " h=" << to_string(trace.h) << " k=" << to_string(trace.k) << "\n";
    for (std::size_t n = 0; n < trace.steps.size(); ++n)
      std::cout << "record type=step n=" << (n + 1) << " from=" << s.label(trace.points[n])
                << " to=" << s.label(trace.points[n + 1])
                << " p=" << vec_str(trace.steps[n].step_dist, true)
                << " selection=" << (trace.steps[n].selection_satisfied ? "true" : "false")
                << " decay=" << (trace.steps[n].decay_ok ? "true" : "false") << "\n";
    std::cout << "record type=termination reason=" << to_string(trace.terminated);
    if (trace.fixed_point) std::cout << " point=" << s.label(*trace.fixed_point);
    std::cout << " steps=" << trace.steps.size() << "\n";
    std::cout << "record type=diagnostics geometric_bound="
              << (diag.geometric_bound_ok ? "true" : "false")
              << " d_cauchy=" << (diag.d_cauchy_ok ? "true" : "false")
              << " limit=" << (diag.limit_ok ? "true" : "false") << "\n";
  } else {
    std::cout << "params: " << flags.describe(params, false) << "\n";
    std::cout << "h = " << to_string(trace.h) << ", k = " << to_string(trace.k) << "\n";
    std::cout << "trace:";
    for (std::size_t i = 0; i < trace.points.size(); ++i)
      std::cout << (i ? " -> " : " ") << s.label(trace.points[i]);
    std::cout << "\n";
    for (std::size_t n = 0; n < trace.steps.size(); ++n)
      std::cout << "step " << (n + 1) << ": p = " << vec_str(trace.steps[n].step_dist, false)
                << ", selection " << (trace.steps[n].selection_satisfied ? "ok" : "FAILED")
                << ", decay " << (trace.steps[n].decay_ok ? "ok" : "FAILED") << "\n";
    std::cout << "terminated: " << to_string(trace.terminated);
    if (trace.fixed_point) std::cout << " at " << s.label(*trace.fixed_point);
    std::cout << " after " << trace.steps.size()
              << (trace.steps.size() == 1 ? " step" : " steps") << "\n";
    std::cout << "geometric bound: " << (diag.geometric_bound_ok ? "ok" : "FAILED") << "\n";
    std::cout << "d-Cauchy: " << (diag.d_cauchy_ok ? "ok" : "FAILED") << "\n";
    std::cout << "limit p(x,Tx) = p(x,x): " << (diag.limit_ok ? "ok" : "FAILED") << "\n";
  }
  bool solved = trace.terminated == Termination::fixed_point;
  out.summary("solve", solved, solved ? "" : to_string(trace.terminated));
  return solved ? 0 : 1;
}

int run_generate(const Output& out, std::uint64_t seed, std::size_t points, std::size_t dim) {
  LiftDraw draw = draw_lift(seed, points, dim);
  SpaceDocument doc = document_from_lift(draw.labels, dim, draw.positions, draw.weights);
  doc.map = [&] {
    MultiValuedMap map = generate_random_map(~seed, points);
    std::vector<IndexSet> images;
    for (std::size_t i = 0; i < map.size(); ++i) images.push_back(map.image(i));
    return images;
  }();
  if (out.records)
    std::cout << "record type=generated seed=" << seed << " points=" << points
              << " dim=" << dim << "\n";
  else
    std::cout << "# generated: seed " << seed << ", points " << points << ", dim " << dim
              << "\n";
  std::cout << serialize(doc);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact toolkit for finite partial cone metric spaces"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "records"}));

  std::string file, subset_csv, a_csv, b_csv, start_label, h_text, min_kind;
  std::uint64_t seed = 0, budget = 0;
  std::size_t gen_points = 0, gen_dim = 0;
  ContractionFlags contraction_flags, solve_flags;

  CLI::App* cmd_axioms = app.add_subcommand("check-axioms", "verify the PCM axioms");
  cmd_axioms->add_option("file", file, "space document")->required();

  CLI::App* cmd_induce = app.add_subcommand("induce-metric",
                                            "derive the induced cone metric and check it");
  cmd_induce->add_option("file", file, "space document")->required();

  CLI::App* cmd_closed = app.add_subcommand("check-closed", "closure check for a subset");
  cmd_closed->add_option("subset", subset_csv, "comma-separated point labels")->required();
  cmd_closed->add_option("file", file, "space document")->required();

  CLI::App* cmd_dist = app.add_subcommand("distances", "point-set, delta and Hausdorff distances");
  cmd_dist->add_option("A", a_csv, "comma-separated point labels")->required();
  cmd_dist->add_option("B", b_csv, "comma-separated point labels")->required();
  cmd_dist->add_option("file", file, "space document")->required();

  CLI::App* cmd_contraction = app.add_subcommand("check-contraction",
                                                 "verify a contraction condition");
  contraction_flags.attach(cmd_contraction, true);
  cmd_contraction->add_option("file", file, "space document with map")->required();

  CLI::App* cmd_min = app.add_subcommand("min-lambda", "minimal constant for a condition");
  cmd_min->add_option("--kind", min_kind, "contraction condition")
      ->required()
      ->check(CLI::IsMember({"kannan", "chatterjea", "nadler"}));
  cmd_min->add_option("file", file, "space document with map")->required();

  CLI::App* cmd_fps = app.add_subcommand("fixed-points", "enumerate fixed points of the map");
  cmd_fps->add_option("file", file, "space document with map")->required();

  CLI::App* cmd_solve = app.add_subcommand("solve", "iterate toward a fixed point");
  cmd_solve->set_help_flag("--help", "print help"); // frees -h; the flag below is --h
  cmd_solve->add_option("--start", start_label, "starting point label")->required();
  cmd_solve->add_option("--h", h_text, "selection constant h > 1 (default midpoint)");
  CLI::Option* budget_opt = cmd_solve->add_option("--budget", budget, "maximum steps");
  solve_flags.attach(cmd_solve, true);
  cmd_solve->add_option("file", file, "space document with map")->required();

  CLI::App* cmd_gen = app.add_subcommand("generate", "emit a random valid instance");
  cmd_gen->add_option("--seed", seed, "rng seed")->required();
  cmd_gen->add_option("--points", gen_points, "number of points")->required();
  cmd_gen->add_option("--dim", gen_dim, "cone dimension")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  Output out{format == "records"};
  try {
    if (cmd_gen->parsed()) return run_generate(out, seed, gen_points, gen_dim);

    SpaceDocument doc = parse_document(read_file(file));
    FinitePcmSpace space = doc.to_space();

    if (cmd_axioms->parsed()) return run_check_axioms(out, space);
    if (cmd_induce->parsed()) return run_induce_metric(out, space);
    if (cmd_closed->parsed()) return run_check_closed(out, space, subset_csv);
    if (cmd_dist->parsed()) return run_distances(out, space, a_csv, b_csv);

    MultiValuedMap map = doc.to_map();
    if (cmd_contraction->parsed())
      return run_check_contraction(out, space, map, contraction_flags);
    if (cmd_min->parsed()) return run_min_lambda(out, space, map, min_kind);
    if (cmd_fps->parsed()) return run_fixed_points(out, space, map);
    if (cmd_solve->parsed())
      return run_solve(out, space, map, solve_flags, start_label, h_text, budget,
                       budget_opt->count() > 0);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const pcm::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
