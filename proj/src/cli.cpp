#include "gauge_graph/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gauge_graph/coefficients.hpp"
#include "gauge_graph/error.hpp"
#include "gauge_graph/joint_extremes.hpp"
#include "gauge_graph/model_io.hpp"
#include "gauge_graph/reports.hpp"

namespace gauge_graph {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model_path;
  std::string point;
  std::string keep;
  int grid = 21;
  std::string method;
  std::string from;
  std::string to;
  std::string sign = "+";
  int n = 200;
  std::string svg;
  std::uint64_t seed = 0x5eed;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Vertex lookup(const LoadedModel& lm, const std::string& label) {
  try {
    return lm.vertex(label);
  } catch (const Error& e) {
    throw UsageError(e.detail());
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(text);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(' ');
    const auto e = cell.find_last_not_of(' ');
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

json labels_json(const LoadedModel& lm, const std::vector<Vertex>& vs) {
  json out = json::array();
  for (Vertex v : vs) out.push_back(lm.label(v));
  return out;
}

json alpha_json(const LoadedModel& lm, Vertex i, Vertex j, const AlphaResult& a) {
  json out;
  out["from"] = lm.label(i);
  out["to"] = lm.label(j);
  out["sign"] = std::string(to_string(a.conditioning_sign));
  out["method"] = std::string(to_string(a.method));
  out["value"] = a.value;
  out["contact_value"] = a.contact_value ? json(*a.contact_value) : json(nullptr);
  return out;
}

json beta_json(const LoadedModel& lm, Vertex i, Vertex j, const BetaResult& b) {
  json out;
  out["from"] = lm.label(i);
  out["to"] = lm.label(j);
  out["method"] = std::string(to_string(b.method));
  out["value"] = b.value;
  out["sigma"] = b.sigma;
  if (b.fit) {
    out["fit"] = {{"sigma", b.fit->sigma},       {"r2", b.fit->r2},
                  {"points_used", b.fit->points_used}, {"x_min", b.fit->x_min},
                  {"x_max", b.fit->x_max},       {"low_quality", b.fit->low_quality}};
  }
  return out;
}

json direction_json(const LoadedModel& lm, const Direction& d) {
  return {{"A", labels_json(lm, d.subset)}, {"witness", d.witness}, {"gap", d.gap}};
}

AlphaResult recurrence_alpha(const Model& m, Vertex i, Vertex j, Sign s) {
  return m.margin() == Margin::Exponential ? alpha_path(m, i, j) : alpha_path_signed(m, i, j, s);
}

AlphaResult numeric_alpha(const Model& m, Vertex i, Vertex j, Sign s) {
  return edge_alpha(pairwise_marginal(m, i, j).gauge, s);
}

BetaResult numeric_beta(const Model& m, Vertex i, Vertex j) {
  const auto g = pairwise_marginal(m, i, j).gauge;
  return edge_beta(g, alpha_path(m, i, j).value);
}

Sign parse_sign(const std::string& s, Margin margin) {
  if (s == "+" || s == "plus") return Sign::Plus;
  if (s == "-" || s == "minus") {
    if (margin == Margin::Exponential) throw UsageError("--sign - needs a Laplace model");
    return Sign::Minus;
  }
  throw UsageError("--sign must be + or -");
}

std::vector<Vertex> pair_from_keep(const LoadedModel& lm, const std::string& keep) {
  std::vector<Vertex> out;
  for (const auto& label : split_list(keep)) out.push_back(lookup(lm, label));
  return out;
}

int cmd_validate(const LoadedModel& lm, std::ostream& out) {
  const auto& g = lm.model.graph();
  json cliques = json::array();
  for (const auto& cg : lm.model.clique_gauges()) {
    cliques.push_back({{"vertices", labels_json(lm, cg.vertices)}, {"family", cg.gauge.family_name()}});
  }
  json paths = json::array();
  for (std::size_t a = 0; a < g.size(); ++a) {
    for (std::size_t b = a + 1; b < g.size(); ++b) {
      const Path p = shortest_path(g, g.vertices()[a], g.vertices()[b]);
      paths.push_back({{"from", lm.label(g.vertices()[a])},
                       {"to", lm.label(g.vertices()[b])},
                       {"length", p.length()},
                       {"path", labels_json(lm, p.vertices)}});
    }
  }
  json report;
  report["valid"] = true;
  report["margin"] = std::string(to_string(lm.model.margin()));
  report["vertices"] = lm.labels;
  report["cliques"] = cliques;
  report["separators"] = labels_json(lm, g.separators());
  report["paths"] = paths;
  out << dump(report);
  return kExitOk;
}

int cmd_eval(const LoadedModel& lm, const Options& o, std::ostream& out) {
  std::vector<double> x;
  for (const auto& cell : split_list(o.point)) {
    try {
      std::size_t used = 0;
      x.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw UsageError("--point entries must be numbers; got '" + cell + "'");
    }
  }
  if (x.size() != lm.model.size()) {
    throw UsageError("--point needs " + std::to_string(lm.model.size()) + " coordinates (vertex order: sorted labels)");
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f\n", eval_joint(lm.model, x));
  out << buf;
  return kExitOk;
}

int cmd_marginal(const LoadedModel& lm, const Options& o, std::ostream& out) {
  const auto keep = pair_from_keep(lm, o.keep);
  if (keep.empty()) throw UsageError("--keep needs at least one vertex");
  if (o.grid < 2) throw UsageError("--grid must be >= 2");
  std::string method = o.method.empty() ? (keep.size() == 2 ? "chain" : "numeric") : o.method;
  Gauge g = method == "chain" ? (keep.size() == 2 ? pairwise_marginal(lm.model, keep[0], keep[1]).gauge
                                                  : throw UsageError("--method chain needs exactly two vertices"))
                              : marginal_gauge(lm.model, keep).gauge;
  const double lo = lm.model.margin() == Margin::Exponential ? 0.0 : -1.0;
  const std::size_t k = keep.size();
  const auto n = static_cast<std::size_t>(o.grid);
  std::size_t total = 1;
  for (std::size_t d = 0; d < k; ++d) {
    total *= n;
    if (total > 1000000) throw UsageError("grid too large (more than 1e6 points)");
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < total; ++r) {
    std::vector<double> x(k);
    std::size_t rest = r;
    for (std::size_t d = k; d-- > 0;) {
      x[d] = lo + (1.0 - lo) * static_cast<double>(rest % n) / static_cast<double>(n - 1);
      rest /= n;
    }
    auto row = x;
    row.push_back(g.evaluate(x));
    rows.push_back(std::move(row));
  }
  std::vector<std::string> header;
  for (Vertex v : keep) header.push_back(lm.label(v));
  header.push_back("value");
  out << points_csv(rows, header);
  return kExitOk;
}

int cmd_alpha(const LoadedModel& lm, const Options& o, std::ostream& out) {
  const Vertex i = lookup(lm, o.from);
  const Vertex j = lookup(lm, o.to);
  const Sign s = parse_sign(o.sign, lm.model.margin());
  const std::string method = o.method.empty() ? "recurrence" : o.method;
  if (method == "recurrence") {
    out << dump(alpha_json(lm, i, j, recurrence_alpha(lm.model, i, j, s)));
  } else if (method == "numeric") {
    out << dump(alpha_json(lm, i, j, numeric_alpha(lm.model, i, j, s)));
  } else {
    const auto r = recurrence_alpha(lm.model, i, j, s);
    const auto n = numeric_alpha(lm.model, i, j, s);
    out << dump({{"recurrence", alpha_json(lm, i, j, r)},
                 {"numeric", alpha_json(lm, i, j, n)},
                 {"discrepancy", std::abs(r.value - n.value)}});
  }
  return kExitOk;
}

int cmd_beta(const LoadedModel& lm, const Options& o, std::ostream& out) {
  const Vertex i = lookup(lm, o.from);
  const Vertex j = lookup(lm, o.to);
  const std::string method = o.method.empty() ? "recurrence" : o.method;
  auto recurrence = [&] {
    json r = beta_json(lm, i, j, beta_path(lm.model, i, j));
    json edges = json::array();
    const auto path = chain_reduction(lm.model.graph(), i, j);
    const auto coeffs = path_edge_coefficients(lm.model, i, j);
    for (std::size_t k = 0; k < path.size(); ++k) {
      edges.push_back({{"from", lm.label(path[k].first)},
                       {"to", lm.label(path[k].second)},
                       {"alpha", coeffs[k].alpha},
                       {"beta", coeffs[k].beta}});
    }
    r["edges"] = edges;
    return r;
  };
  if (method == "recurrence") {
    out << dump(recurrence());
  } else if (method == "numeric") {
    out << dump(beta_json(lm, i, j, numeric_beta(lm.model, i, j)));
  } else {
    const json r = recurrence();
    const auto n = numeric_beta(lm.model, i, j);
    out << dump({{"recurrence", r},
                 {"numeric", beta_json(lm, i, j, n)},
                 {"discrepancy", std::abs(r["value"].get<double>() - n.value)}});
  }
  return kExitOk;
}

json alpha_directions_json(const LoadedModel& lm, const AlphaDirections& a) {
  json subsets = json::array();
  for (const auto& s : a.subsets) subsets.push_back(labels_json(lm, s));
  return {{"subsets", subsets}, {"possibly_incomplete", a.possibly_incomplete}};
}

int cmd_directions(const LoadedModel& lm, const Options& o, std::ostream& out) {
  const std::string method = o.method.empty() ? "enumerate" : o.method;
  auto enumerate = [&] {
    json arr = json::array();
    const auto dirs = enumerate_directions(lm.model);
    for (const auto& d : dirs) arr.push_back(direction_json(lm, d));
    return std::make_pair(arr, dirs);
  };
  if (method == "enumerate") {
    out << dump(enumerate().first);
  } else if (method == "alphas") {
    out << dump(alpha_directions_json(lm, directions_from_alphas(lm.model)));
  } else {
    const auto [arr, dirs] = enumerate();
    const auto alphas = directions_from_alphas(lm.model);
    std::set<std::vector<Vertex>> a(alphas.subsets.begin(), alphas.subsets.end());
    std::set<std::vector<Vertex>> e;
    for (const auto& d : dirs) e.insert(d.subset);
    out << dump({{"enumerate", arr}, {"alphas", alpha_directions_json(lm, alphas)}, {"agree", a == e}});
  }
  return kExitOk;
}

int cmd_levelset(const LoadedModel& lm, const Options& o, std::ostream& out) {
  if (o.n < 1) throw UsageError("--n must be >= 1");
  Gauge g = lm.model.as_gauge();
  std::vector<std::string> header;
  if (!o.keep.empty()) {
    const auto keep = pair_from_keep(lm, o.keep);
    if (keep.size() != 2) throw UsageError("--keep takes exactly two vertices here");
    g = pairwise_marginal(lm.model, keep[0], keep[1]).gauge;
    header = {lm.label(keep[0]), lm.label(keep[1])};
  } else {
    header = lm.labels;
  }
  const auto points = sample_level_set(g, o.n, o.seed);
  out << points_csv(points, header);
  if (!o.svg.empty()) {
    if (g.dimension() != 2) throw UsageError("--svg needs a bivariate level set (use --keep a,b)");
    std::optional<std::array<double, 2>> contact;
    try {
      contact = std::array<double, 2>{1.0, edge_alpha(g).value};
    } catch (const Error&) {
    }
    std::ofstream file(o.svg, std::ios::binary);
    if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write '" + o.svg + "'");
    file << level_set_svg(points, g.margin(), contact);
  }
  return kExitOk;
}

struct Check {
  std::string name;
  bool passed = false;
  json detail;
};

int cmd_verify(const LoadedModel& lm, std::ostream& out) {
  const Model& m = lm.model;
  const auto& verts = m.graph().vertices();
  std::vector<Check> checks;
  auto run = [&](const std::string& name, const std::function<Check()>& body) {
    try {
      checks.push_back(body());
    } catch (const Error& e) {
      checks.push_back({name, false, {{"error", std::string(to_string(e.kind()))}, {"message", e.detail()}}});
    }
  };

  for (std::size_t c = 0; c < m.clique_gauges().size(); ++c) {
    const auto& cg = m.clique_gauges()[c];
    const std::string name = "clique_axioms:" + labels_json(lm, cg.vertices).dump();
    run(name, [&] {
      const auto r = check_gauge_axioms(cg.gauge, 1000, 1e-9);
      return Check{name, r.passed,
                   {{"max_homogeneity_defect", r.max_homogeneity_defect},
                    {"max_lower_bound_violation", r.max_lower_bound_violation}}};
    });
  }
  run("joint_axioms", [&] {
    const auto r = check_gauge_axioms(m.as_gauge(), 1000, 1e-9);
    return Check{"joint_axioms", r.passed,
                 {{"max_homogeneity_defect", r.max_homogeneity_defect},
                  {"max_lower_bound_violation", r.max_lower_bound_violation}}};
  });
  run("clique_equivalence", [&] {
    const auto r = check_clique_equivalence(m);
    return Check{"clique_equivalence", r.forward && r.backward,
                 {{"joint_value", r.joint_value}, {"clique_values", r.clique_values}}};
  });
  run("alpha_recurrence_vs_numeric", [&] {
    double worst = 0.0;
    json worst_pair = nullptr;
    std::vector<Sign> signs{Sign::Plus};
    if (m.margin() == Margin::Laplace) signs.push_back(Sign::Minus);
    for (Vertex i : verts) {
      for (Vertex j : verts) {
        if (i == j) continue;
        const Gauge g = pairwise_marginal(m, i, j).gauge;
        for (Sign s : signs) {
          const double d = std::abs(recurrence_alpha(m, i, j, s).value - edge_alpha(g, s).value);
          if (d > worst || worst_pair.is_null()) {
            worst = std::max(worst, d);
            worst_pair = {lm.label(i), lm.label(j), std::string(to_string(s))};
          }
        }
      }
    }
    return Check{"alpha_recurrence_vs_numeric", worst <= 1e-3, {{"max_discrepancy", worst}, {"worst", worst_pair}}};
  });
  run("pairwise_marginal_axioms", [&] {
    double worst_h = 0.0;
    double worst_l = 0.0;
    bool ok = true;
    for (std::size_t b = 1; b < verts.size() && b <= 3; ++b) {
      const auto r = check_gauge_axioms(pairwise_marginal(m, verts[0], verts[b]).gauge, 100, 1e-6);
      ok = ok && r.passed;
      worst_h = std::max(worst_h, r.max_homogeneity_defect);
      worst_l = std::max(worst_l, r.max_lower_bound_violation);
    }
    return Check{"pairwise_marginal_axioms", ok,
                 {{"max_homogeneity_defect", worst_h}, {"max_lower_bound_violation", worst_l}}};
  });
  if (verts.size() <= 12) {
    run("direction_coverage", [&] {
      std::set<Vertex> covered;
      const auto dirs = enumerate_directions(m);
      for (const auto& d : dirs) covered.insert(d.subset.begin(), d.subset.end());
      return Check{"direction_coverage", covered.size() == verts.size(), {{"directions", dirs.size()}}};
    });
  }
  if (m.margin() == Margin::Exponential) {
    run("alpha_directions_confirmed", [&] {
      const auto a = directions_from_alphas(m);
      bool ok = true;
      json gaps = json::array();
      for (const auto& s : a.subsets) {
        const auto d = is_direction(m, s);
        ok = ok && d.accepted;
        gaps.push_back(d.gap);
      }
      return Check{"alpha_directions_confirmed", ok, {{"gaps", gaps}}};
    });
    run("beta_shortcuts", [&] {
      bool ok = true;
      for (Vertex i : verts) {
        for (Vertex j : verts) {
          if (i == j) continue;
          const auto edges = path_edge_coefficients(m, i, j);
          const double fold = beta_path(edges).value;
          if (auto p = beta_all_alpha_positive(edges)) ok = ok && std::abs(*p - fold) <= 1e-12;
          if (auto z = beta_all_alpha_zero(edges)) ok = ok && std::abs(*z - fold) <= 1e-12;
        }
      }
      return Check{"beta_shortcuts", ok, json::object()};
    });
  }

  bool all = true;
  json arr = json::array();
  for (const auto& c : checks) {
    all = all && c.passed;
    arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  out << dump({{"passed", all}, {"checks", arr}});
  return all ? kExitOk : kExitVerification;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gauge-function graphical models on block graphs", "gauge-graph"};
  app.require_subcommand(1);
  Options o;

  auto add_model = [&](CLI::App* sub) { sub->add_option("model", o.model_path, "Model file (JSON)")->required(); };
  auto* validate = app.add_subcommand("validate", "Check a model and print its graph summary");
  add_model(validate);
  auto* eval = app.add_subcommand("eval", "Evaluate the joint gauge at a point");
  add_model(eval);
  eval->add_option("--point", o.point, "Comma-separated coordinates in sorted label order")->required();
  auto* marginal = app.add_subcommand("marginal", "Tabulate a marginal gauge on a grid");
  add_model(marginal);
  marginal->add_option("--keep", o.keep, "Comma-separated kept vertices")->required();
  marginal->add_option("--grid", o.grid, "Points per axis")->capture_default_str();
  marginal->add_option("--method", o.method, "chain | numeric")->check(CLI::IsMember({"chain", "numeric"}));
  auto* alpha = app.add_subcommand("alpha", "Conditional alpha coefficient");
  add_model(alpha);
  alpha->add_option("--from", o.from, "Conditioning vertex")->required();
  alpha->add_option("--to", o.to, "Target vertex")->required();
  alpha->add_option("--sign", o.sign, "+ or - (Laplace models)")->capture_default_str();
  alpha->add_option("--method", o.method, "recurrence | numeric | both")
      ->check(CLI::IsMember({"recurrence", "numeric", "both"}));
  auto* beta = app.add_subcommand("beta", "Conditional beta coefficient");
  add_model(beta);
  beta->add_option("--from", o.from, "Conditioning vertex")->required();
  beta->add_option("--to", o.to, "Target vertex")->required();
  beta->add_option("--method", o.method, "recurrence | numeric | both")
      ->check(CLI::IsMember({"recurrence", "numeric", "both"}));
  auto* directions = app.add_subcommand("directions", "Geometric extreme directions");
  add_model(directions);
  directions->add_option("--method", o.method, "enumerate | alphas | both")
      ->check(CLI::IsMember({"enumerate", "alphas", "both"}));
  auto* levelset = app.add_subcommand("levelset", "Points on the unit level set");
  add_model(levelset);
  levelset->add_option("--n", o.n, "Number of points")->capture_default_str();
  levelset->add_option("--keep", o.keep, "Two vertices: use their pairwise marginal");
  levelset->add_option("--svg", o.svg, "Also write an SVG plot (bivariate only)");
  levelset->add_option("--seed", o.seed, "Direction seed for three or more dimensions")->capture_default_str();
  auto* verify = app.add_subcommand("verify", "Run the invariant suite on a model");
  add_model(verify);

  std::vector<std::string> argv_store{"gauge-graph"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what());
    return kExitUsage;
  }

  try {
    const LoadedModel lm = load_model_file(o.model_path);
    if (validate->parsed()) return cmd_validate(lm, out);
    if (eval->parsed()) return cmd_eval(lm, o, out);
    if (marginal->parsed()) return cmd_marginal(lm, o, out);
    if (alpha->parsed()) return cmd_alpha(lm, o, out);
    if (beta->parsed()) return cmd_beta(lm, o, out);
    if (directions->parsed()) return cmd_directions(lm, o, out);
    if (levelset->parsed()) return cmd_levelset(lm, o, out);
    if (verify->parsed()) return cmd_verify(lm, out);
  } catch (const UsageError& e) {
    report_error(err, "UsageError", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    report_error(err, std::string(to_string(e.kind())), e.detail());
    return kExitModel;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace gauge_graph
