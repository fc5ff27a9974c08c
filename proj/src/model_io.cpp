#include "gauge_graph/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "gauge_graph/error.hpp"

namespace gauge_graph {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& message) {
  throw Error(ErrorKind::ParseError, pointer + ": " + message);
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const json& field(const json& obj, const std::string& key, const std::string& pointer) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(pointer, "missing field '" + key + "'");
  return *it;
}

double number(const json& v, const std::string& pointer) {
  if (!v.is_number()) fail(pointer, "expected a number");
  return v.get<double>();
}

std::string label_text(const json& v, const std::string& pointer) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  fail(pointer, "vertex labels must be strings or integers");
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& pointer) {
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* s) { return k == s; })) {
      fail(pointer + "/" + k, "unexpected parameter");
    }
  }
}

SquareMatrix matrix(const json& v, const std::string& pointer) {
  if (!v.is_array() || v.empty()) fail(pointer, "expected a non-empty array of rows");
  SquareMatrix m(v.size());
  for (std::size_t r = 0; r < v.size(); ++r) {
    const std::string rp = pointer + "/" + std::to_string(r);
    if (!v[r].is_array() || v[r].size() != v.size()) fail(rp, "expected a row of length " + std::to_string(v.size()));
    for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = number(v[r][c], rp + "/" + std::to_string(c));
  }
  return m;
}

GaugeSpec gauge_spec(const json& g, std::size_t size, Margin margin, const std::string& pointer) {
  if (!g.is_object()) fail(pointer, "expected an object");
  const json& fam = field(g, "family", pointer);
  if (!fam.is_string()) fail(pointer + "/family", "expected a string");
  const std::string family = fam.get<std::string>();
  const std::string pp = pointer + "/params";
  const json empty = json::object();
  const json& params = g.contains("params") ? g.at("params") : empty;
  if (!params.is_object()) fail(pp, "expected an object");
  auto param = [&](const char* key) { return number(field(params, key, pp), pp + "/" + key); };
  auto require_pair = [&] {
    if (size != 2) fail(pointer + "/family", family + " gauges are bivariate; the clique has " + std::to_string(size) + " vertices");
  };

  if (family == "logistic") {
    only_keys(params, {"theta"}, pp);
    return family::Logistic{param("theta"), size};
  }
  if (family == "gaussian") {
    require_pair();
    only_keys(params, {"rho"}, pp);
    return family::GaussianExp{param("rho")};
  }
  if (family == "inverted_logistic") {
    require_pair();
    only_keys(params, {"theta"}, pp);
    return family::InvertedLogistic{param("theta")};
  }
  if (family == "square") {
    require_pair();
    only_keys(params, {"theta"}, pp);
    return family::Square{param("theta")};
  }
  if (family == "asymmetric_ad") {
    require_pair();
    only_keys(params, {"theta", "gamma"}, pp);
    return family::AsymmetricAD{param("theta"), param("gamma")};
  }
  if (family == "gaussian_laplace") {
    only_keys(params, {"rho", "sigma"}, pp);
    if (params.contains("rho") == params.contains("sigma")) fail(pp, "give exactly one of 'rho' and 'sigma'");
    if (params.contains("rho")) {
      require_pair();
      const double rho = param("rho");
      return family::GaussianLaplace{SquareMatrix{{1.0, rho}, {rho, 1.0}}};
    }
    SquareMatrix sigma = matrix(params.at("sigma"), pp + "/sigma");
    if (sigma.size() != size) {
      fail(pp + "/sigma", "matrix is " + std::to_string(sigma.size()) + "x" + std::to_string(sigma.size()) +
                              " but the clique has " + std::to_string(size) + " vertices");
    }
    return family::GaussianLaplace{std::move(sigma)};
  }
  if (family == "polygon") {
    require_pair();
    only_keys(params, {"vertices"}, pp);
    const json& vs = field(params, "vertices", pp);
    if (!vs.is_array()) fail(pp + "/vertices", "expected an array of [x, y] pairs");
    std::vector<std::array<double, 2>> verts;
    for (std::size_t k = 0; k < vs.size(); ++k) {
      const std::string vp = pp + "/vertices/" + std::to_string(k);
      if (!vs[k].is_array() || vs[k].size() != 2) fail(vp, "expected [x, y]");
      verts.push_back({number(vs[k][0], vp + "/0"), number(vs[k][1], vp + "/1")});
    }
    return family::StarPolygon{std::move(verts), margin};
  }
  fail(pointer + "/family", "unknown family '" + family + "'");
}

std::string id_legend(const std::vector<std::string>& labels) {
  std::string out = " [vertex ids:";
  for (std::size_t k = 0; k < labels.size(); ++k) out += " " + std::to_string(k) + "=" + labels[k];
  return out + "]";
}

json params_json(const Gauge& g) {
  return std::visit(
      [&](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::Logistic> || std::is_same_v<T, family::InvertedLogistic> ||
                      std::is_same_v<T, family::Square>) {
          return {{"theta", f.theta}};
        } else if constexpr (std::is_same_v<T, family::GaussianExp>) {
          return {{"rho", f.rho}};
        } else if constexpr (std::is_same_v<T, family::AsymmetricAD>) {
          return {{"theta", f.theta}, {"gamma", f.gamma}};
        } else if constexpr (std::is_same_v<T, family::GaussianLaplace>) {
          json rows = json::array();
          for (std::size_t r = 0; r < f.correlation.size(); ++r) {
            const auto row = f.correlation.row(r);
            rows.push_back(std::vector<double>(row.begin(), row.end()));
          }
          return {{"sigma", rows}};
        } else if constexpr (std::is_same_v<T, family::StarPolygon>) {
          json vs = json::array();
          for (const auto& v : f.vertices) vs.push_back({v[0], v[1]});
          return {{"vertices", vs}};
        } else {
          throw Error(ErrorKind::NotSupported, "custom gauge '" + f.name + "' cannot be serialized");
        }
      },
      g.spec());
}

}  // namespace

Vertex LoadedModel::vertex(std::string_view label) const {
  const auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) {
    throw Error(ErrorKind::UnknownVertex, "no vertex labelled '" + std::string(label) + "'");
  }
  return static_cast<Vertex>(it - labels.begin());
}

const std::string& LoadedModel::label(Vertex v) const { return labels.at(static_cast<std::size_t>(v)); }

LoadedModel parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": malformed JSON");
  }
  if (!doc.is_object()) fail("", "the document must be a JSON object");
  only_keys(doc, {"margin", "vertices", "cliques"}, "");

  const json& margin_field = field(doc, "margin", "");
  if (!margin_field.is_string()) fail("/margin", "expected a string");
  Margin margin;
  try {
    margin = parse_margin(margin_field.get<std::string>());
  } catch (const Error& e) {
    fail("/margin", e.detail());
  }

  const json& vs = field(doc, "vertices", "");
  if (!vs.is_array() || vs.empty()) fail("/vertices", "expected a non-empty array");
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < vs.size(); ++k) labels.push_back(label_text(vs[k], "/vertices/" + std::to_string(k)));
  std::vector<std::string> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (const auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
    fail("/vertices", "duplicate vertex '" + *dup + "'");
  }
  std::map<std::string, Vertex> ids;
  for (std::size_t k = 0; k < sorted.size(); ++k) ids[sorted[k]] = static_cast<Vertex>(k);

  const json& cs = field(doc, "cliques", "");
  if (!cs.is_array() || cs.empty()) fail("/cliques", "expected a non-empty array");
  std::vector<std::vector<Vertex>> cliques;
  std::vector<CliqueGauge> gauges;
  for (std::size_t c = 0; c < cs.size(); ++c) {
    const std::string cp = "/cliques/" + std::to_string(c);
    if (!cs[c].is_object()) fail(cp, "expected an object");
    only_keys(cs[c], {"vertices", "gauge"}, cp);
    const json& cv = field(cs[c], "vertices", cp);
    if (!cv.is_array()) fail(cp + "/vertices", "expected an array");
    std::vector<Vertex> members;
    for (std::size_t k = 0; k < cv.size(); ++k) {
      const std::string vp = cp + "/vertices/" + std::to_string(k);
      const std::string name = label_text(cv[k], vp);
      const auto it = ids.find(name);
      if (it == ids.end()) fail(vp, "unknown vertex '" + name + "'");
      if (std::find(members.begin(), members.end(), it->second) != members.end()) {
        fail(vp, "vertex '" + name + "' listed twice");
      }
      members.push_back(it->second);
    }
    const std::string gp = cp + "/gauge";
    GaugeSpec spec = gauge_spec(field(cs[c], "gauge", cp), members.size(), margin, gp);
    try {
      gauges.push_back({members, make_gauge(std::move(spec))});
    } catch (const Error& e) {
      throw Error(e.kind(), gp + ": " + e.detail());
    }
    cliques.push_back(std::move(members));
  }

  try {
    BlockGraph graph = build_block_graph(cliques);
    if (graph.size() != sorted.size()) {
      std::vector<std::string> unused;
      for (std::size_t k = 0; k < sorted.size(); ++k) {
        if (!graph.contains(static_cast<Vertex>(k))) unused.push_back(sorted[k]);
      }
      fail("/vertices", "vertex '" + unused.front() + "' belongs to no clique");
    }
    return {assemble_model(std::move(graph), std::move(gauges), margin), std::move(sorted)};
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    throw Error(e.kind(), "/cliques: " + e.detail() + id_legend(sorted));
  }
}

LoadedModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string serialize_model(const LoadedModel& m) {
  json doc;
  doc["margin"] = std::string(to_string(m.model.margin()));
  doc["vertices"] = m.labels;
  json cliques = json::array();
  for (const auto& cg : m.model.clique_gauges()) {
    json members = json::array();
    for (Vertex v : cg.vertices) members.push_back(m.label(v));
    cliques.push_back({{"vertices", members},
                       {"gauge", {{"family", cg.gauge.family_name()}, {"params", params_json(cg.gauge)}}}});
  }
  doc["cliques"] = cliques;
  return doc.dump(2) + "\n";
}

}  // namespace gauge_graph
