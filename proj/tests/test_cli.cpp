#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gauge_graph/cli.hpp"
#include "gauge_graph/error.hpp"
#include "gauge_graph/model_io.hpp"
#include "gauge_graph/reports.hpp"

using namespace gauge_graph;
using nlohmann::json;

namespace {

const std::string kModels = GAUGE_GRAPH_MODELS_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string model(const std::string& name) { return kModels + "/" + name + ".json"; }

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("gauge_graph_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ErrorKind parse_kind(const std::string& text, std::string* message = nullptr) {
  try {
    parse_model(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  FAIL("document was accepted");
  return ErrorKind::InvalidArgument;
}

const char* kSingleLogistic = R"({
  "margin": "exponential",
  "vertices": ["a", "b"],
  "cliques": [{"vertices": ["a", "b"], "gauge": {"family": "logistic", "params": {"theta": 0.4}}}]
})";

}  // namespace

TEST_CASE("eval prints twelve decimals") {
  const auto path = write_temp("single.json", kSingleLogistic);
  const auto r = run({"eval", path, "--point", "1,1"});
  CHECK(r.code == 0);
  CHECK(r.out == "1.000000000000\n");
  const auto bad = run({"eval", path, "--point", "1,-1"});
  CHECK(bad.code == 3);
  CHECK(json::parse(bad.err)["error"] == "DomainViolation");
}

TEST_CASE("validate summarizes the graph") {
  const auto r = run({"validate", model("example1")});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["valid"] == true);
  std::vector<std::string> seps = j["separators"];
  std::sort(seps.begin(), seps.end());
  CHECK(seps == std::vector<std::string>{"3", "4", "4", "6"});
  bool found = false;
  for (const auto& p : j["paths"]) {
    if (p["from"] == "1" && p["to"] == "9") {
      found = true;
      CHECK(p["path"] == json::array({"1", "3", "4", "6", "9"}));
    }
  }
  CHECK(found);
}

TEST_CASE("alpha --method both on the Gaussian-Laplace model") {
  const auto r = run({"alpha", model("gaussian_laplace6"), "--from", "1", "--to", "6", "--method", "both"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["recurrence"]["value"].get<double>() == doctest::Approx(-0.254016).epsilon(1e-12));
  CHECK(std::abs(j["numeric"]["value"].get<double>() + 0.254016) <= 1e-3);
  CHECK(j["discrepancy"].get<double>() <= 1e-3);
}

TEST_CASE("beta --method both on example 2(c)") {
  const auto r = run({"beta", model("example2c"), "--from", "1", "--to", "4", "--method", "both"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["recurrence"]["value"].get<double>() == doctest::Approx(0.56).epsilon(1e-12));
  CHECK(std::abs(j["numeric"]["value"].get<double>() - 0.56) <= 0.05);
  CHECK(j["numeric"]["fit"]["r2"].get<double>() > 0.99);
}

TEST_CASE("directions report") {
  const auto r = run({"directions", model("example3"), "--method", "both"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["agree"] == true);
  REQUIRE(j["enumerate"].size() == 2);
  CHECK(j["enumerate"][1]["A"] == json::array({"1", "2"}));
  CHECK(j["enumerate"][1]["witness"][2].get<double>() == doctest::Approx(0.36).epsilon(1e-3));
}

TEST_CASE("marginal CSV") {
  const auto r = run({"marginal", model("example3"), "--keep", "1,3", "--grid", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("1,3,value\r\n0,0,0\r\n", 0) == 0);
  std::istringstream lines(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 10);
  const auto numeric = run({"marginal", model("example3"), "--keep", "1,3", "--grid", "3", "--method", "numeric"});
  CHECK(numeric.code == 0);
}

TEST_CASE("levelset CSV and SVG") {
  const auto svg = (std::filesystem::temp_directory_path() / "gauge_graph_test_level.svg").string();
  std::filesystem::remove(svg);
  const auto r = run({"levelset", model("example3"), "--n", "50", "--keep", "2,3", "--svg", svg});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("2,3\r\n", 0) == 0);
  const auto text = read_file(svg);
  CHECK(text.find("<polyline") != std::string::npos);
  CHECK(text.find("<circle") != std::string::npos);
  const auto cloud = run({"levelset", model("example3"), "--n", "20"});
  CHECK(cloud.out.rfind("1,2,3\r\n", 0) == 0);
  CHECK(run({"levelset", model("example3"), "--n", "5", "--svg", svg}).code == 2);
}

TEST_CASE("usage and model errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"alpha", model("example3"), "--from", "1"}).code == 2);
  const auto unknown = run({"alpha", model("example3"), "--from", "1", "--to", "zz"});
  CHECK(unknown.code == 2);
  CHECK(json::parse(unknown.err)["error"] == "UsageError");
  CHECK(run({"alpha", model("example3"), "--from", "1", "--to", "3", "--method", "magic"}).code == 2);
  const auto missing = run({"validate", kModels + "/does_not_exist.json"});
  CHECK(missing.code == 3);
  const auto lap_beta = run({"beta", model("gaussian_laplace6"), "--from", "1", "--to", "2"});
  CHECK(lap_beta.code == 3);
  CHECK(json::parse(lap_beta.err)["error"] == "NotSupported");
}

TEST_CASE("parse diagnostics") {
  std::string msg;
  CHECK(parse_kind("{\n  \"margin\": \"exponential\",\n  \"vertices\": [1, 2,\n}", &msg) == ErrorKind::ParseError);
  CHECK(msg.find("line 4") != std::string::npos);

  const std::string unknown_vertex = R"({"margin": "exponential", "vertices": ["a", "b"],
    "cliques": [{"vertices": ["a", "q"], "gauge": {"family": "logistic", "params": {"theta": 0.4}}}]})";
  CHECK(parse_kind(unknown_vertex, &msg) == ErrorKind::ParseError);
  CHECK(msg.find("'q'") != std::string::npos);
  CHECK(msg.find("/cliques/0/vertices/1") != std::string::npos);

  const std::string bad_param = R"({"margin": "exponential", "vertices": ["a", "b"],
    "cliques": [{"vertices": ["a", "b"], "gauge": {"family": "gaussian", "params": {"rho": 1.5}}}]})";
  CHECK(parse_kind(bad_param, &msg) == ErrorKind::ParameterOutOfRange);
  CHECK(msg.find("/cliques/0/gauge") != std::string::npos);

  const std::string not_block = R"({"margin": "exponential", "vertices": ["a", "b", "c"],
    "cliques": [{"vertices": ["a", "b"], "gauge": {"family": "logistic", "params": {"theta": 0.4}}},
                {"vertices": ["b", "c"], "gauge": {"family": "logistic", "params": {"theta": 0.4}}},
                {"vertices": ["a", "c"], "gauge": {"family": "logistic", "params": {"theta": 0.4}}}]})";
  CHECK(parse_kind(not_block) == ErrorKind::NotDecomposable);

  const std::string extra = R"({"margin": "exponential", "vertices": ["a", "b"], "colour": 1,
    "cliques": [{"vertices": ["a", "b"], "gauge": {"family": "logistic", "params": {"theta": 0.4}}}]})";
  CHECK(parse_kind(extra) == ErrorKind::ParseError);

  const auto gl = load_model_file(model("gaussian_laplace6"));
  CHECK(gl.model.size() == 6);
  CHECK(gl.model.margin() == Margin::Laplace);
}

TEST_CASE("round trip preserves the model") {
  for (const char* name : {"example1", "example2d", "gaussian_laplace6", "two_solution"}) {
    CAPTURE(name);
    const auto a = load_model_file(model(name));
    const auto text = serialize_model(a);
    const auto b = parse_model(text);
    CHECK(b.labels == a.labels);
    CHECK(serialize_model(b) == text);
    std::vector<double> x(a.model.size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = (a.model.margin() == Margin::Laplace ? -0.5 : 0.1) + 0.13 * k;
    CHECK(a.model.evaluate(x) == b.model.evaluate(x));
  }
}

TEST_CASE("labels map in lexicographic order") {
  const std::string doc = R"({"margin": "exponential", "vertices": ["zeta", "alpha", "mid"],
    "cliques": [{"vertices": ["zeta", "alpha"], "gauge": {"family": "gaussian", "params": {"rho": 0.5}}},
                {"vertices": ["alpha", "mid"], "gauge": {"family": "logistic", "params": {"theta": 0.5}}}]})";
  const auto lm = parse_model(doc);
  CHECK(lm.labels == std::vector<std::string>{"alpha", "mid", "zeta"});
  CHECK(lm.vertex("zeta") == 2);
  CHECK(lm.label(0) == "alpha");
}

TEST_CASE("determinism") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"marginal", model("example2a"), "--keep", "1,4", "--grid", "5"},
           {"directions", model("example3")},
           {"levelset", model("example1"), "--n", "30"},
           {"alpha", model("two_solution"), "--from", "1", "--to", "3", "--method", "both"}}) {
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("CSV formatting") {
  CHECK(points_csv({{1.0, 0.123456789012}, {2.5, 1e-20}}) == "x1,x2\r\n1,0.123456789\r\n2.5,1e-20\r\n");
  CHECK(points_csv({{1.0}}, {"a,b"}) == "\"a,b\"\r\n1\r\n");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
}
