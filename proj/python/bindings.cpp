#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gauge_graph/cli.hpp"
#include "gauge_graph/coefficients.hpp"
#include "gauge_graph/error.hpp"
#include "gauge_graph/joint_extremes.hpp"
#include "gauge_graph/model_io.hpp"

namespace py = pybind11;
using namespace gauge_graph;

namespace {

Sign parse_sign(const std::string& s) {
  if (s == "+" || s == "plus") return Sign::Plus;
  if (s == "-" || s == "minus") return Sign::Minus;
  throw Error(ErrorKind::InvalidArgument, "sign must be '+' or '-'");
}

std::vector<std::string> labels_of(const LoadedModel& lm, const std::vector<Vertex>& vs) {
  std::vector<std::string> out;
  for (Vertex v : vs) out.push_back(lm.label(v));
  return out;
}

std::vector<Vertex> vertices_of(const LoadedModel& lm, const std::vector<std::string>& labels) {
  std::vector<Vertex> out;
  for (const auto& l : labels) out.push_back(lm.vertex(l));
  return out;
}

double alpha_of(const LoadedModel& lm, const std::string& i, const std::string& j, const std::string& method,
                const std::string& sign) {
  const Vertex a = lm.vertex(i);
  const Vertex b = lm.vertex(j);
  const Sign s = parse_sign(sign);
  if (method == "recurrence") {
    if (lm.model.margin() == Margin::Laplace) return alpha_path_signed(lm.model, a, b, s).value;
    return alpha_path(lm.model, a, b).value;
  }
  if (method == "numeric") return edge_alpha(pairwise_marginal(lm.model, a, b).gauge, s).value;
  throw Error(ErrorKind::InvalidArgument, "method must be 'recurrence' or 'numeric'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Extremal dependence of graphical models built from gauge functions.";

  static py::exception<Error> error(m, "GaugeGraphError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // args: (kind, detail)
      PyErr_SetObject(error.ptr(),
                      py::make_tuple(std::string(to_string(e.kind())), e.detail()).ptr());
    }
  });

  py::class_<Gauge>(m, "Gauge")
      .def_property_readonly("dimension", &Gauge::dimension)
      .def_property_readonly("family", &Gauge::family_name)
      .def_property_readonly("margin", [](const Gauge& g) { return std::string(to_string(g.margin())); })
      .def("__call__", [](const Gauge& g, const std::vector<double>& x) { return g.evaluate(x); }, py::arg("x"))
      .def("__repr__", [](const Gauge& g) {
        return "<Gauge " + g.family_name() + " d=" + std::to_string(g.dimension()) + ">";
      });

  m.def("logistic", [](double theta, std::size_t d) { return make_gauge(family::Logistic{theta, d}); },
        py::arg("theta"), py::arg("dimension") = 2);
  m.def("gaussian", [](double rho) { return make_gauge(family::GaussianExp{rho}); }, py::arg("rho"));
  m.def("inverted_logistic", [](double theta) { return make_gauge(family::InvertedLogistic{theta}); },
        py::arg("theta"));
  m.def("square", [](double theta) { return make_gauge(family::Square{theta}); }, py::arg("theta"));
  m.def("asymmetric_ad",
        [](double theta, double gamma) { return make_gauge(family::AsymmetricAD{theta, gamma}); },
        py::arg("theta"), py::arg("gamma"));
  m.def(
      "gaussian_laplace",
      [](const std::vector<std::vector<double>>& sigma) {
        SquareMatrix s(sigma.size());
        for (std::size_t r = 0; r < sigma.size(); ++r) {
          if (sigma[r].size() != sigma.size()) {
            throw Error(ErrorKind::DimensionMismatch, "correlation matrix must be square");
          }
          for (std::size_t c = 0; c < sigma.size(); ++c) s(r, c) = sigma[r][c];
        }
        return make_gauge(family::GaussianLaplace{std::move(s)});
      },
      py::arg("sigma"));

  m.def("edge_alpha", [](const Gauge& g, const std::string& sign) { return edge_alpha(g, parse_sign(sign)).value; },
        py::arg("gauge"), py::arg("sign") = "+");
  m.def("edge_beta", [](const Gauge& g, double alpha) { return edge_beta(g, alpha).value; }, py::arg("gauge"),
        py::arg("alpha"));

  py::class_<LoadedModel>(m, "Model")
      .def_static("from_json", [](const std::string& text) { return parse_model(text); }, py::arg("text"))
      .def_static("from_file", &load_model_file, py::arg("path"))
      .def("to_json", [](const LoadedModel& lm) { return serialize_model(lm); })
      .def_readonly("labels", &LoadedModel::labels)
      .def_property_readonly("margin", [](const LoadedModel& lm) { return std::string(to_string(lm.model.margin())); })
      .def("__len__", [](const LoadedModel& lm) { return lm.model.size(); })
      .def(
          "evaluate",
          [](const LoadedModel& lm, const std::vector<double>& x) { return eval_joint(lm.model, x); },
          py::arg("x"), "Joint gauge at x, ordered like labels.")
      .def(
          "pairwise_gauge",
          [](const LoadedModel& lm, const std::string& i, const std::string& j) {
            return pairwise_marginal(lm.model, lm.vertex(i), lm.vertex(j)).gauge;
          },
          py::arg("i"), py::arg("j"))
      .def("alpha", &alpha_of, py::arg("i"), py::arg("j"), py::arg("method") = "recurrence",
           py::arg("sign") = "+")
      .def(
          "beta",
          [](const LoadedModel& lm, const std::string& i, const std::string& j, const std::string& method) {
            const Vertex a = lm.vertex(i);
            const Vertex b = lm.vertex(j);
            if (method == "recurrence") return beta_path(lm.model, a, b).value;
            if (method != "numeric") {
              throw Error(ErrorKind::InvalidArgument, "method must be 'recurrence' or 'numeric'");
            }
            // Centred on the recurrence alpha, as in the CLI.
            return edge_beta(pairwise_marginal(lm.model, a, b).gauge, alpha_path(lm.model, a, b).value).value;
          },
          py::arg("i"), py::arg("j"), py::arg("method") = "recurrence")
      .def("is_direction",
           [](const LoadedModel& lm, const std::vector<std::string>& subset) {
             return is_direction(lm.model, vertices_of(lm, subset)).accepted;
           },
           py::arg("subset"))
      .def("directions", [](const LoadedModel& lm) {
        std::vector<std::vector<std::string>> out;
        for (const auto& d : enumerate_directions(lm.model)) out.push_back(labels_of(lm, d.subset));
        return out;
      });

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line in-process; returns (exit_code, stdout, stderr).");
}
