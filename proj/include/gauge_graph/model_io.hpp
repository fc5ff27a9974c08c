#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gauge_graph/model.hpp"

namespace gauge_graph {

/// A model read from a document. Vertex labels are strings in the document;
/// the core model numbers them 0..n-1 in lexicographic label order.
struct LoadedModel {
  Model model;
  std::vector<std::string> labels;

  /// Errors: UnknownVertex.
  Vertex vertex(std::string_view label) const;
  const std::string& label(Vertex v) const;
};

/// Parses a JSON model document:
///   {"margin": "exponential" | "laplace",
///    "vertices": ["a", "b", ...],
///    "cliques": [{"vertices": [...], "gauge": {"family": ..., "params": {...}}}, ...]}
/// Families: logistic {theta}, gaussian {rho}, inverted_logistic {theta},
/// square {theta}, asymmetric_ad {theta, gamma}, gaussian_laplace {rho} or
/// {sigma: matrix}, polygon {vertices: [[x, y], ...]}.
/// Errors: ParseError with line/column for malformed text or a JSON pointer
/// for bad fields; model errors keep their kind and gain the field path.
LoadedModel parse_model(std::string_view text);

/// Reads and parses a file. Errors: InvalidArgument when unreadable, plus parse_model errors.
LoadedModel load_model_file(const std::string& path);

/// Canonical document text (sorted labels, cliques in stored order, full-precision numbers).
std::string serialize_model(const LoadedModel& m);

}  // namespace gauge_graph
