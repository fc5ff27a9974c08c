#include "gauge_graph/reports.hpp"

#include <cstdio>

#include "gauge_graph/error.hpp"

namespace gauge_graph {

std::string format_number(double v, int significant) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

std::string points_csv(const std::vector<std::vector<double>>& points, std::vector<std::string> header) {
  const std::size_t d = points.empty() ? header.size() : points.front().size();
  if (header.empty()) {
    for (std::size_t k = 0; k < d; ++k) header.push_back("x" + std::to_string(k + 1));
  }
  if (header.size() != d) throw Error(ErrorKind::DimensionMismatch, "CSV header does not match the point dimension");
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) {
    const bool quote = header[k].find_first_of(",\"\r\n") != std::string::npos;
    std::string cell = header[k];
    if (quote) {
      std::string escaped;
      for (char c : cell) {
        if (c == '"') escaped += '"';
        escaped += c;
      }
      cell = "\"" + escaped + "\"";
    }
    out += (k ? "," : "") + cell;
  }
  out += "\r\n";
  for (const auto& p : points) {
    if (p.size() != d) throw Error(ErrorKind::DimensionMismatch, "points have mixed dimensions");
    for (std::size_t k = 0; k < d; ++k) out += (k ? "," : "") + format_number(p[k]);
    out += "\r\n";
  }
  return out;
}

std::string level_set_svg(const std::vector<std::vector<double>>& points, Margin margin,
                          std::optional<std::array<double, 2>> contact) {
  constexpr double kSize = 400.0;
  constexpr double kPad = 20.0;
  const double lo = margin == Margin::Exponential ? 0.0 : -1.0;
  const double span = 1.0 - lo;
  auto px = [&](double x) { return kPad + (x - lo) / span * kSize; };
  auto py = [&](double y) { return kPad + (1.0 - (y - lo) / span) * kSize; };
  auto num = [](double v) { return format_number(v, 6); };

  std::string out;
  const std::string extent = num(kSize + 2 * kPad);
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + extent + "\" height=\"" + extent +
         "\" viewBox=\"0 0 " + extent + " " + extent + "\">\n";
  out += "<rect x=\"" + num(kPad) + "\" y=\"" + num(kPad) + "\" width=\"" + num(kSize) + "\" height=\"" +
         num(kSize) + "\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";
  if (margin == Margin::Laplace) {
    out += "<line x1=\"" + num(px(-1)) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(px(1)) + "\" y2=\"" +
           num(py(0)) + "\" stroke=\"#ccc\"/>\n";
    out += "<line x1=\"" + num(px(0)) + "\" y1=\"" + num(py(-1)) + "\" x2=\"" + num(px(0)) + "\" y2=\"" +
           num(py(1)) + "\" stroke=\"#ccc\"/>\n";
  }
  out += std::string("<") + (margin == Margin::Laplace ? "polygon" : "polyline") + " points=\"";
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].size() != 2) throw Error(ErrorKind::DimensionMismatch, "SVG output needs bivariate points");
    out += (k ? " " : "") + num(px(points[k][0])) + "," + num(py(points[k][1]));
  }
  out += "\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\"/>\n";
  if (contact) {
    out += "<circle cx=\"" + num(px((*contact)[0])) + "\" cy=\"" + num(py((*contact)[1])) +
           "\" r=\"4\" fill=\"#d62728\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace gauge_graph
