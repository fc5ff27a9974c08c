#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gauge_graph/gauge.hpp"

namespace gauge_graph {

/// printf-style "%.<significant>g".
std::string format_number(double v, int significant = 9);

/// RFC-4180 CSV with CRLF line ends. The default header is x1,...,xd.
std::string points_csv(const std::vector<std::vector<double>>& points,
                       std::vector<std::string> header = {});

/// SVG polyline of a bivariate level set on the unit box of the margin, with
/// an optional marked contact point.
std::string level_set_svg(const std::vector<std::vector<double>>& points, Margin margin,
                          std::optional<std::array<double, 2>> contact = std::nullopt);

}  // namespace gauge_graph
