#pragma once

#include <filesystem>
#include <string>

#include "acyl/grid.hpp"

namespace acyl::cli {

/// Line plot of t against value (or log10|value|). Presentation only.
std::string svg_plot(const GridFunction& u, const std::string& title, bool log_scale);
void write_svg(const std::filesystem::path& path, const GridFunction& u, const std::string& title,
               bool log_scale);

}  // namespace acyl::cli
