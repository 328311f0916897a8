#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "acyl/cross_section.hpp"
#include "acyl/diagnostics.hpp"
#include "acyl/grid.hpp"
#include "acyl/indicial_weights.hpp"
#include "acyl/ma_continuity.hpp"
#include "acyl/model_geometry.hpp"

namespace acyl::io {

/// Shortest text that round-trips the double; "inf"/"-inf"/"nan" otherwise.
std::string format_double(double x);

std::string grid_function_csv(const GridFunction& u);
/// Parses `t,value` CSV; the t column must be a uniform grid.
GridFunction parse_grid_function_csv(const std::string& text);
GridFunction read_grid_function_csv(const std::filesystem::path& path);

std::string spectrum_csv(const std::vector<SpectralLevel>& levels);
std::string weights_csv(const CriticalWeightSet& cws);
std::string path_csv(const std::vector<PathRecord>& path);

/// Plain key=value block: kind, n, c0, torus rows.
std::string model_text(const RadialKahlerModel& model);

std::string path_json(const std::vector<PathRecord>& path);
std::string report_json(const VerificationReport& report);

void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

}  // namespace acyl::io
