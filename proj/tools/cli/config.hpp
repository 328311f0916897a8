#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "acyl/glue_builder.hpp"
#include "acyl/ma_continuity.hpp"

namespace acyl::cli {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string subcommand;

  std::string model = "cigar";  // cigar | cylinder | glued (cigar glued to the cylinder)
  int n = 1;
  double grid_h = 0.01;
  std::optional<double> t_min;
  std::optional<double> t_max;

  ContinuityConfig solver;

  double circle_length = 6.283185307179586;
  std::string lattice = "square";  // square | hexagonal
  double lattice_scale = 6.283185307179586;
  std::string quotient = "none";  // none | z2 | z3
  double mu_max = 10.0;

  double window_lo = 0.0;
  double window_hi = 2.0;
  bool window_open = true;

  double mu = 0.0;

  std::string inner = "cigar";
  GlueSpec glue{3.0, 7, -1.0, 1e-2};  // rho0 < 0: choose automatically

  std::string rhs;
  double rhs_scale = 1.0;
  std::string output_dir = "out";
  unsigned seed = 0;
  bool plot = false;
  bool plot_log = false;
  bool decay = false;

  /// Every key with its effective value, sorted by key.
  std::map<std::string, std::string> effective() const;
  /// "key = value" lines of effective() minus output.dir; the text hashed
  /// into manifests and reports.
  std::string canonical() const;
};

/// Parses key=value lines (# starts a comment) over the defaults. Unknown
/// keys, malformed values and out-of-range values throw ConfigError naming
/// the line and key.
RunConfig parse_config(const std::string& text);

/// Applies one key=value assignment; `where` prefixes error messages.
void set_key(RunConfig& cfg, const std::string& key, const std::string& value,
             const std::string& where);

/// Throws ConfigError for combinations that no single key can catch.
void validate(const RunConfig& cfg);

}  // namespace acyl::cli
