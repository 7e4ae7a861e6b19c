#pragma once

#include <optional>
#include <string>

#include "tcsim/model.hpp"
#include "tcsim/oracle.hpp"
#include "tcsim/sweep.hpp"

namespace tcsim {

/// Everything a single CLI run needs. Defaults are the fig1b
/// baseline point (g = 1) in derived mode.
struct RunConfig {
  SystemParams params;
  DynamicsMode mode = DynamicsMode::Derived;
  double t_max = 50.0;
  double dt = 1e-3;
  int sample_stride = 100;
  FockConfig fock;
  std::string output;  ///< empty: standard output
  std::optional<std::string> scenario;

  bool operator==(const RunConfig&) const = default;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses `key = value` lines. `#` starts a comment, blank lines are skipped
/// and a repeated key overrides the earlier one. Throws ConfigError for an
/// unknown key, a malformed line or value (with its line number) or an
/// invalid mode.
RunConfig parse_config(const std::string& text);

/// Text that parse_config maps back to an equal RunConfig.
std::string render_config(const RunConfig& cfg);

}  // namespace tcsim
