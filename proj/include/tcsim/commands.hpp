#pragma once

#include <iosfwd>
#include <string>

#include "tcsim/config.hpp"
#include "tcsim/sweep.hpp"

namespace tcsim {

/// Subcommand bodies behind the CLI. Each writes CSV to `out` and returns the
/// process exit status; failures end the output with a `# error: ...` line
/// and return nonzero. Nothing is written to `out` except CSV.

/// `{:.17g}`: shortest form guaranteed to round-trip a double.
std::string csv_real(double v);

/// Moment trajectory (or the oracle, for mode = oracle).
int cmd_simulate(const RunConfig& cfg, std::ostream& out);

int cmd_oracle(const RunConfig& cfg, std::ostream& out);

/// `grid` points per continuous axis; dt and stride come from the defaults of
/// SweepOptions unless given.
int cmd_sweep(const std::string& scenario, const std::string& mode, std::ostream& out,
              int grid = 40, double dt = 1e-3, int threads = 0);

/// Landmark report over fig1a-c in paper and derived mode, `grid` g points
/// plus the landmark g values.
int cmd_compare(std::ostream& out, int grid = 10, double dt = 1e-3, int threads = 0);

/// Sweep table: axis columns, observable, diagnostics, E_N trace columns for
/// EnTrace scenarios, then the per-row error text.
void write_sweep_csv(const SweepResult& r, std::ostream& out);

/// Writes `# error: <message>` with newlines flattened.
void write_error(std::ostream& out, const std::string& message);

}  // namespace tcsim
