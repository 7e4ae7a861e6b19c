// tcsim: moment dynamics, Fock oracle and scenario sweeps from the command line.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "tcsim/commands.hpp"
#include "tcsim/config.hpp"

namespace {

struct Sink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = &std::cout;
};

// Opens `path` (binary, so line endings stay LF) or falls back to stdout.
Sink open_output(const std::string& path) {
  Sink s;
  if (path.empty() || path == "-") return s;
  s.file = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*s.file) throw std::runtime_error("cannot open output file " + path);
  s.stream = s.file.get();
  return s;
}

tcsim::RunConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tcsim::ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return tcsim::parse_config(buf.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven transmon-cavity entanglement simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::optional<double> dt;
  std::optional<int> grid;
  int threads = 0;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output CSV path (default: stdout)");
    sub->add_option("--dt", dt, "integration step")->check(CLI::PositiveNumber);
  };

  CLI::App* simulate = app.add_subcommand("simulate", "moment trajectory for one parameter point");
  common(simulate);
  CLI::App* oracle = app.add_subcommand("oracle", "truncated Fock-space master equation run");
  common(oracle);

  std::string scenario, mode;
  CLI::App* sweep = app.add_subcommand("sweep", "run a catalog scenario over its grid");
  sweep->add_option("scenario", scenario, "fig1a ... fig5 (default: config scenario)");
  sweep->add_option("mode", mode, "paper, derived or oracle (default: config mode)");
  common(sweep);
  sweep->add_option("--grid", grid, "points per continuous axis")->check(CLI::PositiveNumber);
  sweep->add_option("--threads", threads, "worker threads (0: all cores)");

  CLI::App* compare = app.add_subcommand("compare", "landmark report against the reference values");
  common(compare);
  compare->add_option("--grid", grid, "g points per landmark sweep")->check(CLI::PositiveNumber);
  compare->add_option("--threads", threads, "worker threads (0: all cores)");

  CLI11_PARSE(app, argc, argv);

  tcsim::RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const std::exception& e) {
    tcsim::write_error(std::cerr, e.what());
    return 2;
  }
  if (dt) cfg.dt = *dt;
  if (!out_path.empty()) cfg.output = out_path;

  Sink sink;
  try {
    sink = open_output(cfg.output);
  } catch (const std::exception& e) {
    tcsim::write_error(std::cerr, e.what());
    return 2;
  }
  std::ostream& out = *sink.stream;

  int status = 0;
  if (*simulate) {
    status = tcsim::cmd_simulate(cfg, out);
  } else if (*oracle) {
    status = tcsim::cmd_oracle(cfg, out);
  } else if (*sweep) {
    if (scenario.empty() && cfg.scenario) scenario = *cfg.scenario;
    if (mode.empty()) mode = tcsim::to_string(cfg.mode);
    status = tcsim::cmd_sweep(scenario, mode, out, grid.value_or(40), cfg.dt, threads);
  } else if (*compare) {
    status = tcsim::cmd_compare(out, grid.value_or(10), cfg.dt, threads);
  }
  out.flush();
  if (status != 0 && sink.file) std::cerr << "tcsim: failed, see the # error line in " << cfg.output << '\n';
  return status;
}
