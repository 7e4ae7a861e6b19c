#include "tcsim/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace tcsim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v, int line) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end || !std::isfinite(x)) {
    throw ConfigError(fmt::format("line {}: '{}' is not a finite number for {}", line, v, key));
  }
  return x;
}

int parse_int(const std::string& key, const std::string& v, int line) {
  int x = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) {
    throw ConfigError(fmt::format("line {}: '{}' is not an integer for {}", line, v, key));
  }
  return x;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&, int)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto real = [&t](const char* key, double RunConfig::*field) {
      t[key] = [field](RunConfig& c, const std::string& k, const std::string& v, int line) {
        c.*field = parse_real(k, v, line);
      };
    };
    auto param = [&t](const char* key, double SystemParams::*field) {
      t[key] = [field](RunConfig& c, const std::string& k, const std::string& v, int line) {
        c.params.*field = parse_real(k, v, line);
      };
    };
    param("omega_a", &SystemParams::omega_a);
    param("omega_b", &SystemParams::omega_b);
    param("g", &SystemParams::g);
    param("drive_e", &SystemParams::drive_e);
    param("gamma_s", &SystemParams::gamma_s);
    param("e_c", &SystemParams::e_c);
    real("t_max", &RunConfig::t_max);
    real("dt", &RunConfig::dt);
    t["sample_stride"] = [](RunConfig& c, const std::string& k, const std::string& v, int line) {
      c.sample_stride = parse_int(k, v, line);
    };
    t["n_a"] = [](RunConfig& c, const std::string& k, const std::string& v, int line) {
      c.fock.n_a = parse_int(k, v, line);
    };
    t["n_b"] = [](RunConfig& c, const std::string& k, const std::string& v, int line) {
      c.fock.n_b = parse_int(k, v, line);
    };
    t["truncation_tol"] = [](RunConfig& c, const std::string& k, const std::string& v, int line) {
      c.fock.truncation_tol = parse_real(k, v, line);
    };
    t["mode"] = [](RunConfig& c, const std::string&, const std::string& v, int line) {
      try {
        c.mode = parse_dynamics_mode(v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("line {}: {}", line, e.what()));
      }
    };
    t["output"] = [](RunConfig& c, const std::string&, const std::string& v, int) { c.output = v; };
    t["scenario"] = [](RunConfig& c, const std::string&, const std::string& v, int) {
      c.scenario = v;
    };
    return t;
  }();
  return table;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = trim(raw.substr(0, raw.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value', got '{}'", line, body));
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError(fmt::format("line {}: unknown key '{}'", line, key));
    }
    it->second(cfg, key, value, line);
  }
  return cfg;
}

std::string render_config(const RunConfig& c) {
  std::string s;
  auto real = [&s](const char* key, double v) { s += fmt::format("{} = {:.17g}\n", key, v); };
  real("omega_a", c.params.omega_a);
  real("omega_b", c.params.omega_b);
  real("g", c.params.g);
  real("drive_e", c.params.drive_e);
  real("gamma_s", c.params.gamma_s);
  real("e_c", c.params.e_c);
  s += fmt::format("mode = {}\n", to_string(c.mode));
  real("t_max", c.t_max);
  real("dt", c.dt);
  s += fmt::format("sample_stride = {}\n", c.sample_stride);
  s += fmt::format("n_a = {}\nn_b = {}\n", c.fock.n_a, c.fock.n_b);
  real("truncation_tol", c.fock.truncation_tol);
  if (!c.output.empty()) s += fmt::format("output = {}\n", c.output);
  if (c.scenario) s += fmt::format("scenario = {}\n", *c.scenario);
  return s;
}

}  // namespace tcsim
