#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "tcsim/commands.hpp"

using namespace tcsim;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string c; std::getline(in, c, ',');) out.push_back(c);
  return out;
}

std::size_t column(const std::string& header, const std::string& name) {
  const auto cols = split(header);
  return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), name) - cols.begin());
}

}  // namespace

TEST_SUITE("commands") {

TEST_CASE("csv number format round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) CHECK(std::stod(csv_real(v)) == v);
  CHECK(csv_real(0.5) == "0.5");
}

TEST_CASE("simulate defaults") {
  RunConfig cfg;
  cfg.t_max = 1.0;
  std::ostringstream out;
  CHECK(cmd_simulate(cfg, out) == 0);
  const auto l = lines(out.str());
  REQUIRE(l.size() == 12);
  CHECK(l[0].rfind("t,re_a,im_a,re_ad,im_ad,re_b,im_b", 0) == 0);
  CHECK(l[0].find(",re_bbd,im_bbd,en,herm_viol,comm_viol,physical") != std::string::npos);
  CHECK(split(l[0]).size() == 1 + 32 + 4);
  const auto first = split(l[1]);
  CHECK(first[0] == "0");
  CHECK(first[column(l[0], "re_a")] == "0");
  CHECK(first[column(l[0], "en")] == "0");
  CHECK(out.str().find('\r') == std::string::npos);
}

TEST_CASE("simulate derived fig1b is flat") {
  RunConfig cfg;
  std::ostringstream out;
  CHECK(cmd_simulate(cfg, out) == 0);
  const auto l = lines(out.str());
  REQUIRE(l.size() == 502);
  const std::size_t en = column(l[0], "en");
  for (std::size_t i = 1; i < l.size(); ++i) CHECK(std::stod(split(l[i])[en]) <= 1e-9);
}

TEST_CASE("simulate divergence exits nonzero with an error line") {
  RunConfig cfg;
  cfg.mode = DynamicsMode::PaperLiteral;
  cfg.params.drive_e = 1e7;
  std::ostringstream out;
  CHECK(cmd_simulate(cfg, out) != 0);
  const auto l = lines(out.str());
  REQUIRE(l.size() >= 2);
  CHECK(l.back().rfind("# error: ", 0) == 0);
  CHECK(l[1].rfind("0,", 0) == 0);  // partial rows kept
}

TEST_CASE("simulate rejects a bad step") {
  RunConfig cfg;
  cfg.dt = 0.3;
  std::ostringstream out;
  CHECK(cmd_simulate(cfg, out) != 0);
  CHECK(lines(out.str()).back().rfind("# error: ", 0) == 0);
}

TEST_CASE("oracle csv") {
  RunConfig cfg;
  cfg.t_max = 2.0;
  cfg.fock = {8, 8, 1e-6};
  cfg.params.g = 0.5;
  std::ostringstream out;
  CHECK(cmd_oracle(cfg, out) == 0);
  const auto l = lines(out.str());
  REQUIRE(l.size() == 22);
  const std::size_t en = column(l[0], "en"), ex = column(l[0], "en_exact");
  CHECK(column(l[0], "pop_a_top") < split(l[0]).size());
  CHECK(column(l[0], "pop_b_top") < split(l[0]).size());
  for (std::size_t i = 1; i < l.size(); ++i) {
    const auto c = split(l[i]);
    CHECK(std::abs(std::stod(c[en]) - std::stod(c[ex])) <= 1e-4);
    CHECK(std::stod(c[ex]) <= 1e-4);
  }
}

TEST_CASE("oracle truncation failure") {
  RunConfig cfg;
  cfg.t_max = 5.0;
  cfg.fock = {2, 4, 1e-6};
  cfg.params.drive_e = 2.0;
  std::ostringstream out;
  CHECK(cmd_oracle(cfg, out) != 0);
  const std::string last = lines(out.str()).back();
  CHECK(last.rfind("# error: ", 0) == 0);
  CHECK(last.find("mode a") != std::string::npos);
  CHECK(last.find("t = ") != std::string::npos);
}

TEST_CASE("simulate with mode oracle runs the oracle") {
  RunConfig cfg;
  cfg.mode = DynamicsMode::Oracle;
  cfg.t_max = 0.5;
  cfg.fock = {6, 6, 1e-6};
  cfg.params.g = 0.2;
  std::ostringstream out;
  CHECK(cmd_simulate(cfg, out) == 0);
  CHECK(out.str().find("en_exact") != std::string::npos);
}

TEST_CASE("sweep csv") {
  std::ostringstream a, b;
  CHECK(cmd_sweep("fig1b", "derived", a, 5) == 0);
  CHECK(cmd_sweep("fig1b", "derived", b, 5, 1e-3, 2) == 0);
  CHECK(a.str() == b.str());
  const auto l = lines(a.str());
  REQUIRE(l.size() == 6);
  CHECK(l[0].rfind("g,max_en_trace,fluctuations,diverged,physical,max_violation,en_t0,en_t0.1,", 0) == 0);
  CHECK(l[0].substr(l[0].size() - 6) == ",error");
  const std::size_t cols = split(l[0]).size();
  for (std::size_t i = 1; i < l.size(); ++i) {
    CHECK(split(l[i] + "x").size() == cols);  // trailing empty error cell
    CHECK(std::stod(split(l[i])[1]) <= 1e-9);
  }
}

TEST_CASE("sweep grid contract") {
  std::ostringstream out;
  CHECK(cmd_sweep("fig2", "paper", out) == 0);
  const auto l = lines(out.str());
  CHECK(l.size() == 1601);
  CHECK(l[0] == "omega_a,g,en_at_t50,fluctuations,diverged,physical,max_violation,error");
}

TEST_CASE("sweep errors") {
  std::ostringstream out;
  CHECK(cmd_sweep("fig9", "derived", out) != 0);
  CHECK(out.str().rfind("# error: ", 0) == 0);
  CHECK(out.str().find("fig5") != std::string::npos);
  std::ostringstream out2;
  CHECK(cmd_sweep("fig1a", "classical", out2) != 0);
  CHECK(out2.str().rfind("# error: ", 0) == 0);
}

TEST_CASE("compare report") {
  std::ostringstream a, b;
  CHECK(cmd_compare(a) == 0);
  CHECK(cmd_compare(b) == 0);
  CHECK(a.str() == b.str());
  const auto l = lines(a.str());
  REQUIRE(l.size() == 7);
  int derived = 0;
  for (std::size_t i = 1; i < l.size(); ++i) {
    if (l[i].find(",derived,") == std::string::npos) continue;
    ++derived;
    const auto c = split(l[i]);
    // landmark,omega_a,g,"paper",mode,en_at_g,... (the quoted paper value may hold a comma)
    const std::size_t shift = c[3].back() == '"' ? 0 : 1;
    CHECK(std::stod(c[5 + shift]) <= 1e-9);
  }
  CHECK(derived == 3);
}

}
