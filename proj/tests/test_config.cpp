#include <doctest.h>

#include "tcsim/config.hpp"

using namespace tcsim;

TEST_SUITE("config") {

TEST_CASE("empty document gives the defaults") {
  const RunConfig c = parse_config("");
  CHECK(c == RunConfig{});
  CHECK(c.params.drive_e == 0.1);
  CHECK(c.params.gamma_s == 0.005);
  CHECK(c.params.omega_a == 1.0);
  CHECK(c.params.omega_b == 1.0);
  CHECK(c.params.g == 1.0);
  CHECK(c.params.e_c == 0.0);
  CHECK(c.t_max == 50.0);
  CHECK(c.dt == 1e-3);
  CHECK(c.sample_stride == 100);
  CHECK(c.fock.n_a == 12);
  CHECK(c.fock.n_b == 12);
  CHECK(c.fock.truncation_tol == 1e-6);
  CHECK(c.mode == DynamicsMode::Derived);
  CHECK(c.output.empty());
  CHECK_FALSE(c.scenario.has_value());
}

TEST_CASE("overrides") {
  const RunConfig c = parse_config("g = 1.3\nomega_a = 1.5");
  RunConfig expected;
  expected.params.g = 1.3;
  expected.params.omega_a = 1.5;
  CHECK(c == expected);
}

TEST_CASE("comments, blank lines and repeated keys") {
  const RunConfig c = parse_config(
      "# a comment\n\n  mode = paper   # trailing\r\ng=0.5\ng = 0.7\nn_a = 6\noutput = run.csv\n"
      "scenario = fig2\n");
  CHECK(c.mode == DynamicsMode::PaperLiteral);
  CHECK(c.params.g == 0.7);
  CHECK(c.fock.n_a == 6);
  CHECK(c.output == "run.csv");
  CHECK(c.scenario == "fig2");
}

TEST_CASE("errors") {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("gg = 1").find("'gg'") != std::string::npos);
  CHECK(message("g = 1\nomega_a = fast").find("line 2") != std::string::npos);
  CHECK(message("dt = 1e-3x").find("line 1") != std::string::npos);
  CHECK(message("g = nan").find("line 1") != std::string::npos);
  CHECK(message("g = inf").find("line 1") != std::string::npos);
  CHECK(message("n_a = 2.5").find("line 1") != std::string::npos);
  CHECK(message("mode = quantum").find("quantum") != std::string::npos);
  CHECK(message("just text").find("line 1") != std::string::npos);
  CHECK(message("g =").find("line 1") != std::string::npos);
}

TEST_CASE("render round trip") {
  CHECK(parse_config(render_config(RunConfig{})) == RunConfig{});
  RunConfig c;
  c.params = {0.1 + 0.2, -1.0 / 3.0, 1e-300, 12345.678901234567, 0.0, 0.2};
  c.mode = DynamicsMode::Oracle;
  c.t_max = 20.0;
  c.dt = 5e-3;
  c.sample_stride = 7;
  c.fock = {9, 5, 3e-7};
  c.output = "out/x.csv";
  c.scenario = "fig3a";
  CHECK(parse_config(render_config(c)) == c);
}

}
