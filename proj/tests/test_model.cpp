#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "tcsim/model.hpp"
#include "tcsim/moments.hpp"
#include "tcsim/sweep.hpp"

using namespace tcsim;

namespace {

CircuitParams sample_circuit() {
  CircuitParams c;
  c.omega_r = 6.0;
  c.omega_q = 6.0;
  c.omega_0 = 5.0;
  c.c_ratio = 0.1;
  c.ej_over_ec = 50.0;
  c.z_r = 50.0;
  c.r_k = 25812.8;
  c.power = 1e-15;
  c.hbar = 1.0546e-34;
  return c;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("system params validation") {
  SystemParams p;
  CHECK_NOTHROW(p.validate());
  p.gamma_s = -1e-3;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.g = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.omega_a = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.omega_a = -3.0;  // negative detuning is allowed
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("detunings") {
  CircuitParams c = sample_circuit();
  Detunings d = detunings(c);
  CHECK(d.omega_a == 1.0);
  CHECK(d.omega_b == 1.0);

  c.omega_r = 5.0;
  CHECK(detunings(c).omega_a == 0.0);

  c.omega_r = 6.5;
  d = detunings(c);
  CHECK(d.omega_a == 1.5);
  CHECK(d.omega_b == 1.0);
}

TEST_CASE("coupling from circuit") {
  CircuitParams c = sample_circuit();
  c.omega_r = 1.0;
  CHECK(coupling_from_circuit(c) == doctest::Approx(0.017443249085236485).epsilon(1e-14));

  const double g = coupling_from_circuit(c);
  c.c_ratio = 0.2;
  CHECK(coupling_from_circuit(c) == doctest::Approx(2.0 * g).epsilon(1e-14));

  c = sample_circuit();
  c.c_ratio = 0.0;
  CHECK_THROWS_AS(coupling_from_circuit(c), std::invalid_argument);
  c = sample_circuit();
  c.z_r = -1.0;
  CHECK_THROWS_AS(coupling_from_circuit(c), std::invalid_argument);
  c = sample_circuit();
  c.r_k = 0.0;
  CHECK_THROWS_AS(coupling_from_circuit(c), std::invalid_argument);
  c = sample_circuit();
  c.ej_over_ec = 0.5;
  CHECK_THROWS_AS(coupling_from_circuit(c), std::invalid_argument);
}

TEST_CASE("coupling is monotone in c_ratio, ej_over_ec and z_r") {
  const CircuitParams base = sample_circuit();
  for (double f : {1.1, 2.0, 7.5}) {
    CircuitParams c = base;
    c.c_ratio *= f;
    CHECK(coupling_from_circuit(c) > coupling_from_circuit(base));
    c = base;
    c.ej_over_ec *= f;
    CHECK(coupling_from_circuit(c) > coupling_from_circuit(base));
    c = base;
    c.z_r *= f;
    CHECK(coupling_from_circuit(c) > coupling_from_circuit(base));
  }
}

TEST_CASE("drive from power") {
  CircuitParams c = sample_circuit();
  c.omega_0 = 2.0 * std::numbers::pi * 5.46e6;
  // sqrt(2e-15 / (1.0546e-34 * 3.4306e7))
  CHECK(drive_from_power(c) == doctest::Approx(743506.6526586366).epsilon(1e-12));

  const double e = drive_from_power(c);
  c.power *= 4.0;
  CHECK(drive_from_power(c) == doctest::Approx(2.0 * e).epsilon(1e-14));

  c.power = c.hbar * c.omega_0 / 2.0;
  CHECK(drive_from_power(c) == doctest::Approx(1.0).epsilon(1e-14));

  c.power = 0.0;
  CHECK_THROWS_AS(drive_from_power(c), std::invalid_argument);
}

TEST_CASE("circuit and dimensionless construction give the same trajectory") {
  for (const Scenario& s : scenario_catalog(3)) {
    CAPTURE(s.name);
    const SystemParams direct = s.params_at(s.point_count() - 1);
    CHECK_NOTHROW(direct.validate());

    CircuitParams c = sample_circuit();
    c.omega_0 = 10.0;
    c.omega_r = c.omega_0 + direct.omega_a;
    c.omega_q = c.omega_0 + direct.omega_b;
    const Detunings d = detunings(c);
    SystemParams via = direct;
    via.omega_a = d.omega_a;
    via.omega_b = d.omega_b;
    CHECK(via == direct);

    TrajectoryOptions opt;
    opt.t_max = 5.0;
    const Trajectory t1 = trajectory(direct, MatrixMode::Derived, opt);
    const Trajectory t2 = trajectory(via, MatrixMode::Derived, opt);
    REQUIRE(t1.samples.size() == t2.samples.size());
    for (std::size_t i = 0; i < t1.samples.size(); ++i) CHECK(t1.samples[i].f == t2.samples[i].f);
  }
}

}
