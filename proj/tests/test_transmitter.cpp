#include <complex>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pqkd/oracle.hpp"
#include "pqkd/transmitter.hpp"

using namespace pqkd;

TEST_CASE("wrap_angle reduces to (-pi, pi]") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(wrap_angle(-0.3) == doctest::Approx(-0.3).epsilon(1e-15));
  CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(wrap_angle(3.0 * M_PI) == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(wrap_angle(2.0 * M_PI) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(wrap_angle(-7.5 * M_PI) == doctest::Approx(0.5 * M_PI).epsilon(1e-14));
  for (double a : {0.1, 1.9, -2.7, 3.0}) {
    double w = wrap_angle(a + 8.0 * M_PI);
    CHECK(w == doctest::Approx(a).epsilon(1e-13));
  }
}

TEST_CASE("parameter validation") {
  TransmitterParams p;
  CHECK_NOTHROW(p.validate());
  p.nu_t = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.delta_theta = M_PI / 2;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.delta_phi = M_PI / 4;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.windows.v_hi = 0.02;  // above d_hi
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.windows.d_hi = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("known phase draw maps to the expected pulse") {
  TransmitterParams p;  // nu_t = 0.25
  // Both interferometers at full transmission, zero relative phase between
  // the arms: maximal intensity on the equator.
  PhaseDraw d{0.0, M_PI, 0.0, M_PI};
  OutputPulse out = output_from_phases(d, p);
  CHECK(!out.vacuum);
  CHECK(out.intensity == doctest::Approx(1.0).epsilon(1e-14));  // 4 nu_t
  CHECK(out.theta == doctest::Approx(M_PI / 2).epsilon(1e-14));
  CHECK(out.psi == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(out.phi == doctest::Approx(M_PI).epsilon(1e-14));
}

TEST_CASE("destructive interference in both arms gives vacuum") {
  TransmitterParams p;
  OutputPulse out = output_from_phases({1.3, 0.0, 0.7, 0.0}, p);
  CHECK(out.vacuum);
  CHECK(out.intensity == 0.0);
}

TEST_CASE("single dead arm pins theta to a pole") {
  TransmitterParams p;
  // top arm dark (delta1 = 0): only left-circular light, theta = pi
  OutputPulse out = output_from_phases({0.2, 0.0, 0.4, M_PI}, p);
  CHECK(!out.vacuum);
  CHECK(out.theta == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(out.intensity == doctest::Approx(2.0 * p.nu_t).epsilon(1e-14));
  // bottom arm dark: theta = 0
  out = output_from_phases({0.2, M_PI, 0.4, 0.0}, p);
  CHECK(out.theta == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("closed form tracks the explicit amplitude propagation") {
  TransmitterParams p;
  const double t = 0.5;
  const double nu = p.nu_t / t;
  SplitMix64 rng(411);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    PhaseDraw d{rng.uniform() * 2.0 * M_PI, rng.uniform() * 2.0 * M_PI,
                rng.uniform() * 2.0 * M_PI, rng.uniform() * 2.0 * M_PI};
    OutputPulse out = output_from_phases(d, p);
    ModeAmplitudes m = explicit_mode_simulation(d, nu, t);
    const double amp = std::sqrt(out.intensity);
    const std::complex<double> w_r = amp * std::cos(out.theta / 2) * std::polar(1.0, out.psi);
    const std::complex<double> w_l = amp * std::sin(out.theta / 2) * std::polar(1.0, out.psi + out.phi);
    worst = std::max(worst, std::abs(w_r - m.w.right));
    worst = std::max(worst, std::abs(w_l - m.w.left));
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("i_max bounds every emitted pulse and has the closed form") {
  TransmitterParams p;
  CHECK(i_max(M_PI / 2, p.nu_t) == doctest::Approx(4.0 * p.nu_t).epsilon(1e-14));
  for (double th : {0.3, 0.9, 1.4, 2.1, 2.8}) {
    const double c = std::cos(th / 2), s = std::sin(th / 2);
    const double expect = 2.0 * p.nu_t / std::max(c * c, s * s);
    CHECK(i_max(th, p.nu_t) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(i_max(th, p.nu_t) == doctest::Approx(i_max(M_PI - th, p.nu_t)).epsilon(1e-13));
  }
  SplitMix64 rng(77);
  for (int i = 0; i < 10000; ++i) {
    PhaseDraw d{0.0, rng.uniform() * 2.0 * M_PI, 0.0, rng.uniform() * 2.0 * M_PI};
    OutputPulse out = output_from_phases(d, p);
    if (out.vacuum) continue;
    CHECK(out.intensity <= i_max(out.theta, p.nu_t) * (1.0 + 1e-12));
  }
}

TEST_CASE("joint pdf domain, symmetry and positivity") {
  const double nu_t = 0.25;
  CHECK(joint_pdf(1.0, 0.1, nu_t) > 0.0);
  // theta -> pi - theta symmetry
  for (double th : {0.4, 1.0, 1.5}) {
    for (double frac : {0.1, 0.5, 0.9}) {
      const double i = frac * i_max(th, nu_t);
      CHECK(joint_pdf(th, i, nu_t) ==
            doctest::Approx(joint_pdf(M_PI - th, i, nu_t)).epsilon(1e-12));
    }
  }
  // out-of-domain points are rejected, not silently evaluated
  CHECK_THROWS_AS(joint_pdf(1.0, i_max(1.0, nu_t), nu_t), std::domain_error);
  CHECK_THROWS_AS(joint_pdf(1.0, -0.1, nu_t), std::domain_error);
  CHECK_THROWS_AS(joint_pdf(-0.1, 0.1, nu_t), std::domain_error);
  CHECK_THROWS_AS(joint_pdf(3.5, 0.1, nu_t), std::domain_error);
}

TEST_CASE("joint pdf diverges toward the intensity boundary") {
  const double nu_t = 0.25;
  const double hi = i_max(1.2, nu_t);
  CHECK(joint_pdf(1.2, hi * (1.0 - 1e-10), nu_t) > joint_pdf(1.2, hi * 0.5, nu_t) * 100.0);
}
