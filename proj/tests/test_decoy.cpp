#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pqkd/decoy.hpp"
#include "test_support.hpp"

using namespace pqkd;

namespace {
DecoyProblem problem_at(double km, int n_cut) {
  return build_decoy_problem(ref::default_params(), ref::default_channel(), km, Basis::Z, n_cut);
}
}  // namespace

TEST_CASE("assembled problem carries the window data") {
  DecoyProblem pr = problem_at(0.0, 3);
  CHECK_NOTHROW(pr.validate());
  CHECK(pr.gain[0] == doctest::Approx(ref::kQs0).epsilon(1e-9));
  CHECK(pr.gain[1] == doctest::Approx(ref::kQd0).epsilon(1e-9));
  CHECK(pr.gain[2] == doctest::Approx(ref::kQv0).epsilon(1e-9));
  CHECK(pr.error_rate[0] == doctest::Approx(ref::kEs0).epsilon(1e-9));
  for (int j = 0; j < 3; ++j) {
    REQUIRE(pr.photon_prob[static_cast<size_t>(j)].size() == 4);
    const auto& want = ref::photon_dist(static_cast<Window>(j));
    for (int n = 0; n <= 3; ++n)
      CHECK(pr.photon_prob[static_cast<size_t>(j)][static_cast<size_t>(n)] ==
            doctest::Approx(want[static_cast<size_t>(n)]).epsilon(1e-9));
  }
  CHECK(pr.bias.n_cut == 3);
}

TEST_CASE("problem validation rejects corrupt inputs") {
  DecoyProblem pr = problem_at(0.0, 3);
  DecoyProblem bad = pr;
  bad.gain[0] = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = pr;
  bad.photon_prob[1].resize(2);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = pr;
  bad.photon_prob[0][0] = 1.2;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = pr;
  bad.photon_prob[2] = {0.7, 0.2, 0.2, 0.1};  // sums past 1
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = pr;
  bad.bias.n_cut = 1;  // table too short for the truncation
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = pr;
  bad.n_cut = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("reference bounds at 0 and 50 km") {
  DecoyBounds b0 = estimate_single_photon(problem_at(0.0, 3));
  CHECK(b0.y1_low == doctest::Approx(ref::kY1Low0).epsilon(1e-6));
  CHECK(b0.e1_up == doctest::Approx(ref::kE1Up0).epsilon(1e-6));
  DecoyBounds b50 = estimate_single_photon(problem_at(50.0, 3));
  CHECK(b50.y1_low == doctest::Approx(ref::kY1Low50).epsilon(1e-6));
  CHECK(b50.e1_up == doctest::Approx(ref::kE1Up50).epsilon(1e-6));
}

TEST_CASE("bounds bracket the exact channel response") {
  TransmitterParams p = ref::default_params();
  ChannelParams ch = ref::default_channel();
  for (double km : {0.0, 50.0}) {
    DecoyProblem pr = problem_at(km, 3);
    DecoyBounds b = estimate_single_photon(pr);
    const double eta = channel_eta(ch, km);

    // the exact yields and error clicks satisfy every program row
    for (int j = 0; j < 3; ++j) {
      const Window w = static_cast<Window>(j);
      double gain_rest = pr.gain[static_cast<size_t>(j)];
      double err_rest = pr.error_rate[static_cast<size_t>(j)];
      double tail = 1.0;
      for (int n = 0; n <= 3; ++n) {
        const double pn = pr.photon_prob[static_cast<size_t>(j)][static_cast<size_t>(n)];
        gain_rest -= pn * n_photon_yield(eta, ch.p_dark, n);
        err_rest -= pn * n_photon_error(p, ch, km, w, Basis::Z, n);
        tail -= pn;
      }
      CHECK(gain_rest >= -1e-9);
      CHECK(gain_rest <= tail + 1e-9);
      CHECK(err_rest >= -1e-9);
      CHECK(err_rest <= tail + 1e-9);
    }
    // and the bias rows hold for the exact error clicks
    for (int n = 0; n <= 3; ++n) {
      const double es = n_photon_error(p, ch, km, Window::signal, Basis::Z, n);
      const double ed = n_photon_error(p, ch, km, Window::decoy, Basis::Z, n);
      const double ev = n_photon_error(p, ch, km, Window::vacuum, Basis::Z, n);
      CHECK(std::abs(es - ed) <= pr.bias.deltat[0][static_cast<size_t>(n)] + 1e-9);
      CHECK(std::abs(es - ev) <= pr.bias.deltat[1][static_cast<size_t>(n)] + 1e-9);
      CHECK(std::abs(ed - ev) <= pr.bias.deltat[2][static_cast<size_t>(n)] + 1e-9);
    }
    // so the certified bounds must bracket the exact single-photon response
    CHECK(b.y1_low <= n_photon_yield(eta, ch.p_dark, 1) + 1e-9);
    CHECK(b.e1_up >= n_photon_error(p, ch, km, Window::signal, Basis::Z, 1) - 1e-9);
  }
}

TEST_CASE("simplex agrees with the exhaustive lattice at n_cut 1") {
  for (double km : {0.0, 50.0}) {
    DecoyProblem pr = problem_at(km, 1);
    DecoyBounds lp = estimate_single_photon(pr);
    const double y_grid = ref::lattice_y1_min(pr);
    const double e_grid = ref::lattice_e1_max(pr);
    REQUIRE(std::isfinite(y_grid));
    REQUIRE(std::isfinite(e_grid));
    CHECK(std::abs(lp.y1_low - y_grid) <= 2e-3);
    CHECK(std::abs(lp.e1_up - e_grid) <= 2e-3);
    // the lattice can only overshoot a minimum and undershoot a maximum
    CHECK(y_grid >= lp.y1_low - 1e-9);
    CHECK(e_grid <= lp.e1_up + 1e-9);
  }
}

TEST_CASE("looser bias tables can only weaken the bounds") {
  DecoyProblem pr = problem_at(25.0, 3);
  DecoyBounds tight = estimate_single_photon(pr);
  DecoyProblem loose = pr;
  for (int pair = 0; pair < 3; ++pair)
    for (int n = 0; n <= 3; ++n) {
      loose.bias.delta[static_cast<size_t>(pair)][static_cast<size_t>(n)] =
          std::min(1.0, 2.0 * loose.bias.delta[static_cast<size_t>(pair)][static_cast<size_t>(n)]);
      loose.bias.deltat[static_cast<size_t>(pair)][static_cast<size_t>(n)] =
          std::min(1.0, 2.0 * loose.bias.deltat[static_cast<size_t>(pair)][static_cast<size_t>(n)]);
    }
  DecoyBounds weak = estimate_single_photon(loose);
  CHECK(weak.y1_low <= tight.y1_low + 1e-9);
  CHECK(weak.e1_up >= tight.e1_up - 1e-9);

  // with no cross-window information the yield bound collapses
  DecoyProblem blind = pr;
  for (int pair = 0; pair < 3; ++pair)
    for (int n = 0; n <= 3; ++n) {
      blind.bias.delta[static_cast<size_t>(pair)][static_cast<size_t>(n)] = 1.0;
      blind.bias.deltat[static_cast<size_t>(pair)][static_cast<size_t>(n)] = 1.0;
    }
  DecoyBounds none = estimate_single_photon(blind);
  CHECK(none.y1_low <= weak.y1_low + 1e-9);
  CHECK(none.y1_low < 0.5 * tight.y1_low);
}

TEST_CASE("a basis flip does not move the estimates") {
  DecoyProblem z = problem_at(50.0, 3);
  DecoyProblem x =
      build_decoy_problem(ref::default_params(), ref::default_channel(), 50.0, Basis::X, 3);
  DecoyBounds bz = estimate_single_photon(z);
  DecoyBounds bx = estimate_single_photon(x);
  CHECK(std::abs(bz.y1_low - bx.y1_low) <= 1e-8);
  CHECK(std::abs(bz.e1_up - bx.e1_up) <= 1e-8);
}
