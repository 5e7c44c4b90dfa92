#include <cmath>
#include <complex>

#include "doctest.h"
#include "pqkd/fock.hpp"
#include "test_support.hpp"

using namespace pqkd;

namespace {
const std::array<double, 4> kLabels = {0.0, M_PI, M_PI / 2, -M_PI / 2};

double binom(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
  return v;
}
}  // namespace

TEST_CASE("every post-selected matrix is a density matrix") {
  TransmitterParams p;
  for (Window j : kWindows)
    for (double x : kLabels)
      for (int n = 0; n <= 3; ++n) {
        HermMatrix m = build_fock_matrix(p, j, x, n);
        REQUIRE(m.dim() == n + 1);
        CHECK(m.hermiticity_error() <= 1e-12);
        CHECK(std::abs(m.trace().real() - 1.0) <= 1e-10);
        CHECK(std::abs(m.trace().imag()) <= 1e-12);
        auto ev = hermitian_eigenvalues(m);
        CHECK(ev.front() >= -1e-12);
      }
}

TEST_CASE("the vacuum component is the scalar 1") {
  TransmitterParams p;
  for (Window j : kWindows) {
    HermMatrix m = build_fock_matrix(p, j, 0.0, 0);
    REQUIRE(m.dim() == 1);
    CHECK(m.at(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.at(0, 0).imag() == 0.0);
  }
}

TEST_CASE("single-photon signal eigenvalues are 1/2 +- Delta_s") {
  for (TransmitterParams p : {TransmitterParams{}, TransmitterParams{0.25, 0.8, 0.35, {}}}) {
    const double ds = delta_s(p);
    CHECK(ds > 0.0);
    CHECK(ds < 0.5);
    for (double x : kLabels) {
      HermMatrix m = build_fock_matrix(p, Window::signal, x, 1);
      auto ev = hermitian_eigenvalues(m);
      REQUIRE(ev.size() == 2);
      CHECK(std::abs(ev[0] - (0.5 - ds)) <= 1e-10);
      CHECK(std::abs(ev[1] - (0.5 + ds)) <= 1e-10);
    }
  }
}

TEST_CASE("Delta_s reference value and limits") {
  CHECK(delta_s({0.25, 0.8, 0.35, {}}) == doctest::Approx(ref::kDeltaSWide).epsilon(1e-9));
  // a point region on the equator is a pure state: Delta_s -> 1/2
  CHECK(delta_s({0.25, 1e-4, 1e-5, {}}) == doctest::Approx(0.5).epsilon(1e-6));
  // at finite azimuthal width only the smearing prefactor survives
  CHECK(delta_s({0.25, 1e-4, M_PI / 4 - 1e-9, {}}) ==
        doctest::Approx(std::sin(M_PI / 4) / (M_PI / 2)).epsilon(1e-6));
}

TEST_CASE("azimuth label enters only through phases") {
  TransmitterParams p;
  FockMoments mom = fock_moments(p, Window::signal, 3);
  for (int n = 1; n <= 3; ++n) {
    HermMatrix base = fock_from_moments(mom, p.delta_phi, n, 0.0);
    for (double x : {M_PI, M_PI / 2, -M_PI / 2}) {
      HermMatrix rot = fock_from_moments(mom, p.delta_phi, n, x);
      for (int k = 0; k <= n; ++k)
        for (int l = 0; l <= n; ++l) {
          cplx want = base.at(k, l) * std::polar(1.0, (k - l) * x);
          CHECK(std::abs(rot.at(k, l) - want) <= 1e-12);
        }
      // same spectrum for every label
      auto ev0 = hermitian_eigenvalues(base);
      auto evx = hermitian_eigenvalues(rot);
      for (size_t i = 0; i < ev0.size(); ++i) CHECK(std::abs(ev0[i] - evx[i]) <= 1e-12);
    }
  }
}

TEST_CASE("moment tables agree with the photon number distribution") {
  // Row n of the moment table sums (with binomial weights on the diagonal
  // entries) to the n-photon mass of the window; dividing by the window mass
  // must reproduce p_{n|j} from the entirely separate distribution code.
  TransmitterParams p;
  for (Window j : kWindows) {
    FockMoments mom = fock_moments(p, j, 3);
    REQUIRE(mom.n_cut == 3);
    AcceptanceRegion reg{p, j, 0.0};
    const double one = region_probability(reg);
    const auto& want = ref::photon_dist(j);
    for (int n = 0; n <= 3; ++n) {
      REQUIRE(mom.t[static_cast<size_t>(n)].size() == static_cast<size_t>(2 * n + 1));
      double mass = 0.0;
      for (int k = 0; k <= n; ++k)
        mass += binom(n, k) * mom.t[static_cast<size_t>(n)][static_cast<size_t>(2 * k)];
      mass *= p.delta_phi / M_PI;
      CHECK(mass / one == doctest::Approx(want[static_cast<size_t>(n)]).epsilon(1e-9));
    }
  }
}

TEST_CASE("basis averaging kills the single-photon coherences") {
  TransmitterParams p;
  for (Window j : kWindows)
    for (Basis b : {Basis::Z, Basis::X}) {
      HermMatrix m = basis_averaged(p, j, 1, b);
      CHECK(std::abs(m.at(0, 0).real() - 0.5) <= 1e-12);
      CHECK(std::abs(m.at(1, 1).real() - 0.5) <= 1e-12);
      CHECK(std::abs(m.at(0, 1)) <= 1e-12);
    }
}

TEST_CASE("basis averages are states and the two bases are phase twins") {
  TransmitterParams p;
  for (Window j : kWindows)
    for (int n = 2; n <= 3; ++n) {
      HermMatrix z = basis_averaged(p, j, n, Basis::Z);
      HermMatrix x = basis_averaged(p, j, n, Basis::X);
      CHECK(z.hermiticity_error() <= 1e-12);
      CHECK(std::abs(z.trace().real() - 1.0) <= 1e-10);
      CHECK(hermitian_eigenvalues(z).front() >= -1e-12);
      // sigma^X = R sigma^Z R^dagger with R = diag(e^{-ik pi/2})
      for (int k = 0; k <= n; ++k)
        for (int l = 0; l <= n; ++l) {
          cplx want = z.at(k, l) * std::polar(1.0, -(k - l) * M_PI / 2);
          CHECK(std::abs(x.at(k, l) - want) <= 1e-12);
        }
    }
}

TEST_CASE("basis average equals the mean of its two label states") {
  TransmitterParams p;
  for (int n = 1; n <= 3; ++n) {
    HermMatrix z = basis_averaged(p, Window::signal, n, Basis::Z);
    HermMatrix a = build_fock_matrix(p, Window::signal, 0.0, n);
    HermMatrix b = build_fock_matrix(p, Window::signal, M_PI, n);
    for (int k = 0; k <= n; ++k)
      for (int l = 0; l <= n; ++l)
        CHECK(std::abs(z.at(k, l) - 0.5 * (a.at(k, l) + b.at(k, l))) <= 1e-13);
  }
}

TEST_CASE("point-region limit gives the pure equator state") {
  TransmitterParams tiny{0.25, 1e-4, 1e-5, {}};
  HermMatrix m = build_fock_matrix(tiny, Window::signal, 0.0, 1);
  CHECK(m.at(0, 0).real() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(m.at(1, 1).real() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(m.at(0, 1).real() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::abs(m.at(0, 1).imag()) <= 1e-8);
  auto ev = hermitian_eigenvalues(m);
  CHECK(ev[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
  CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-6));
  // the same limit averaged over a basis is maximally mixed
  HermMatrix mixed = basis_averaged(tiny, Window::signal, 1, Basis::Z);
  CHECK(mixed.at(0, 0).real() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(mixed.at(0, 1)) <= 1e-9);
}
