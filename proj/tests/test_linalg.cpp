#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pqkd/linalg.hpp"
#include "pqkd/oracle.hpp"
#include "test_support.hpp"

using namespace pqkd;

TEST_CASE("dimension guard") {
  CHECK_THROWS_AS(HermMatrix(0), std::invalid_argument);
  CHECK_THROWS_AS(HermMatrix(17), std::invalid_argument);
  CHECK_NOTHROW(HermMatrix(1));
  CHECK_NOTHROW(HermMatrix(16));
}

TEST_CASE("known 2x2 spectra") {
  HermMatrix m(2);
  m.at(0, 0) = 1.0;
  m.at(1, 1) = 1.0;
  m.at(0, 1) = cplx(0.0, 1.0);
  m.at(1, 0) = cplx(0.0, -1.0);
  auto ev = hermitian_eigenvalues(m);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  CHECK(ev[1] == doctest::Approx(2.0).epsilon(1e-13));

  // diagonal matrix comes back sorted
  HermMatrix d(3);
  d.at(0, 0) = 5.0;
  d.at(1, 1) = -1.0;
  d.at(2, 2) = 2.0;
  auto dv = hermitian_eigenvalues(d);
  CHECK(dv[0] == doctest::Approx(-1.0));
  CHECK(dv[1] == doctest::Approx(2.0));
  CHECK(dv[2] == doctest::Approx(5.0));
}

TEST_CASE("eigenvalues reproduce trace and Frobenius norm") {
  SplitMix64 rng(5);
  for (int dim = 1; dim <= 6; ++dim) {
    for (int rep = 0; rep < 8; ++rep) {
      HermMatrix h = ref::random_hermitian(rng, dim);
      auto ev = hermitian_eigenvalues(h);
      REQUIRE(ev.size() == static_cast<size_t>(dim));
      double tr = 0.0, frob = 0.0;
      for (double v : ev) {
        tr += v;
        frob += v * v;
      }
      double frob_direct = 0.0;
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) frob_direct += std::norm(h.at(r, c));
      CHECK(tr == doctest::Approx(h.trace().real()).epsilon(1e-11).scale(1.0));
      CHECK(frob == doctest::Approx(frob_direct).epsilon(1e-11).scale(1.0));
      for (size_t i = 1; i < ev.size(); ++i) CHECK(ev[i] >= ev[i - 1]);
    }
  }
}

TEST_CASE("gram matrices are positive semidefinite") {
  SplitMix64 rng(9);
  for (int dim = 2; dim <= 5; ++dim) {
    HermMatrix rho = ref::random_density(rng, dim);
    auto ev = hermitian_eigenvalues(rho);
    CHECK(ev.front() >= -1e-12);
    double tr = 0.0;
    for (double v : ev) tr += v;
    CHECK(tr == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("hermiticity is measured and enforced") {
  HermMatrix h(2);
  h.at(0, 0) = 1.0;
  h.at(1, 1) = 1.0;
  h.at(0, 1) = 0.5;
  h.at(1, 0) = 0.5;
  CHECK(h.hermiticity_error() == 0.0);
  h.at(1, 0) = 0.5 + 1e-12;
  CHECK(h.hermiticity_error() == doctest::Approx(1e-12).epsilon(1e-3));
  CHECK_NOTHROW(hermitian_eigenvalues(h));  // symmetrized internally
  h.at(1, 0) = 0.7;
  CHECK_THROWS(hermitian_eigenvalues(h));
}

TEST_CASE("matrix arithmetic") {
  SplitMix64 rng(13);
  HermMatrix a = ref::random_hermitian(rng, 3);
  HermMatrix b = ref::random_hermitian(rng, 3);
  HermMatrix sum = a + b;
  HermMatrix diff = a - b;
  HermMatrix scaled = a;
  scaled *= 2.0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      CHECK(sum.at(r, c) == a.at(r, c) + b.at(r, c));
      CHECK(diff.at(r, c) == a.at(r, c) - b.at(r, c));
      CHECK(scaled.at(r, c) == 2.0 * a.at(r, c));
    }
}
