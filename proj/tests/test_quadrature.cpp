#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pqkd/quadrature.hpp"

using pqkd::gauss_legendre;
using pqkd::tanh_sinh;

static double gl_integrate(int n, double (*f)(double)) {
  auto rule = gauss_legendre(n);
  double s = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(rule.nodes[i]);
  return s;
}

TEST_CASE("gauss-legendre rule structure") {
  for (int n : {2, 3, 8, 16, 48, 64}) {
    auto rule = gauss_legendre(n);
    REQUIRE(rule.nodes.size() == static_cast<size_t>(n));
    REQUIRE(rule.weights.size() == static_cast<size_t>(n));
    double wsum = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
      CHECK(rule.nodes[i] > -1.0);
      CHECK(rule.nodes[i] < 1.0);
      if (i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
      CHECK(rule.weights[i] > 0.0);
      // symmetric rule
      CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[rule.nodes.size() - 1 - i]).epsilon(1e-14));
      wsum += rule.weights[i];
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("gauss-legendre exactness up to degree 2n - 1") {
  // n-point rule integrates monomials x^k, k <= 2n - 1, exactly on [-1, 1].
  for (int n : {2, 4, 7}) {
    auto rule = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (size_t i = 0; i < rule.nodes.size(); ++i)
        s += rule.weights[i] * std::pow(rule.nodes[i], k);
      const double exact = (k % 2) ? 0.0 : 2.0 / (k + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
    // and the next even power is not exact
    double s = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
      s += rule.weights[i] * std::pow(rule.nodes[i], 2 * n);
    CHECK(std::abs(s - 2.0 / (2 * n + 1)) > 1e-8);
  }
}

TEST_CASE("gauss-legendre caching returns stable spans") {
  auto a = gauss_legendre(48);
  auto b = gauss_legendre(48);
  CHECK(a.nodes.data() == b.nodes.data());
  CHECK(a.weights.data() == b.weights.data());
}

TEST_CASE("tanh-sinh on smooth integrands") {
  CHECK(tanh_sinh([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(tanh_sinh([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(tanh_sinh([](double x) { return std::exp(x); }, -1.0, 2.0) ==
        doctest::Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("tanh-sinh absorbs integrable endpoint singularities") {
  CHECK(tanh_sinh([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(tanh_sinh([](double x) { return std::log(x); }, 0.0, 1.0) ==
        doctest::Approx(-1.0).epsilon(1e-10));
  // singular at the right endpoint; evaluating 1 - x there costs a couple of
  // digits to cancellation, so the gate is looser than for the left endpoint
  CHECK(tanh_sinh([](double x) { return 1.0 / std::sqrt(1.0 - x); }, 0.0, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("tanh-sinh never evaluates at the endpoints") {
  // The region integrands blow up (or throw) at the boundary; the rule must
  // keep its abscissas strictly inside even when offsets underflow.
  auto f = [](double x) {
    if (!(x > 0.0 && x < 1.0)) throw std::runtime_error("endpoint touched");
    return 1.0 / std::sqrt(x);
  };
  CHECK(tanh_sinh(f, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("tanh-sinh rejects empty intervals") {
  CHECK_THROWS_AS(tanh_sinh([](double) { return 1.0; }, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(tanh_sinh([](double) { return 1.0; }, 2.0, 1.0), std::invalid_argument);
}
