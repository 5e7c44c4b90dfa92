// Quadrature primitives: cached Gauss-Legendre rules and a tanh-sinh
// integrator for 1D integrals with integrable endpoint singularities.
#pragma once

#include <functional>
#include <span>

namespace pqkd {

// Nodes/weights of the n-point Gauss-Legendre rule on [-1, 1].
// Computed once per n and cached; references stay valid for the
// lifetime of the process.
struct GaussLegendre {
  std::span<const double> nodes;
  std::span<const double> weights;
};
GaussLegendre gauss_legendre(int n);

// Resolution of the region-integration engine.
struct QuadSpec {
  int outer_nodes = 48;  // delta1 nodes per smooth piece
  int inner_nodes = 48;  // delta3 nodes per outer node
  int phi_nodes = 64;    // azimuthal nodes for phi-dependent integrands

  QuadSpec halved() const { return {outer_nodes / 2, inner_nodes / 2, phi_nodes / 2}; }
  QuadSpec doubled() const { return {outer_nodes * 2, inner_nodes * 2, phi_nodes * 2}; }
};

// Integrates f over [a, b] with the tanh-sinh rule. Tolerates integrable
// endpoint singularities (1/sqrt, log). Nodes are placed symmetrically by
// their exact distance from each endpoint, so f sees accurate abscissas
// arbitrarily close to a and b. Deterministic; refines until the result is
// stable to rel_tol or max_level is reached.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, int max_level = 10);

}  // namespace pqkd
