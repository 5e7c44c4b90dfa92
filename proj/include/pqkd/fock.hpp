// Post-selected n-photon density matrices of the transmitter output, their
// basis-averaged mixtures, and the single-photon off-diagonal magnitude
// Delta_s of the signal window.
//
// Matrices are expressed in the orthonormal photon-number basis
// {|n-k right-circular, k left-circular>, k = 0..n}. Entry (k, l) of the
// unnormalized matrix for azimuth label x is
//   sqrt(C(n,k) C(n,l)) * PhiFac_{k-l} * e^{i(k-l)x}
//     * <cos^{2n-(k+l)}(theta/2) sin^{k+l}(theta/2) e^{-I} I^n / n!>
// with PhiFac_0 = dphi/pi and PhiFac_d = sin(d*dphi)/(d*pi); the average is
// the (theta, I) region integral of the window. The matrix is normalized by
// its trace. x enters only through the phases, so every label and every
// basis mixture is assembled from one set of theta moments per window.
#pragma once

#include <vector>

#include "pqkd/linalg.hpp"
#include "pqkd/regions.hpp"

namespace pqkd {

// t[n][m] = <cos^{2n-m}(theta/2) sin^m(theta/2) e^{-I} I^n / n!> over the
// window's region, m = 0..2n, for every n up to n_cut. One fused pass.
struct FockMoments {
  int n_cut = 0;
  std::vector<std::vector<double>> t;
};
FockMoments fock_moments(const TransmitterParams& params, Window j, int n_cut,
                         const QuadSpec& quad = {});

// Normalized n-photon matrix at azimuth label x, assembled from a moment
// table (no further integration).
HermMatrix fock_from_moments(const FockMoments& moments, double delta_phi, int n, double x);

// Normalized density matrix of the n-photon component post-selected in
// window j at azimuth label x.
HermMatrix build_fock_matrix(const TransmitterParams& params, Window j, double x, int n,
                             const QuadSpec& quad = {});

// Basis-averaged state: mean of the matrices at the two x labels of the
// basis (one integration pass, two assemblies).
HermMatrix basis_averaged(const TransmitterParams& params, Window j, int n, Basis basis,
                          const QuadSpec& quad = {});

// Off-diagonal magnitude of the single-photon signal-window state:
//   Delta_s = [sin(dphi) / (2 dphi)] * <sin(theta) e^{-I} I> / <e^{-I} I>
// over the signal region; the eigenvalues of that state are 1/2 +- Delta_s.
double delta_s(const TransmitterParams& params, const QuadSpec& quad = {});

}  // namespace pqkd
