// Acceptance regions in (phi, theta, I) space and the weighted-integral
// engine used by every downstream module.
//
// A region is the rectangle phi in (x - dphi, x + dphi), theta in
// (pi/2 - dtheta, pi/2 + dtheta), I in one of three consecutive intensity
// windows. Averages <g>_Omega denote the unnormalized integral of
// g * f_{phi,theta,I} over the region.
//
// Integration strategy: the (theta, I) integral is pulled back to the phase
// coordinates (delta1, delta3) in [0, pi]^2 where the density is the flat
// constant 1/pi^2 and the boundary divergence of the (theta, I) density
// disappears. In u = sin^2(delta1/2), w = sin^2(delta3/2) the region is the
// intersection of a wedge t_lo^2 u < w < t_hi^2 u (polar cut) and a band
// y_lo < u + w < y_hi (intensity window) inside the unit square, so the inner
// delta3 interval is exact and the outer delta1 axis splits into smooth
// pieces at constraint-switch breakpoints. Each piece is integrated with
// Gauss-Legendre after a cosine substitution that absorbs the sqrt-type
// endpoint behavior, giving spectral convergence. The phi integral factors
// out exactly for phi-independent integrands and otherwise uses a
// Gauss-Legendre rule on (x - dphi, x + dphi).
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pqkd/quadrature.hpp"
#include "pqkd/transmitter.hpp"

namespace pqkd {

enum class Window { signal = 0, decoy = 1, vacuum = 2 };
enum class Basis { Z = 0, X = 1 };

inline constexpr std::array<Window, 3> kWindows = {Window::signal, Window::decoy, Window::vacuum};
inline const char* window_name(Window w) {
  switch (w) {
    case Window::signal: return "signal";
    case Window::decoy: return "decoy";
    default: return "vacuum";
  }
}

// The two azimuth labels forming a basis region: Z unions x = 0 and x = pi,
// X unions x = pi/2 and x = -pi/2.
std::array<double, 2> basis_x_labels(Basis m);

// Intensity window in units y = I / (2 nu_t), so y spans (0, 2).
struct YWindow {
  double lo = 0.0;
  double hi = 2.0;
};
YWindow window_y_bounds(const IntensityWindows& w, Window j);

// One acceptance region at a single azimuth label x.
struct AcceptanceRegion {
  TransmitterParams params;
  Window window = Window::signal;
  double x_center = 0.0;  // one of 0, pi, pi/2, -pi/2
};

// Batched integrand over the (theta, I) part: fills out[0..m) at (theta, I).
using ThetaIEval = std::function<void(double theta, double intensity, std::span<double> out)>;
// Batched integrand with azimuthal dependence.
using PhiThetaIEval =
    std::function<void(double phi, double theta, double intensity, std::span<double> out)>;

// Integral over the (theta, I) part of the window's region (polar cut dtheta,
// intensity window [y_lo, y_hi] in y units) of each component of eval against
// the joint (theta, I) density. This is the engine all region averages
// reduce to; the azimuthal factor is not included.
std::vector<double> integrate_theta_i(const TransmitterParams& params, double y_lo, double y_hi,
                                      ThetaIEval eval, int m, const QuadSpec& quad = {});

// Unnormalized region averages <g>_Omega for a batch of integrands.
std::vector<double> region_average_many(const AcceptanceRegion& region, ThetaIEval eval, int m,
                                        const QuadSpec& quad = {});
std::vector<double> region_average_many(const AcceptanceRegion& region, PhiThetaIEval eval, int m,
                                        const QuadSpec& quad = {});

// Single-integrand conveniences.
double region_average(const AcceptanceRegion& region, const std::function<double(double, double)>& g,
                      const QuadSpec& quad = {});
double region_average(const AcceptanceRegion& region,
                      const std::function<double(double, double, double)>& g,
                      const QuadSpec& quad = {});

// <1>_Omega of one region, or of the basis union (sum over its two x labels,
// which are equal by azimuthal symmetry).
double region_probability(const AcceptanceRegion& region, const QuadSpec& quad = {});
double region_probability(const TransmitterParams& params, Window j, Basis m,
                          const QuadSpec& quad = {});

// Photon-number distribution of the post-selected pulse in window j:
// p_{n|j} = <e^{-I} I^n / n!>_Omega / <1>_Omega, independent of the azimuth
// label. tail = 1 - sum of the listed entries.
struct PhotonStats {
  Window window = Window::signal;
  std::vector<double> p;  // p[n], n = 0..n_cut
  double tail = 0.0;
};
PhotonStats photon_number_dist(const TransmitterParams& params, Window j, int n_cut,
                               const QuadSpec& quad = {});

}  // namespace pqkd
