// Closed-form physics of the passive polarization transmitter: the map from
// the four laser phases to the emitted pulse and the joint density of
// (phi, theta, I) over uniformly random phases.
//
// Geometry: the pulse polarization lives on the Bloch sphere with right/left
// circular states at the poles; theta is the polar angle, phi the azimuth,
// I the pulse intensity (mean photon number), psi a global phase.
#pragma once

#include <cmath>
#include <stdexcept>

namespace pqkd {

// Azimuthal density of the emitted pulse: phi is uniform on (-pi, pi].
inline constexpr double kAzimuthalDensity = 1.0 / (2.0 * M_PI);

// Intensity window boundaries as fractions of the maximum intensity 4*nu_t.
// Windows: vacuum (0, v_hi), decoy (v_hi, d_hi), signal (d_hi, 1), scaled by 4*nu_t.
struct IntensityWindows {
  double v_hi = 0.005;
  double d_hi = 0.010;

  void validate() const {
    if (!(0.0 < v_hi && v_hi < d_hi && d_hi < 1.0))
      throw std::invalid_argument("IntensityWindows: need 0 < v_hi < d_hi < 1");
  }
};

struct TransmitterParams {
  double nu_t = 0.25;       // product of source intensity nu and attenuator transmittance t
  double delta_theta = 0.5; // polar half-width of the acceptance regions, in (0, pi/2)
  double delta_phi = 0.2;   // azimuthal half-width, in (0, pi/4) so the four regions stay disjoint
  IntensityWindows windows;

  void validate() const {
    if (!(nu_t > 0.0)) throw std::invalid_argument("TransmitterParams: nu_t must be > 0");
    if (!(delta_theta > 0.0 && delta_theta < M_PI / 2))
      throw std::invalid_argument("TransmitterParams: delta_theta must be in (0, pi/2)");
    if (!(delta_phi > 0.0 && delta_phi < M_PI / 4))
      throw std::invalid_argument("TransmitterParams: delta_phi must be in (0, pi/4)");
    windows.validate();
  }
};

// One draw of the four interferometer phases, each uniform on [0, 2pi).
// delta1 = beta - alpha, delta2 = gamma - beta, delta3 = delta - gamma
// in terms of the raw laser phases (alpha, beta, gamma, delta).
struct PhaseDraw {
  double alpha = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
};

// Emitted pulse. When both interferometer arms interfere destructively the
// pulse is vacuum and its polarization is undefined; downstream region logic
// treats such pulses as rejected.
struct OutputPulse {
  double intensity = 0.0;  // I in [0, 4 nu_t]
  double psi = 0.0;        // global phase, reduced to (-pi, pi]
  double theta = 0.0;      // polar angle in [0, pi]; meaningless if vacuum
  double phi = 0.0;        // azimuth in (-pi, pi]; meaningless if vacuum
  bool vacuum = false;     // I == 0, polarization undefined
};

// Reduces an angle to (-pi, pi].
double wrap_angle(double a);

// Closed-form output of the transmitter for one phase draw.
OutputPulse output_from_phases(const PhaseDraw& draw, const TransmitterParams& params);

// Largest intensity compatible with polar angle theta.
double i_max(double theta, double nu_t);

// Joint density of (theta, I) over uniform phase draws; the azimuthal part
// is the independent constant kAzimuthalDensity. Diverges (integrably) as
// I approaches i_max(theta), which is excluded from the domain.
double joint_pdf(double theta, double intensity, double nu_t);

}  // namespace pqkd
