#include "pqkd/transmitter.hpp"

#include <cmath>

namespace pqkd {

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a > M_PI) a -= 2.0 * M_PI;
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

OutputPulse output_from_phases(const PhaseDraw& draw, const TransmitterParams& params) {
  params.validate();
  const double s1 = std::sin(0.5 * draw.delta1);
  const double s3 = std::sin(0.5 * draw.delta3);
  OutputPulse out;
  out.intensity = 2.0 * params.nu_t * (s1 * s1 + s3 * s3);
  out.psi = wrap_angle(draw.alpha + 0.5 * (draw.delta1 - M_PI));
  if (out.intensity == 0.0) {
    out.vacuum = true;
    return out;
  }
  out.theta = 2.0 * std::atan2(std::abs(s3), std::abs(s1));
  out.phi = wrap_angle(draw.delta2 + 0.5 * (draw.delta1 + draw.delta3));
  return out;
}

double i_max(double theta, double nu_t) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const double m = std::max(c * c, s * s);
  return 2.0 * nu_t / m;
}

double joint_pdf(double theta, double intensity, double nu_t) {
  if (!(nu_t > 0.0)) throw std::invalid_argument("joint_pdf: nu_t must be > 0");
  if (!(theta >= 0.0 && theta <= M_PI)) throw std::domain_error("joint_pdf: theta outside [0, pi]");
  if (!(intensity >= 0.0) || intensity >= i_max(theta, nu_t))
    throw std::domain_error("joint_pdf: intensity outside [0, i_max(theta))");
  const double scale = 2.0 * nu_t;
  const double c2 = std::cos(0.5 * theta) * std::cos(0.5 * theta);
  const double s2 = std::sin(0.5 * theta) * std::sin(0.5 * theta);
  // Each factor is the relative distance to that arm's intensity ceiling.
  // Forming it as 1 - (I / scale) c2 rounds to zero a few ulp before the
  // ceiling, turning an in-domain evaluation into a division by zero; the
  // difference against the ceiling itself stays positive whenever the domain
  // check above passed.
  const double fc = c2 > 0.0 ? (scale / c2 - intensity) * (c2 / scale) : 1.0;
  const double fs = s2 > 0.0 ? (scale / s2 - intensity) * (s2 / scale) : 1.0;
  return 1.0 / (scale * M_PI * M_PI * std::sqrt(fc) * std::sqrt(fs));
}

}  // namespace pqkd
