#include "pqkd/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace pqkd {

namespace {

// Bloch component along the measured axis for a receiver rotated by m. The
// Z and X expressions are kept as separate code paths on purpose: their
// agreement (after shifting phi by the label spacing pi/2) is one of the
// symmetry checks in the tests.
double bloch_component(Basis basis, double phi, double theta, double m) {
  const double r = std::sin(theta);
  return basis == Basis::Z ? r * std::cos(phi - m) : r * std::sin(phi - m);
}

}  // namespace

void ChannelParams::validate() const {
  if (!(alpha_att_db_km >= 0.0)) throw std::invalid_argument("channel: attenuation must be >= 0");
  if (!(eta_det > 0.0) || !(eta_det <= 1.0))
    throw std::invalid_argument("channel: detector efficiency must be in (0, 1]");
  if (!(p_dark >= 0.0) || !(p_dark < 1.0))
    throw std::invalid_argument("channel: dark-click probability must be in [0, 1)");
  if (!std::isfinite(misalignment)) throw std::invalid_argument("channel: misalignment not finite");
}

double channel_eta(const ChannelParams& ch, double distance_km) {
  if (!(distance_km >= 0.0)) throw std::invalid_argument("channel: distance must be >= 0");
  return ch.eta_det * std::pow(10.0, -ch.alpha_att_db_km * distance_km / 10.0);
}

double click_probability(double intensity, double eta, double p_dark) {
  // 1 - (1-p_d)^2 e^{-z} evaluated through expm1 so the small-z limit keeps
  // full precision down to the dark-count floor.
  const double em1 = std::expm1(-intensity * eta);
  const double c = p_dark * (2.0 - p_dark);
  return -em1 + c * (1.0 + em1);
}

double error_click_probability(double intensity, double eta, double p_dark, double s) {
  const double z = intensity * eta;
  return 0.5 * click_probability(intensity, eta, p_dark) -
         (1.0 - p_dark) * std::exp(-0.5 * z) * std::sinh(0.5 * z * s);
}

double n_photon_yield(double eta, double p_dark, int n) {
  if (n < 0) throw std::invalid_argument("n_photon_yield: negative photon number");
  const double miss = (1.0 - p_dark) * std::pow(1.0 - eta, n);
  return 1.0 - (1.0 - p_dark) * miss;
}

double n_photon_error_click(double eta, double p_dark, double s, int n) {
  const double q = 0.5 * (1.0 + s);
  const double skew = std::pow(1.0 - eta * q, n) - std::pow(1.0 - eta * (1.0 - q), n);
  return 0.5 * n_photon_yield(eta, p_dark, n) + 0.5 * (1.0 - p_dark) * skew;
}

WindowChannelAverages window_channel_averages(const TransmitterParams& params,
                                              const ChannelParams& ch, double eta, Window j,
                                              Basis basis, const QuadSpec& quad) {
  const AcceptanceRegion region{params, j, basis_x_labels(basis)[0]};

  // Click probability has no azimuthal dependence and comes from the
  // factored (theta, I) pass; the error average needs the azimuth.
  auto flat = [eta, p_dark = ch.p_dark](double, double intensity, std::span<double> out) {
    out[0] = click_probability(intensity, eta, p_dark);
  };
  auto err = [&](double phi, double theta, double intensity, std::span<double> out) {
    const double s = bloch_component(basis, phi, theta, ch.misalignment);
    out[0] = error_click_probability(intensity, eta, ch.p_dark, s);
  };
  WindowChannelAverages avg;
  avg.click = region_average_many(region, ThetaIEval(flat), 1, quad)[0];
  avg.error = region_average_many(region, PhiThetaIEval(err), 1, quad)[0];
  return avg;
}

WindowObservables window_observables(const TransmitterParams& params, const ChannelParams& ch,
                                     double distance_km, Window j, Basis basis,
                                     const QuadSpec& quad) {
  params.validate();
  ch.validate();
  const double eta = channel_eta(ch, distance_km);
  const AcceptanceRegion region{params, j, basis_x_labels(basis)[0]};
  const double one = region_probability(region, quad);
  if (!(one > 0.0)) throw std::runtime_error("window_observables: empty window");
  const auto avg = window_channel_averages(params, ch, eta, j, basis, quad);

  WindowObservables obs;
  obs.probability = 2.0 * one;
  obs.gain = avg.click / one;
  obs.error_rate = avg.error / one;
  return obs;
}

double n_photon_error(const TransmitterParams& params, const ChannelParams& ch,
                      double distance_km, Window j, Basis basis, int n, const QuadSpec& quad) {
  if (n < 0) throw std::invalid_argument("n_photon_error: negative photon number");
  const double eta = channel_eta(ch, distance_km);
  const AcceptanceRegion region{params, j, basis_x_labels(basis)[0]};
  double inv_fact = 1.0;
  for (int i = 2; i <= n; ++i) inv_fact /= i;

  auto eval = [&, inv_fact](double phi, double theta, double intensity, std::span<double> out) {
    double w = std::exp(-intensity) * inv_fact;
    for (int i = 0; i < n; ++i) w *= intensity;
    const double s = bloch_component(basis, phi, theta, ch.misalignment);
    out[0] = w;
    out[1] = w * n_photon_error_click(eta, ch.p_dark, s, n);
  };
  const auto vals = region_average_many(region, PhiThetaIEval(eval), 2, quad);
  if (!(vals[0] > 0.0)) throw std::runtime_error("n_photon_error: vanishing photon mass");
  return vals[1] / vals[0];
}

}  // namespace pqkd
