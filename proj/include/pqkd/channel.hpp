// Lossy-fiber channel and threshold-detector receiver: pointwise click and
// error probabilities, their region averages per intensity window, and the
// exact n-photon responses used by benchmarks and soundness tests.
//
// The receiver measures one polarization basis with two threshold detectors
// and assigns double clicks to a random bit. For a pulse of intensity I and
// Bloch component s along the measured axis the two detectors see coherent
// states of mean photon number I eta (1 +- s) / 2, so with dark-click
// probability p_d per detector
//   click(I)    = 1 - (1 - p_d)^2 e^{-I eta}
//   error(I, s) = click / 2 - (1 - p_d) e^{-I eta / 2} sinh(I eta s / 2).
// For an n-photon input each photon reaches a detector independently, hence
//   y_n      = 1 - (1 - p_d)^2 (1 - eta)^n
//   e_n(s)   = y_n / 2 + (1 - p_d) [(1 - eta q)^n - (1 - eta (1 - q))^n] / 2
// with q = (1 + s) / 2. A receiver misaligned by angle m rotates the
// measured axes, giving s = sin(theta) cos(phi - x - m) for a pulse accepted
// at azimuth label x.
#pragma once

#include "pqkd/regions.hpp"
#include "pqkd/transmitter.hpp"

namespace pqkd {

struct ChannelParams {
  double alpha_att_db_km = 0.2;  // fiber attenuation
  double eta_det = 0.65;         // detector efficiency
  double p_dark = 1e-6;          // dark-click probability per detector per pulse
  double misalignment = 0.0;     // receiver azimuth rotation, radians

  // Throws std::invalid_argument when out of range.
  void validate() const;
};

// Net transmittance at the given fiber length, detector efficiency included.
double channel_eta(const ChannelParams& ch, double distance_km);

// Pointwise detector response for a pulse of the stated intensity.
double click_probability(double intensity, double eta, double p_dark);
double error_click_probability(double intensity, double eta, double p_dark, double s);

// Exact n-photon response. The yield does not depend on the state.
double n_photon_yield(double eta, double p_dark, int n);
double n_photon_error_click(double eta, double p_dark, double s, int n);

// Unnormalized averages of the click and error-click probabilities over one
// azimuth label of the window, at a given net transmittance. The building
// block both window_observables and the rate engine divide by the window
// mass.
struct WindowChannelAverages {
  double click = 0.0;
  double error = 0.0;
};
WindowChannelAverages window_channel_averages(const TransmitterParams& params,
                                              const ChannelParams& ch, double eta, Window j,
                                              Basis basis, const QuadSpec& quad = {});

// Observables of one intensity window in one basis: the window probability
// (both azimuth labels), the gain Q_j and the error rate E_j, the latter two
// conditioned on the pulse falling in the window. QBER = error_rate / gain.
struct WindowObservables {
  double probability = 0.0;
  double gain = 0.0;
  double error_rate = 0.0;
};
WindowObservables window_observables(const TransmitterParams& params, const ChannelParams& ch,
                                     double distance_km, Window j, Basis basis,
                                     const QuadSpec& quad = {});

// Exact error-click probability of the n-photon component of window j,
// averaged over the window with the n-photon weight e^{-I} I^n / n!.
double n_photon_error(const TransmitterParams& params, const ChannelParams& ch,
                      double distance_km, Window j, Basis basis, int n,
                      const QuadSpec& quad = {});

}  // namespace pqkd
