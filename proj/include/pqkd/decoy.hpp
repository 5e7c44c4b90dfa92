// Single-photon estimation from the three intensity windows.
//
// Unlike an actively modulated source, the windows here share correlated
// photon-number statistics only up to the trace-distance bias bounds, so the
// usual decoy linear programs carry one yield variable per (window, photon
// number) pair tied together by those bounds:
//
//   minimize y_{s,1}   (resp. maximize eps_{s,1})
//   subject to, for each window j:
//     Q_j >= sum_n p_{n|j} y_{j,n}
//     Q_j <= sum_n p_{n|j} y_{j,n} + 1 - sum_n p_{n|j}
//     |y_{j,n} - y_{k,n}| <= delta_{j,k,n}
//     0 <= y_{j,n} <= 1
// with the same structure for the error variables against E_j and the
// deltat table. The bounds are valid for any channel, which the soundness
// tests check against the exact n-photon response.
#pragma once

#include <array>
#include <vector>

#include "pqkd/channel.hpp"
#include "pqkd/distance.hpp"
#include "pqkd/regions.hpp"

namespace pqkd {

// Inputs of the two programs. Arrays are indexed by Window; photon_prob[j]
// holds p_{n|j} for n = 0..n_cut.
struct DecoyProblem {
  int n_cut = 3;
  std::array<double, 3> gain{};
  std::array<double, 3> error_rate{};
  std::array<std::vector<double>, 3> photon_prob;
  BiasBounds bias;

  // Throws std::invalid_argument on inconsistent sizes or values outside
  // [0, 1].
  void validate() const;
};

// Assembles the problem from the transmitter geometry and the channel
// observables at one distance.
DecoyProblem build_decoy_problem(const TransmitterParams& params, const ChannelParams& ch,
                                 double distance_km, Basis basis, int n_cut,
                                 const QuadSpec& quad = {});

// Certified bounds on the single-photon component of the signal window:
// y1_low <= y_{s,1} and e1_up >= eps_{s,1} (error-click probability, not the
// conditional error rate).
struct DecoyBounds {
  double y1_low = 0.0;
  double e1_up = 1.0;
};
DecoyBounds estimate_single_photon(const DecoyProblem& problem);

}  // namespace pqkd
