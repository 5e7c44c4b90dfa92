// Independent Monte-Carlo and quadrature oracles: explicit linear-optics
// amplitude propagation, a nested-integration check of the output density,
// histogram and KS tests of sampled pulses against that density, and an
// end-to-end stochastic detector simulation. Analytic modules never call
// into this code; it exists to validate them.
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "pqkd/channel.hpp"
#include "pqkd/regions.hpp"
#include "pqkd/transmitter.hpp"

namespace pqkd {

// splitmix64: tiny, seedable, identical output on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}
  uint64_t next();
  double uniform();  // [0, 1)

 private:
  uint64_t state_;
};

// Stateless finalizer used to derive independent per-shard seeds.
uint64_t mix64(uint64_t v);

// Right- and left-circular coherent amplitudes of one spatial mode.
struct ModePair {
  std::complex<double> right{};
  std::complex<double> left{};
};

// Amplitudes at every named mode of the transmitter: the two top-arm inputs
// (a, b), the top-arm outputs (c kept, d discarded), the bottom-arm output
// r, the combined mode v, and the attenuator outputs (w to the channel, y to
// the local monitor).
struct ModeAmplitudes {
  ModePair a, b, c, d, r, v, w, y;
};

// Propagates the four laser amplitudes sqrt(nu) e^{i phase} through the
// 50:50 splitters (a -> (c + d)/sqrt(2), b -> (d - c)/sqrt(2)), the
// polarizing combiner and the transmittance-t tap, by plain matrix algebra
// on coherent amplitudes.
ModeAmplitudes explicit_mode_simulation(const PhaseDraw& draw, double nu, double t);

// Integral of the closed-form (phi, theta, I) density over its whole domain
// via nested adaptive quadrature; equals 1 when the density is correct.
double pdf_normalization(double nu_t);

struct PdfCheckReport {
  uint64_t seed = 0;
  size_t samples = 0;
  int bins = 0;
  int interior_cells = 0;
  double max_abs_z = 0.0;   // worst standardized deviation over interior cells
  double ks_phi = 0.0;      // sqrt(N)-scaled KS statistic of the phi marginal
  bool support_ok = false;  // no sample above i_max(theta)
  bool pass = false;
};

// Samples phase draws, bins (theta, I / 2 nu_t) on a bins x bins grid and
// compares interior cells (one full cell away from the divergent upper
// boundary) against the cell-integrated closed-form density; also runs a KS
// test of the phi marginal against the uniform law. Passing thresholds:
// |z| < 5 everywhere and KS below the 1 percent critical value 1.6276.
PdfCheckReport pdf_histogram_check(const TransmitterParams& params, size_t n_samples, int bins,
                                   uint64_t seed);

struct McWindow {
  size_t accepted = 0;
  size_t clicks = 0;
  size_t errors = 0;
  double probability = 0.0;  // accepted / samples
  double gain = 0.0;         // clicks / accepted
  double gain_se = 0.0;
  double error_rate = 0.0;   // errors / accepted
  double error_se = 0.0;
};

struct McObservables {
  uint64_t seed = 0;
  size_t samples = 0;
  Basis basis = Basis::Z;
  std::array<McWindow, 3> window;  // indexed by Window
};

// Full stochastic pipeline: sample a pulse, post-select it into a window and
// azimuth label of the basis, then sample detector clicks (independent
// Poisson arms plus dark counts, double clicks assigned to a random bit).
// Sharded internally with per-shard seeds; the reduction is order
// independent.
McObservables end_to_end_mc(const TransmitterParams& params, const ChannelParams& ch,
                            double distance_km, Basis basis, size_t n_samples, uint64_t seed);

}  // namespace pqkd
