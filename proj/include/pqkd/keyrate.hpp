// Asymptotic secret-key rate of the passively modulated transmitter, the
// idealized benchmarks it is compared against, and the deterministic
// parameter optimizer.
//
// Per basis M the key fraction is
//   K_M = 1/2 [ <e^{-I} I>_s y1 (1 - h(phase)) - f_ec <1>_s Q_s h(E_s/Q_s) ]
// clamped at zero, with averages over both azimuth labels of the basis'
// signal region, y1 the certified single-photon yield bound of that basis,
// and the phase error estimated from the opposite basis' bounds. The total
// is K_Z + K_X. The perfect-estimation benchmark replaces the certified
// bounds with the exact single-photon response; the active benchmark is an
// ideal actively modulated decoy source over the same channel, optimized
// over its mean photon number.
#pragma once

#include <array>
#include <map>
#include <tuple>
#include <vector>

#include "pqkd/channel.hpp"
#include "pqkd/decoy.hpp"
#include "pqkd/distance.hpp"
#include "pqkd/fock.hpp"
#include "pqkd/regions.hpp"

namespace pqkd {

// Shannon binary entropy in bits. Accepts [0, 1]; throws std::domain_error
// outside.
double binary_entropy(double p);

struct KeyRateConfig {
  TransmitterParams transmitter;
  ChannelParams channel;
  double f_ec = 1.16;  // error-correction inefficiency
  int n_cut = 3;       // photon-number cutoff of the estimation programs
  QuadSpec quad;

  void validate() const;
};

// Distance-independent geometry of one window at a single azimuth label.
struct WindowGeometry {
  double one = 0.0;                 // <1>
  double single_mass = 0.0;         // <e^{-I} I>
  std::vector<double> photon_mass;  // <e^{-I} I^n / n!>, n = 0..n_cut
  FockMoments moments;
};

// Everything about the transmitter the rate needs that does not depend on
// the channel: one fused integration pass per window plus the bias tables.
struct TransmitterTables {
  TransmitterParams params;
  int n_cut = 0;
  std::array<WindowGeometry, 3> window;  // indexed by Window
  BiasBounds bias;
};
TransmitterTables build_transmitter_tables(const TransmitterParams& params, int n_cut,
                                           const QuadSpec& quad = {});

// Per-basis quantities at one distance. Masses are over the union of the
// basis' two azimuth labels; gain and error rate condition on the signal
// window.
struct BasisRates {
  Basis basis = Basis::Z;
  double window_prob = 0.0;  // <1> of the signal region
  double single_mass = 0.0;  // <e^{-I} I> of the signal region
  double gain = 0.0;         // Q_s
  double error_rate = 0.0;   // E_s
  double qber = 0.0;         // E_s / Q_s
  double y1_low = 0.0;       // certified bounds of this basis' windows
  double e1_up = 0.0;
  double y1_true = 0.0;      // exact single-photon response
  double e1_true = 0.0;
  double phase_error = 0.0;  // from the opposite basis' bounds, capped at 1/2
  double rate = 0.0;          // K_M
  double rate_perfect = 0.0;  // K_M with exact single-photon knowledge
};

struct KeyRatePoint {
  double distance_km = 0.0;
  TransmitterParams params;
  double key_rate = 0.0;          // K_Z + K_X
  double key_rate_perfect = 0.0;  // same with exact single-photon response
  double key_rate_active = 0.0;   // active-source benchmark
  BasisRates z;
  BasisRates x;
};

// Full evaluation at one distance: both bases computed along their own
// integration paths (their agreement is a symmetry check in the tests),
// plus the two benchmarks unless disabled.
KeyRatePoint evaluate_point(const KeyRateConfig& cfg, double distance_km,
                            bool benchmarks = true);

// Objective used by the optimizer: 2 K_Z from precomputed tables, exploiting
// the Z/X symmetry so the search costs one basis.
double passive_rate(const TransmitterTables& tables, const ChannelParams& ch, double distance_km,
                    double f_ec, const QuadSpec& quad);

// Rate of an ideal actively modulated decoy-state source over the same
// channel, maximized over its signal intensity.
double active_baseline_rate(const ChannelParams& ch, double distance_km, double f_ec);

// Deterministic optimizer over (nu_t, delta_theta, delta_phi): coarse grid
// followed by a fixed budget of Nelder-Mead refinement evaluations, both at
// reduced quadrature; the best evaluated point wins.
struct OptimizeOptions {
  std::array<double, 2> nu_t_range{0.05, 0.6};
  std::array<double, 2> delta_theta_range{0.1, 1.4};
  std::array<double, 2> delta_phi_range{0.05, 0.75};
  int grid_per_axis = 8;
  int refine_evals = 200;
  QuadSpec search_quad{24, 24, 32};
};

// Memoizes transmitter tables across optimizer calls; grid geometries are
// distance independent, so a multi-distance scan reuses them.
class GeometryCache {
 public:
  const TransmitterTables& get(const TransmitterParams& params, int n_cut, const QuadSpec& quad);
  size_t size() const { return entries_.size(); }

 private:
  // Geometry is determined by the searched parameters, the window bounds,
  // the cutoff and the quadrature resolution.
  using Key = std::tuple<double, double, double, double, double, int, int, int, int>;
  std::map<Key, TransmitterTables> entries_;
};

struct OptimizedPoint {
  TransmitterParams params;
  double search_rate = 0.0;  // objective at search resolution
};
OptimizedPoint optimize_parameters(const KeyRateConfig& cfg, double distance_km,
                                   const OptimizeOptions& opts = {},
                                   GeometryCache* cache = nullptr);

}  // namespace pqkd
