#include "pqkd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pqkd/quadrature.hpp"

namespace pqkd {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr size_t kShard = 1u << 16;

// Standardized deviation of a binomial count.
double z_score(size_t count, size_t n, double p) {
  const double mean = static_cast<double>(n) * p;
  const double var = mean * (1.0 - p);
  return (static_cast<double>(count) - mean) / std::sqrt(var);
}

// Largest intensity in y = I / (2 nu_t) units compatible with theta.
double y_max(double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  return 1.0 / std::max(c * c, s * s);
}

// Density of (theta, y): the closed-form joint density with the intensity
// rescaled, azimuth integrated out.
double theta_y_density(double theta, double y) {
  const double c2 = std::cos(0.5 * theta) * std::cos(0.5 * theta);
  const double s2 = 1.0 - c2;
  return 1.0 / (M_PI * M_PI * std::sqrt((1.0 - y * c2) * (1.0 - y * s2)));
}

}  // namespace

uint64_t mix64(uint64_t v) {
  v += 0x9E3779B97F4A7C15ull;
  v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ull;
  v = (v ^ (v >> 27)) * 0x94D049BB133111EBull;
  return v ^ (v >> 31);
}

uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ull;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

ModeAmplitudes explicit_mode_simulation(const PhaseDraw& draw, double nu, double t) {
  if (!(nu > 0.0) || !(t > 0.0) || !(t <= 1.0))
    throw std::invalid_argument("mode simulation: need nu > 0 and t in (0, 1]");
  const double amp = std::sqrt(nu);
  const double beta = draw.alpha + draw.delta1;
  const double gamma = beta + draw.delta2;
  const double delta = gamma + draw.delta3;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  ModeAmplitudes m;
  m.a.right = std::polar(amp, draw.alpha);
  m.b.right = std::polar(amp, beta);
  m.c.right = (m.a.right - m.b.right) * inv_sqrt2;
  m.d.right = (m.a.right + m.b.right) * inv_sqrt2;
  // Bottom arm: same interferometer on the left-circular pair (gamma, delta);
  // only its kept output is a named mode.
  m.r.left = (std::polar(amp, gamma) - std::polar(amp, delta)) * inv_sqrt2;
  m.v.right = m.c.right;
  m.v.left = m.r.left;
  m.w.right = std::sqrt(t) * m.v.right;
  m.w.left = std::sqrt(t) * m.v.left;
  m.y.right = std::sqrt(1.0 - t) * m.v.right;
  m.y.left = std::sqrt(1.0 - t) * m.v.left;
  return m;
}

double pdf_normalization(double nu_t) {
  if (!(nu_t > 0.0)) throw std::invalid_argument("pdf_normalization: nu_t must be > 0");
  // Inner integral over I up to the theta-dependent maximum (inverse-sqrt
  // singular there); outer integral over theta, split at pi/2 where the
  // inner value has a log singularity. The azimuth contributes exactly 1.
  auto inner = [nu_t](double theta) {
    const double hi = i_max(theta, nu_t);
    return tanh_sinh([&](double i) { return joint_pdf(theta, i, nu_t); }, 0.0, hi, 1e-10);
  };
  const double left = tanh_sinh(inner, 0.0, 0.5 * M_PI, 1e-9);
  const double right = tanh_sinh(inner, 0.5 * M_PI, M_PI, 1e-9);
  return (left + right) * kTwoPi * kAzimuthalDensity;
}

PdfCheckReport pdf_histogram_check(const TransmitterParams& params, size_t n_samples, int bins,
                                   uint64_t seed) {
  params.validate();
  if (n_samples < 100000) throw std::invalid_argument("pdf check: need at least 1e5 samples");
  if (bins < 4) throw std::invalid_argument("pdf check: need at least 4 bins per axis");

  const double dt = M_PI / bins;
  const double dy = 2.0 / bins;
  std::vector<size_t> counts(static_cast<size_t>(bins) * bins, 0);
  std::vector<double> phis;
  phis.reserve(n_samples);
  bool support_ok = true;

  size_t done = 0;
  size_t shard = 0;
  while (done < n_samples) {
    SplitMix64 rng(mix64(seed + shard++));
    const size_t todo = std::min(kShard, n_samples - done);
    for (size_t i = 0; i < todo; ++i) {
      PhaseDraw draw;
      draw.alpha = kTwoPi * rng.uniform();
      draw.delta1 = kTwoPi * rng.uniform();
      draw.delta2 = kTwoPi * rng.uniform();
      draw.delta3 = kTwoPi * rng.uniform();
      const OutputPulse pulse = output_from_phases(draw, params);
      if (pulse.vacuum) continue;
      phis.push_back(pulse.phi);
      const double y = pulse.intensity / (2.0 * params.nu_t);
      if (y > y_max(pulse.theta) + 1e-12) support_ok = false;
      const auto ti = std::min<size_t>(static_cast<size_t>(pulse.theta / dt),
                                       static_cast<size_t>(bins) - 1);
      const auto yi = std::min<size_t>(static_cast<size_t>(y / dy),
                                       static_cast<size_t>(bins) - 1);
      ++counts[ti * static_cast<size_t>(bins) + yi];
    }
    done += todo;
  }

  // Interior cells: a full empty cell between the bin and the divergent
  // upper boundary, evaluated at the worse theta edge of the cell.
  const GaussLegendre gl = gauss_legendre(16);
  PdfCheckReport report;
  report.seed = seed;
  report.samples = n_samples;
  report.bins = bins;
  report.support_ok = support_ok;
  for (int ti = 0; ti < bins; ++ti) {
    const double t0 = ti * dt;
    const double t1 = t0 + dt;
    const double edge = std::min(y_max(t0), y_max(t1));
    for (int yi = 0; yi < bins; ++yi) {
      const double y1 = (yi + 1) * dy;
      if (y1 + dy > edge) continue;
      double cell = 0.0;
      for (size_t qa = 0; qa < gl.nodes.size(); ++qa) {
        const double theta = 0.5 * (t0 + t1) + 0.5 * dt * gl.nodes[qa];
        double inner = 0.0;
        for (size_t qb = 0; qb < gl.nodes.size(); ++qb) {
          const double y = y1 - dy + 0.5 * dy * (1.0 + gl.nodes[qb]);
          inner += gl.weights[qb] * theta_y_density(theta, y);
        }
        cell += gl.weights[qa] * inner;
      }
      cell *= 0.25 * dt * dy;
      const size_t count = counts[static_cast<size_t>(ti) * bins + static_cast<size_t>(yi)];
      const double z = std::abs(z_score(count, n_samples, cell));
      report.max_abs_z = std::max(report.max_abs_z, z);
      ++report.interior_cells;
    }
  }

  std::sort(phis.begin(), phis.end());
  double ks = 0.0;
  const double n = static_cast<double>(phis.size());
  for (size_t i = 0; i < phis.size(); ++i) {
    const double f = (phis[i] + M_PI) / kTwoPi;
    ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - f));
  }
  report.ks_phi = ks * std::sqrt(n);
  report.pass = report.support_ok && report.max_abs_z < 5.0 && report.ks_phi < 1.6276;
  return report;
}

McObservables end_to_end_mc(const TransmitterParams& params, const ChannelParams& ch,
                            double distance_km, Basis basis, size_t n_samples, uint64_t seed) {
  params.validate();
  ch.validate();
  const double eta = channel_eta(ch, distance_km);
  const auto labels = basis_x_labels(basis);
  const double y_vac = 2.0 * params.windows.v_hi;
  const double y_dec = 2.0 * params.windows.d_hi;

  McObservables out;
  out.seed = seed;
  out.samples = n_samples;
  out.basis = basis;

  size_t done = 0;
  size_t shard = 0;
  while (done < n_samples) {
    SplitMix64 rng(mix64(seed + shard++));
    const size_t todo = std::min(kShard, n_samples - done);
    for (size_t i = 0; i < todo; ++i) {
      PhaseDraw draw;
      draw.alpha = kTwoPi * rng.uniform();
      draw.delta1 = kTwoPi * rng.uniform();
      draw.delta2 = kTwoPi * rng.uniform();
      draw.delta3 = kTwoPi * rng.uniform();
      const OutputPulse pulse = output_from_phases(draw, params);
      if (pulse.vacuum) continue;
      if (std::abs(pulse.theta - 0.5 * M_PI) >= params.delta_theta) continue;

      double label = 0.0;
      bool matched = false;
      for (double x : labels) {
        if (std::abs(wrap_angle(pulse.phi - x)) < params.delta_phi) {
          label = x;
          matched = true;
          break;
        }
      }
      if (!matched) continue;

      const double y = pulse.intensity / (2.0 * params.nu_t);
      const Window w = y < y_vac ? Window::vacuum : (y < y_dec ? Window::decoy : Window::signal);
      auto& acc = out.window[static_cast<size_t>(static_cast<int>(w))];
      ++acc.accepted;

      const double s =
          std::sin(pulse.theta) * std::cos(pulse.phi - label - ch.misalignment);
      const double mu = pulse.intensity * eta;
      const double p_correct = 1.0 - (1.0 - ch.p_dark) * std::exp(-mu * 0.5 * (1.0 + s));
      const double p_wrong = 1.0 - (1.0 - ch.p_dark) * std::exp(-mu * 0.5 * (1.0 - s));
      const bool click_c = rng.uniform() < p_correct;
      const bool click_w = rng.uniform() < p_wrong;
      if (click_c || click_w) {
        ++acc.clicks;
        if (click_w && (!click_c || rng.uniform() < 0.5)) ++acc.errors;
      }
    }
    done += todo;
  }

  for (auto& w : out.window) {
    if (w.accepted == 0) continue;
    const double n = static_cast<double>(w.accepted);
    w.probability = n / static_cast<double>(n_samples);
    w.gain = static_cast<double>(w.clicks) / n;
    w.gain_se = std::sqrt(std::max(w.gain * (1.0 - w.gain), 1e-300) / n);
    w.error_rate = static_cast<double>(w.errors) / n;
    w.error_se = std::sqrt(std::max(w.error_rate * (1.0 - w.error_rate), 1e-300) / n);
  }
  return out;
}

}  // namespace pqkd
