#include "pqkd/fock.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace pqkd {

namespace {

constexpr int kMaxPhotons = 15;

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

FockMoments fock_moments(const TransmitterParams& params, Window j, int n_cut,
                         const QuadSpec& quad) {
  if (n_cut < 0 || n_cut > kMaxPhotons)
    throw std::invalid_argument("fock_moments: bad photon cutoff");
  const YWindow y = window_y_bounds(params.windows, j);
  // Rows packed back to back: row n starts at n^2 and holds 2n + 1 entries.
  auto eval = [n_cut](double theta, double intensity, std::span<double> out) {
    std::array<double, 2 * kMaxPhotons + 1> cp, sp;
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    cp[0] = sp[0] = 1.0;
    for (int i = 1; i <= 2 * n_cut; ++i) {
      cp[i] = cp[i - 1] * c;
      sp[i] = sp[i - 1] * s;
    }
    double w = std::exp(-intensity);  // e^{-I} I^n / n!, built up in n
    for (int n = 0; n <= n_cut; ++n) {
      if (n > 0) w *= intensity / n;
      double* row = out.data() + n * n;
      for (int m = 0; m <= 2 * n; ++m) row[m] = cp[2 * n - m] * sp[m] * w;
    }
  };
  const auto flat =
      integrate_theta_i(params, y.lo, y.hi, eval, (n_cut + 1) * (n_cut + 1), quad);
  FockMoments moments;
  moments.n_cut = n_cut;
  moments.t.resize(static_cast<size_t>(n_cut) + 1);
  for (int n = 0; n <= n_cut; ++n)
    moments.t[static_cast<size_t>(n)].assign(flat.begin() + n * n,
                                             flat.begin() + (n + 1) * (n + 1));
  return moments;
}

HermMatrix fock_from_moments(const FockMoments& moments, double delta_phi, int n, double x) {
  if (n < 0 || n > moments.n_cut)
    throw std::invalid_argument("fock_from_moments: photon number outside table");
  const auto& T = moments.t[static_cast<size_t>(n)];
  HermMatrix m(n + 1);
  for (int k = 0; k <= n; ++k) m.at(k, k) = binom(n, k) * (delta_phi / M_PI) * T[2 * k];
  for (int k = 1; k <= n; ++k) {
    for (int l = 0; l < k; ++l) {
      const int d = k - l;
      const double mag = std::sqrt(binom(n, k) * binom(n, l)) *
                         (std::sin(d * delta_phi) / (d * M_PI)) * T[k + l];
      const cplx phase = std::polar(1.0, d * x);
      m.at(k, l) = mag * phase;
      m.at(l, k) = mag * std::conj(phase);
    }
  }
  const double tr = m.trace().real();
  if (!(tr > 1e-300)) throw std::runtime_error("fock_from_moments: window has zero weight");
  m *= 1.0 / tr;
  return m;
}

HermMatrix build_fock_matrix(const TransmitterParams& params, Window j, double x, int n,
                             const QuadSpec& quad) {
  return fock_from_moments(fock_moments(params, j, n, quad), params.delta_phi, n, x);
}

HermMatrix basis_averaged(const TransmitterParams& params, Window j, int n, Basis basis,
                          const QuadSpec& quad) {
  const auto moments = fock_moments(params, j, n, quad);
  const auto labels = basis_x_labels(basis);
  HermMatrix out = fock_from_moments(moments, params.delta_phi, n, labels[0]) +
                   fock_from_moments(moments, params.delta_phi, n, labels[1]);
  out *= 0.5;
  return out;
}

double delta_s(const TransmitterParams& params, const QuadSpec& quad) {
  const YWindow y = window_y_bounds(params.windows, Window::signal);
  auto eval = [](double theta, double intensity, std::span<double> out) {
    const double w = std::exp(-intensity) * intensity;
    out[0] = w;
    out[1] = std::sin(theta) * w;
  };
  const auto vals = integrate_theta_i(params, y.lo, y.hi, eval, 2, quad);
  if (!(vals[0] > 0.0)) throw std::runtime_error("delta_s: empty signal window");
  return std::sin(params.delta_phi) / (2.0 * params.delta_phi) * vals[1] / vals[0];
}

}  // namespace pqkd
