#include "pqkd/regions.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace pqkd {

std::array<double, 2> basis_x_labels(Basis m) {
  if (m == Basis::Z) return {0.0, M_PI};
  return {M_PI / 2, -M_PI / 2};
}

YWindow window_y_bounds(const IntensityWindows& w, Window j) {
  w.validate();
  switch (j) {
    case Window::vacuum: return {0.0, 2.0 * w.v_hi};
    case Window::decoy: return {2.0 * w.v_hi, 2.0 * w.d_hi};
    default: return {2.0 * w.d_hi, 2.0};
  }
}

namespace {

// Breakpoints of the admissible delta1 range where the inner bounds
// max(t2lo*u, ylo-u, 0) and min(t2hi*u, yhi-u, 1) switch between branches.
std::vector<double> u_breakpoints(double t2lo, double t2hi, double y_lo, double y_hi) {
  std::set<double> pts = {0.0, 1.0};
  auto add = [&pts](double c) {
    if (c > 0.0 && c < 1.0) pts.insert(c);
  };
  add(y_lo / (1.0 + t2lo));
  add(y_hi / (1.0 + t2lo));
  add(y_lo / (1.0 + t2hi));
  add(y_hi / (1.0 + t2hi));
  if (t2hi > 0.0) add(1.0 / t2hi);
  if (t2lo > 0.0) add(1.0 / t2lo);
  add(y_lo);
  add(y_hi);
  add(y_lo - 1.0);
  add(y_hi - 1.0);
  return {pts.begin(), pts.end()};
}

}  // namespace

std::vector<double> integrate_theta_i(const TransmitterParams& params, double y_lo, double y_hi,
                                      ThetaIEval eval, int m, const QuadSpec& quad) {
  params.validate();
  if (m <= 0) throw std::invalid_argument("integrate_theta_i: need m > 0");
  const double tlo = std::tan(M_PI / 4 - 0.5 * params.delta_theta);
  const double thi = std::tan(M_PI / 4 + 0.5 * params.delta_theta);
  const double t2lo = tlo * tlo, t2hi = thi * thi;
  const auto uks = u_breakpoints(t2lo, t2hi, y_lo, y_hi);
  const auto [xo, wo] = gauss_legendre(quad.outer_nodes);
  const auto [xi, wi] = gauss_legendre(quad.inner_nodes);

  std::vector<double> total(m, 0.0);
  std::vector<double> inner(m), vals(m);
  for (size_t piece = 0; piece + 1 < uks.size(); ++piece) {
    const double ua = uks[piece], ub = uks[piece + 1];
    const double um = 0.5 * (ua + ub);
    if (std::max({t2lo * um, y_lo - um, 0.0}) >= std::min({t2hi * um, y_hi - um, 1.0})) continue;
    const double d1a = 2.0 * std::asin(std::sqrt(ua));
    const double d1b = 2.0 * std::asin(std::sqrt(ub));
    for (int a = 0; a < quad.outer_nodes; ++a) {
      // cosine substitution: delta1 = d1a + (d1b - d1a) (1 - cos(pi s)) / 2
      const double s = 0.5 * (xo[a] + 1.0);
      const double d1 = d1a + (d1b - d1a) * 0.5 * (1.0 - std::cos(M_PI * s));
      const double jac = (d1b - d1a) * 0.25 * M_PI * std::sin(M_PI * s);
      const double sd1 = std::sin(0.5 * d1);
      const double u = sd1 * sd1;
      const double w_lo = std::max({t2lo * u, y_lo - u, 0.0});
      const double w_hi = std::min({t2hi * u, y_hi - u, 1.0});
      if (w_lo >= w_hi) continue;
      const double d3a = 2.0 * std::asin(std::sqrt(w_lo));
      const double d3b = 2.0 * std::asin(std::sqrt(w_hi));
      std::fill(inner.begin(), inner.end(), 0.0);
      for (int b = 0; b < quad.inner_nodes; ++b) {
        const double d3 = 0.5 * (d3b - d3a) * xi[b] + 0.5 * (d3a + d3b);
        const double sd3 = std::sin(0.5 * d3);
        const double theta = 2.0 * std::atan2(sd3, sd1);
        const double intensity = 2.0 * params.nu_t * (u + sd3 * sd3);
        eval(theta, intensity, vals);
        for (int k = 0; k < m; ++k) inner[k] += wi[b] * vals[k];
      }
      const double scale = wo[a] * jac * 0.5 * (d3b - d3a);
      for (int k = 0; k < m; ++k) total[k] += scale * inner[k];
    }
  }
  const double inv_pi2 = 1.0 / (M_PI * M_PI);
  for (int k = 0; k < m; ++k) total[k] *= inv_pi2;
  return total;
}

std::vector<double> region_average_many(const AcceptanceRegion& region, ThetaIEval eval, int m,
                                        const QuadSpec& quad) {
  const YWindow y = window_y_bounds(region.params.windows, region.window);
  auto vals = integrate_theta_i(region.params, y.lo, y.hi, std::move(eval), m, quad);
  const double phi_factor = region.params.delta_phi / M_PI;
  for (auto& v : vals) v *= phi_factor;
  return vals;
}

std::vector<double> region_average_many(const AcceptanceRegion& region, PhiThetaIEval eval, int m,
                                        const QuadSpec& quad) {
  const auto [xp, wp] = gauss_legendre(quad.phi_nodes);
  std::vector<double> phis(quad.phi_nodes);
  for (int i = 0; i < quad.phi_nodes; ++i) phis[i] = region.x_center + region.params.delta_phi * xp[i];
  // integral over the phi interval of width 2*dphi against the density 1/(2 pi)
  const double phi_scale = region.params.delta_phi * kAzimuthalDensity;
  std::vector<double> tmp(m);
  auto theta_i_eval = [&](double theta, double intensity, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (int i = 0; i < static_cast<int>(phis.size()); ++i) {
      eval(phis[i], theta, intensity, tmp);
      for (size_t k = 0; k < out.size(); ++k) out[k] += wp[i] * tmp[k];
    }
    for (auto& v : out) v *= phi_scale;
  };
  const YWindow y = window_y_bounds(region.params.windows, region.window);
  return integrate_theta_i(region.params, y.lo, y.hi, theta_i_eval, m, quad);
}

double region_average(const AcceptanceRegion& region,
                      const std::function<double(double, double)>& g, const QuadSpec& quad) {
  auto vals = region_average_many(
      region,
      ThetaIEval([&g](double theta, double intensity, std::span<double> out) {
        out[0] = g(theta, intensity);
      }),
      1, quad);
  return vals[0];
}

double region_average(const AcceptanceRegion& region,
                      const std::function<double(double, double, double)>& g,
                      const QuadSpec& quad) {
  auto vals = region_average_many(
      region,
      PhiThetaIEval([&g](double phi, double theta, double intensity, std::span<double> out) {
        out[0] = g(phi, theta, intensity);
      }),
      1, quad);
  return vals[0];
}

double region_probability(const AcceptanceRegion& region, const QuadSpec& quad) {
  return region_average(region, std::function<double(double, double)>([](double, double) {
                          return 1.0;
                        }),
                        quad);
}

double region_probability(const TransmitterParams& params, Window j, Basis m,
                          const QuadSpec& quad) {
  const auto labels = basis_x_labels(m);
  double p = 0.0;
  for (double x : labels) p += region_probability(AcceptanceRegion{params, j, x}, quad);
  return p;
}

PhotonStats photon_number_dist(const TransmitterParams& params, Window j, int n_cut,
                               const QuadSpec& quad) {
  if (n_cut < 0) throw std::invalid_argument("photon_number_dist: need n_cut >= 0");
  AcceptanceRegion region{params, j, 0.0};
  auto eval = [n_cut](double, double intensity, std::span<double> out) {
    out[0] = 1.0;
    double term = std::exp(-intensity);  // e^{-I} I^n / n!
    for (int n = 0; n <= n_cut; ++n) {
      out[1 + n] = term;
      term *= intensity / (n + 1);
    }
  };
  auto vals = region_average_many(region, ThetaIEval(eval), n_cut + 2, quad);
  if (!(vals[0] > 0.0)) throw std::runtime_error("photon_number_dist: window has zero probability");
  PhotonStats stats;
  stats.window = j;
  stats.p.resize(n_cut + 1);
  double sum = 0.0;
  for (int n = 0; n <= n_cut; ++n) {
    stats.p[n] = vals[1 + n] / vals[0];
    sum += stats.p[n];
  }
  stats.tail = 1.0 - sum;
  return stats;
}

}  // namespace pqkd
