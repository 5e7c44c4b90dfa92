#include "pqkd/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pqkd {

namespace {

constexpr int kMaxCut = 10;

// Fused geometry integrand layout per window: region mass, single-photon
// mass, photon-number masses, then the Fock moment rows packed at n^2 + m.
struct GeometryLayout {
  int n_cut;
  int one() const { return 0; }
  int single() const { return 1; }
  int photon(int n) const { return 2 + n; }
  int moment_base() const { return 3 + n_cut; }
  int total() const { return 3 + n_cut + (n_cut + 1) * (n_cut + 1); }
};

// e1_up / y1_low style ratio, capped at the value that zeroes the privacy
// term; an empty denominator means nothing is certified.
double capped_phase(double num, double den) {
  if (!(den > 0.0)) return 0.5;
  return std::min(num / den, 0.5);
}

// K_M from union masses of the signal region and the estimated
// single-photon quantities; clamped at zero.
double basis_fraction(double single_mass, double window_prob, double y1, double phase,
                      double gain, double qber, double f_ec) {
  const double privacy = single_mass * y1 * (1.0 - binary_entropy(phase));
  const double correction = f_ec * window_prob * gain * binary_entropy(qber);
  return std::max(0.0, 0.5 * (privacy - correction));
}

// Channel observables of every window in one basis, normalized with the
// cached window masses, assembled into the estimation problem.
DecoyProblem problem_from_tables(const TransmitterTables& tables, const ChannelParams& ch,
                                 double eta, Basis basis, const BiasBounds& bias,
                                 const QuadSpec& quad) {
  DecoyProblem pr;
  pr.n_cut = tables.n_cut;
  pr.bias = bias;
  for (size_t w = 0; w < 3; ++w) {
    const auto& geo = tables.window[w];
    const auto avg = window_channel_averages(tables.params, ch, eta, kWindows[w], basis, quad);
    pr.gain[w] = avg.click / geo.one;
    pr.error_rate[w] = avg.error / geo.one;
    auto& p = pr.photon_prob[w];
    p.resize(geo.photon_mass.size());
    for (size_t n = 0; n < p.size(); ++n) p[n] = geo.photon_mass[n] / geo.one;
  }
  return pr;
}

struct SinglePhotonEstimate {
  DecoyBounds bounds;
  double gain = 0.0;
  double error_rate = 0.0;
};

SinglePhotonEstimate estimate_basis(const TransmitterTables& tables, const ChannelParams& ch,
                                    double eta, Basis basis, const BiasBounds& bias,
                                    const QuadSpec& quad) {
  const DecoyProblem pr = problem_from_tables(tables, ch, eta, basis, bias, quad);
  SinglePhotonEstimate est;
  est.bounds = estimate_single_photon(pr);
  const auto s = static_cast<size_t>(static_cast<int>(Window::signal));
  est.gain = pr.gain[s];
  est.error_rate = pr.error_rate[s];
  return est;
}

}  // namespace

double binary_entropy(double p) {
  if (!(p >= -1e-12) || !(p <= 1.0 + 1e-12))
    throw std::domain_error("binary_entropy: argument outside [0, 1]");
  p = std::clamp(p, 0.0, 1.0);
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

void KeyRateConfig::validate() const {
  transmitter.validate();
  channel.validate();
  if (!(f_ec >= 1.0)) throw std::invalid_argument("key rate: f_ec must be >= 1");
  if (n_cut < 1 || n_cut > kMaxCut)
    throw std::invalid_argument("key rate: n_cut must be in [1, 10]");
  if (quad.outer_nodes < 4 || quad.inner_nodes < 4 || quad.phi_nodes < 4)
    throw std::invalid_argument("key rate: quadrature too coarse");
}

TransmitterTables build_transmitter_tables(const TransmitterParams& params, int n_cut,
                                           const QuadSpec& quad) {
  params.validate();
  if (n_cut < 1 || n_cut > kMaxCut)
    throw std::invalid_argument("transmitter tables: n_cut must be in [1, 10]");
  const GeometryLayout lay{n_cut};

  TransmitterTables tables;
  tables.params = params;
  tables.n_cut = n_cut;
  std::array<FockMoments, 3> moments;
  for (size_t w = 0; w < 3; ++w) {
    const YWindow y = window_y_bounds(params.windows, kWindows[w]);
    auto eval = [n_cut, lay](double theta, double intensity, std::span<double> out) {
      std::array<double, 2 * kMaxCut + 1> cp, sp;
      const double c = std::cos(0.5 * theta);
      const double s = std::sin(0.5 * theta);
      cp[0] = sp[0] = 1.0;
      for (int i = 1; i <= 2 * n_cut; ++i) {
        cp[i] = cp[i - 1] * c;
        sp[i] = sp[i - 1] * s;
      }
      out[static_cast<size_t>(lay.one())] = 1.0;
      const double damp = std::exp(-intensity);
      out[static_cast<size_t>(lay.single())] = damp * intensity;
      double wn = damp;  // e^{-I} I^n / n!
      double* mom = out.data() + lay.moment_base();
      for (int n = 0; n <= n_cut; ++n) {
        if (n > 0) wn *= intensity / n;
        out[static_cast<size_t>(lay.photon(n))] = wn;
        double* row = mom + n * n;
        for (int m = 0; m <= 2 * n; ++m) row[m] = cp[2 * n - m] * sp[m] * wn;
      }
    };
    const auto flat = integrate_theta_i(params, y.lo, y.hi, eval, lay.total(), quad);

    // Masses are single-label region averages, so they carry the azimuthal
    // window factor; the Fock moment rows stay raw because the state
    // assembly normalizes them.
    const double phi_factor = params.delta_phi / M_PI;
    auto& geo = tables.window[w];
    geo.one = phi_factor * flat[static_cast<size_t>(lay.one())];
    if (!(geo.one > 0.0)) throw std::runtime_error("transmitter tables: empty window");
    geo.single_mass = phi_factor * flat[static_cast<size_t>(lay.single())];
    geo.photon_mass.resize(static_cast<size_t>(n_cut) + 1);
    for (int n = 0; n <= n_cut; ++n)
      geo.photon_mass[static_cast<size_t>(n)] =
          phi_factor * flat[static_cast<size_t>(lay.photon(n))];
    auto& mom = moments[w];
    mom.n_cut = n_cut;
    mom.t.resize(static_cast<size_t>(n_cut) + 1);
    const auto base = flat.begin() + lay.moment_base();
    for (int n = 0; n <= n_cut; ++n)
      mom.t[static_cast<size_t>(n)].assign(base + n * n, base + (n + 1) * (n + 1));
  }
  tables.bias = bias_tables_from_moments(moments, params.delta_phi, n_cut, Basis::Z);
  for (size_t w = 0; w < 3; ++w) tables.window[w].moments = std::move(moments[w]);
  return tables;
}

KeyRatePoint evaluate_point(const KeyRateConfig& cfg, double distance_km, bool benchmarks) {
  cfg.validate();
  const TransmitterTables tables = build_transmitter_tables(cfg.transmitter, cfg.n_cut, cfg.quad);
  const double eta = channel_eta(cfg.channel, distance_km);
  const std::array<FockMoments, 3> moments{tables.window[0].moments, tables.window[1].moments,
                                           tables.window[2].moments};
  const BiasBounds bias_x =
      bias_tables_from_moments(moments, cfg.transmitter.delta_phi, cfg.n_cut, Basis::X);

  KeyRatePoint point;
  point.distance_km = distance_km;
  point.params = cfg.transmitter;

  const auto s = static_cast<size_t>(static_cast<int>(Window::signal));
  for (const Basis basis : {Basis::Z, Basis::X}) {
    const auto est = estimate_basis(tables, cfg.channel, eta, basis,
                                    basis == Basis::Z ? tables.bias : bias_x, cfg.quad);
    BasisRates& br = basis == Basis::Z ? point.z : point.x;
    br.basis = basis;
    br.window_prob = 2.0 * tables.window[s].one;
    br.single_mass = 2.0 * tables.window[s].single_mass;
    br.gain = est.gain;
    br.error_rate = est.error_rate;
    br.qber = est.gain > 0.0 ? est.error_rate / est.gain : 0.0;
    br.y1_low = est.bounds.y1_low;
    br.e1_up = est.bounds.e1_up;
    br.y1_true = n_photon_yield(eta, cfg.channel.p_dark, 1);
    br.e1_true = benchmarks ? n_photon_error(cfg.transmitter, cfg.channel, distance_km,
                                             Window::signal, basis, 1, cfg.quad)
                            : 0.0;
  }

  point.z.phase_error = capped_phase(point.x.e1_up, point.x.y1_low);
  point.x.phase_error = capped_phase(point.z.e1_up, point.z.y1_low);
  const double phase_perfect_z = capped_phase(point.x.e1_true, point.x.y1_true);
  const double phase_perfect_x = capped_phase(point.z.e1_true, point.z.y1_true);

  for (BasisRates* br : {&point.z, &point.x}) {
    br->rate = basis_fraction(br->single_mass, br->window_prob, br->y1_low, br->phase_error,
                              br->gain, br->qber, cfg.f_ec);
    const double phase_true = br->basis == Basis::Z ? phase_perfect_z : phase_perfect_x;
    br->rate_perfect = benchmarks
                           ? basis_fraction(br->single_mass, br->window_prob, br->y1_true,
                                            phase_true, br->gain, br->qber, cfg.f_ec)
                           : 0.0;
  }
  point.key_rate = point.z.rate + point.x.rate;
  point.key_rate_perfect = point.z.rate_perfect + point.x.rate_perfect;
  point.key_rate_active =
      benchmarks ? active_baseline_rate(cfg.channel, distance_km, cfg.f_ec) : 0.0;
  return point;
}

double passive_rate(const TransmitterTables& tables, const ChannelParams& ch, double distance_km,
                    double f_ec, const QuadSpec& quad) {
  const double eta = channel_eta(ch, distance_km);
  const auto est = estimate_basis(tables, ch, eta, Basis::Z, tables.bias, quad);
  const auto s = static_cast<size_t>(static_cast<int>(Window::signal));
  const double qber = est.gain > 0.0 ? est.error_rate / est.gain : 0.0;
  const double phase = capped_phase(est.bounds.e1_up, est.bounds.y1_low);
  const double k_z = basis_fraction(2.0 * tables.window[s].single_mass,
                                    2.0 * tables.window[s].one, est.bounds.y1_low, phase,
                                    est.gain, qber, f_ec);
  return 2.0 * k_z;  // Z and X contribute equally by symmetry
}

double active_baseline_rate(const ChannelParams& ch, double distance_km, double f_ec) {
  ch.validate();
  const double eta = channel_eta(ch, distance_km);
  const double y1 = n_photon_yield(eta, ch.p_dark, 1);
  const double e1 = n_photon_error_click(eta, ch.p_dark, 1.0, 1);
  const double h1 = binary_entropy(std::clamp(y1 > 0.0 ? e1 / y1 : 0.5, 0.0, 0.5));

  auto rate_at = [&](double mu) {
    const double q = click_probability(mu, eta, ch.p_dark);
    const double err = error_click_probability(mu, eta, ch.p_dark, 1.0);
    const double qber = q > 0.0 ? std::clamp(err / q, 0.0, 1.0) : 0.0;
    return std::exp(-mu) * mu * y1 * (1.0 - h1) - f_ec * q * binary_entropy(qber);
  };

  // Coarse scan then golden-section refinement around the best intensity.
  const double mu_lo = 0.01, mu_hi = 1.5;
  const int steps = 64;
  double best_mu = mu_lo, best = rate_at(mu_lo);
  for (int i = 1; i <= steps; ++i) {
    const double mu = mu_lo + (mu_hi - mu_lo) * i / steps;
    const double r = rate_at(mu);
    if (r > best) {
      best = r;
      best_mu = mu;
    }
  }
  const double span = (mu_hi - mu_lo) / steps;
  double a = std::max(mu_lo, best_mu - span), b = std::min(mu_hi, best_mu + span);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = rate_at(c), fd = rate_at(d);
  for (int i = 0; i < 60; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = rate_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = rate_at(d);
    }
  }
  return std::max(0.0, std::max(best, std::max(fc, fd)));
}

const TransmitterTables& GeometryCache::get(const TransmitterParams& params, int n_cut,
                                            const QuadSpec& quad) {
  const Key key{params.nu_t,        params.delta_theta, params.delta_phi,
                params.windows.v_hi, params.windows.d_hi, n_cut,
                quad.outer_nodes,   quad.inner_nodes,   quad.phi_nodes};
  auto it = entries_.find(key);
  if (it == entries_.end())
    it = entries_.emplace(key, build_transmitter_tables(params, n_cut, quad)).first;
  return it->second;
}

OptimizedPoint optimize_parameters(const KeyRateConfig& cfg, double distance_km,
                                   const OptimizeOptions& opts, GeometryCache* cache) {
  cfg.validate();
  if (opts.grid_per_axis < 2) throw std::invalid_argument("optimize: grid_per_axis must be >= 2");
  GeometryCache local;
  GeometryCache& geo = cache ? *cache : local;

  using Point = std::array<double, 3>;  // nu_t, delta_theta, delta_phi
  const std::array<std::array<double, 2>, 3> box{opts.nu_t_range, opts.delta_theta_range,
                                                 opts.delta_phi_range};
  auto clip = [&box](Point p) {
    for (size_t i = 0; i < 3; ++i) p[i] = std::clamp(p[i], box[i][0], box[i][1]);
    return p;
  };

  Point best_point{};
  double best = -1.0;
  auto objective = [&](Point p) {
    TransmitterParams tp = cfg.transmitter;
    tp.nu_t = p[0];
    tp.delta_theta = p[1];
    tp.delta_phi = p[2];
    const double rate =
        passive_rate(geo.get(tp, cfg.n_cut, opts.search_quad), cfg.channel, distance_km,
                     cfg.f_ec, opts.search_quad);
    if (rate > best) {
      best = rate;
      best_point = p;
    }
    return rate;
  };

  const int g = opts.grid_per_axis;
  auto axis_value = [&](size_t axis, int i) {
    return box[axis][0] + (box[axis][1] - box[axis][0]) * i / (g - 1);
  };
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b)
      for (int c = 0; c < g; ++c)
        objective({axis_value(0, a), axis_value(1, b), axis_value(2, c)});

  // Nelder-Mead refinement in the box, fixed evaluation budget, maximizing
  // via negated objective.
  int budget = opts.refine_evals;
  auto f = [&](const Point& p) { return -objective(clip(p)); };

  std::array<Point, 4> simplex;
  std::array<double, 4> val;
  simplex[0] = best_point;
  val[0] = -best;
  for (size_t i = 0; i < 3; ++i) {
    Point p = best_point;
    const double step = 0.5 * (box[i][1] - box[i][0]) / (g - 1);
    p[i] = p[i] + step <= box[i][1] ? p[i] + step : p[i] - step;
    simplex[i + 1] = p;
    if (budget-- <= 0) break;
    val[i + 1] = f(p);
  }

  while (budget > 0) {
    std::array<size_t, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return val[a] < val[b]; });
    const Point& worst = simplex[order[3]];
    Point centroid{};
    for (int i = 0; i < 3; ++i)
      for (size_t d = 0; d < 3; ++d) centroid[d] += simplex[order[static_cast<size_t>(i)]][d] / 3.0;

    auto blend = [&](double t) {
      Point p;
      for (size_t d = 0; d < 3; ++d) p[d] = centroid[d] + t * (centroid[d] - worst[d]);
      return p;
    };
    const Point xr = blend(1.0);
    const double fr = f(xr);
    --budget;
    if (fr < val[order[0]]) {
      if (budget-- > 0) {
        const Point xe = blend(2.0);
        const double fe = f(xe);
        simplex[order[3]] = fe < fr ? xe : xr;
        val[order[3]] = std::min(fe, fr);
      } else {
        simplex[order[3]] = xr;
        val[order[3]] = fr;
      }
    } else if (fr < val[order[2]]) {
      simplex[order[3]] = xr;
      val[order[3]] = fr;
    } else {
      if (budget-- <= 0) break;
      const Point xc = blend(fr < val[order[3]] ? 0.5 : -0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, val[order[3]])) {
        simplex[order[3]] = xc;
        val[order[3]] = fc;
      } else {
        for (int i = 1; i < 4; ++i) {
          if (budget-- <= 0) break;
          for (size_t d = 0; d < 3; ++d)
            simplex[order[static_cast<size_t>(i)]][d] =
                0.5 * (simplex[order[0]][d] + simplex[order[static_cast<size_t>(i)]][d]);
          val[order[static_cast<size_t>(i)]] = f(simplex[order[static_cast<size_t>(i)]]);
        }
      }
    }
  }

  OptimizedPoint out;
  out.params = cfg.transmitter;
  out.params.nu_t = best_point[0];
  out.params.delta_theta = best_point[1];
  out.params.delta_phi = best_point[2];
  out.search_rate = best;
  return out;
}

}  // namespace pqkd
