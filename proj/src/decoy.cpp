#include "pqkd/decoy.hpp"

#include <cmath>
#include <stdexcept>

#include "pqkd/simplex.hpp"

namespace pqkd {

namespace {

// Shared structure of the yield and error programs: per-window two-sided
// photon expansion rows, pairwise bias rows, unit box. Objective column is
// (signal window, n = 1); minimized as given or with its sign flipped.
double solve_window_lp(const DecoyProblem& pr, const std::array<double, 3>& observed,
                       const std::array<std::vector<double>, 3>& bias, bool maximize) {
  const int nc = pr.n_cut;
  const int width = nc + 1;
  const int nvars = 3 * width;
  auto var = [width](int j, int n) { return j * width + n; };

  std::vector<LpRow> rows;
  rows.reserve(static_cast<size_t>(6 + 6 * width + nvars));
  for (int j = 0; j < 3; ++j) {
    const auto& p = pr.photon_prob[static_cast<size_t>(j)];
    double tail = 1.0;
    LpRow expand;
    expand.coeff.assign(static_cast<size_t>(nvars), 0.0);
    for (int n = 0; n <= nc; ++n) {
      expand.coeff[static_cast<size_t>(var(j, n))] = p[static_cast<size_t>(n)];
      tail -= p[static_cast<size_t>(n)];
    }
    expand.rel = LpRel::le;
    expand.rhs = observed[static_cast<size_t>(j)];
    rows.push_back(expand);
    expand.rel = LpRel::ge;
    expand.rhs = observed[static_cast<size_t>(j)] - std::max(tail, 0.0);
    rows.push_back(std::move(expand));
  }
  for (int i = 0; i < 3; ++i) {
    const auto& [wj, wk] = kWindowPairs[static_cast<size_t>(i)];
    const int j = static_cast<int>(wj);
    const int k = static_cast<int>(wk);
    for (int n = 0; n <= nc; ++n) {
      LpRow diff;
      diff.coeff.assign(static_cast<size_t>(nvars), 0.0);
      diff.coeff[static_cast<size_t>(var(j, n))] = 1.0;
      diff.coeff[static_cast<size_t>(var(k, n))] = -1.0;
      diff.rel = LpRel::le;
      diff.rhs = bias[static_cast<size_t>(i)][static_cast<size_t>(n)];
      rows.push_back(diff);
      diff.coeff[static_cast<size_t>(var(j, n))] = -1.0;
      diff.coeff[static_cast<size_t>(var(k, n))] = 1.0;
      rows.push_back(std::move(diff));
    }
  }
  for (int v = 0; v < nvars; ++v) {
    LpRow box;
    box.coeff.assign(static_cast<size_t>(nvars), 0.0);
    box.coeff[static_cast<size_t>(v)] = 1.0;
    box.rel = LpRel::le;
    box.rhs = 1.0;
    rows.push_back(std::move(box));
  }

  std::vector<double> c(static_cast<size_t>(nvars), 0.0);
  c[static_cast<size_t>(var(static_cast<int>(Window::signal), 1))] = maximize ? -1.0 : 1.0;
  const LpResult res = solve_lp(c, rows);
  if (res.status != LpStatus::optimal)
    throw std::runtime_error("estimate_single_photon: program not solvable");
  return maximize ? -res.objective : res.objective;
}

}  // namespace

void DecoyProblem::validate() const {
  if (n_cut < 1) throw std::invalid_argument("decoy: n_cut must be at least 1");
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (int j = 0; j < 3; ++j) {
    if (!in_unit(gain[static_cast<size_t>(j)]) || !in_unit(error_rate[static_cast<size_t>(j)]))
      throw std::invalid_argument("decoy: observables outside [0, 1]");
    const auto& p = photon_prob[static_cast<size_t>(j)];
    if (static_cast<int>(p.size()) != n_cut + 1)
      throw std::invalid_argument("decoy: photon distribution size mismatch");
    double sum = 0.0;
    for (double v : p) {
      if (!in_unit(v)) throw std::invalid_argument("decoy: photon probability outside [0, 1]");
      sum += v;
    }
    if (sum > 1.0 + 1e-12) throw std::invalid_argument("decoy: photon probabilities exceed 1");
  }
  if (bias.n_cut < n_cut) throw std::invalid_argument("decoy: bias table shorter than n_cut");
}

DecoyProblem build_decoy_problem(const TransmitterParams& params, const ChannelParams& ch,
                                 double distance_km, Basis basis, int n_cut,
                                 const QuadSpec& quad) {
  DecoyProblem pr;
  pr.n_cut = n_cut;
  for (int j = 0; j < 3; ++j) {
    const Window w = kWindows[static_cast<size_t>(j)];
    const auto obs = window_observables(params, ch, distance_km, w, basis, quad);
    pr.gain[static_cast<size_t>(j)] = obs.gain;
    pr.error_rate[static_cast<size_t>(j)] = obs.error_rate;
    pr.photon_prob[static_cast<size_t>(j)] = photon_number_dist(params, w, n_cut, quad).p;
  }
  pr.bias = bias_tables(params, n_cut, quad);
  pr.validate();
  return pr;
}

DecoyBounds estimate_single_photon(const DecoyProblem& problem) {
  problem.validate();
  DecoyBounds out;
  out.y1_low = solve_window_lp(problem, problem.gain, problem.bias.delta, false);
  out.e1_up = solve_window_lp(problem, problem.error_rate, problem.bias.deltat, true);
  return out;
}

}  // namespace pqkd
