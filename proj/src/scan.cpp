#include "pqkd/scan.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "pqkd/decoy.hpp"
#include "pqkd/oracle.hpp"

namespace pqkd {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw std::runtime_error("config: " + path + ": " + msg);
}

void require_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(path, "unknown key \"" + it.key() + "\"");
  }
}

const json& object_field(const json& obj, const std::string& path, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_object()) fail(path + "." + key, "expected an object");
  return v;
}

double num_field(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

int int_field(const json& obj, const std::string& path, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

std::uint64_t u64_field(const json& obj, const std::string& path, const char* key,
                        std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)
    fail(path + "." + key, "must be nonnegative");
  return v.get<std::uint64_t>();
}

bool bool_field(const json& obj, const std::string& path, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string str_field(const json& obj, const std::string& path, const char* key,
                      const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string fmt_km(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string hash_hex(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << bytes;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void RunConfig::validate() const {
  transmitter.validate();
  channel.validate();
  if (!(f_ec >= 1.0)) throw std::invalid_argument("f_ec must be >= 1");
  if (n_cut < 1 || n_cut > 10) throw std::invalid_argument("n_cut must be in [1, 10]");
  if (quad.outer_nodes < 4 || quad.inner_nodes < 4 || quad.phi_nodes < 4)
    throw std::invalid_argument("quad: every node count must be >= 4");
  if (!(grid_start_km >= 0.0)) throw std::invalid_argument("grid.start_km must be >= 0");
  if (!(grid_step_km > 0.0)) throw std::invalid_argument("grid.step_km must be > 0");
  if (!(grid_stop_km >= grid_start_km))
    throw std::invalid_argument("grid.stop_km must be >= grid.start_km");
  if (mc_samples < 1000) throw std::invalid_argument("mc.samples must be >= 1000");
  if (out_prefix.empty()) throw std::invalid_argument("out_prefix must be nonempty");
}

std::vector<double> RunConfig::distances() const {
  const int n =
      static_cast<int>(std::floor((grid_stop_km - grid_start_km) / grid_step_km + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(grid_start_km + i * grid_step_km);
  return out;
}

std::string RunConfig::to_json() const {
  json j;
  j["transmitter"] = {{"nu_t", transmitter.nu_t},
                      {"delta_theta", transmitter.delta_theta},
                      {"delta_phi", transmitter.delta_phi},
                      {"v_hi", transmitter.windows.v_hi},
                      {"d_hi", transmitter.windows.d_hi}};
  j["channel"] = {{"alpha_att_db_km", channel.alpha_att_db_km},
                  {"eta_det", channel.eta_det},
                  {"p_dark", channel.p_dark},
                  {"misalignment", channel.misalignment}};
  j["f_ec"] = f_ec;
  j["n_cut"] = n_cut;
  j["quad"] = {{"outer_nodes", quad.outer_nodes},
               {"inner_nodes", quad.inner_nodes},
               {"phi_nodes", quad.phi_nodes}};
  j["grid"] = {{"start_km", grid_start_km}, {"stop_km", grid_stop_km}, {"step_km", grid_step_km}};
  j["mode"] = mode == RunMode::fixed ? "fixed" : "optimize";
  j["baselines"] = baselines;
  j["mc"] = {{"enabled", mc_enabled}, {"samples", mc_samples}};
  j["seed"] = seed;
  j["out_prefix"] = out_prefix;
  return j.dump();
}

std::uint64_t RunConfig::hash() const { return fnv1a64(to_json()); }

RunConfig RunConfig::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw std::runtime_error("config: top level must be a JSON object");

  RunConfig cfg;
  require_keys(doc, "top level",
               {"transmitter", "channel", "f_ec", "n_cut", "quad", "grid", "mode", "baselines",
                "mc", "seed", "out_prefix"});

  if (doc.contains("transmitter")) {
    const json& t = object_field(doc, "config", "transmitter");
    require_keys(t, "transmitter", {"nu_t", "delta_theta", "delta_phi", "v_hi", "d_hi"});
    cfg.transmitter.nu_t = num_field(t, "transmitter", "nu_t", cfg.transmitter.nu_t);
    cfg.transmitter.delta_theta =
        num_field(t, "transmitter", "delta_theta", cfg.transmitter.delta_theta);
    cfg.transmitter.delta_phi = num_field(t, "transmitter", "delta_phi", cfg.transmitter.delta_phi);
    cfg.transmitter.windows.v_hi = num_field(t, "transmitter", "v_hi", cfg.transmitter.windows.v_hi);
    cfg.transmitter.windows.d_hi = num_field(t, "transmitter", "d_hi", cfg.transmitter.windows.d_hi);
  }
  if (doc.contains("channel")) {
    const json& c = object_field(doc, "config", "channel");
    require_keys(c, "channel", {"alpha_att_db_km", "eta_det", "p_dark", "misalignment"});
    cfg.channel.alpha_att_db_km =
        num_field(c, "channel", "alpha_att_db_km", cfg.channel.alpha_att_db_km);
    cfg.channel.eta_det = num_field(c, "channel", "eta_det", cfg.channel.eta_det);
    cfg.channel.p_dark = num_field(c, "channel", "p_dark", cfg.channel.p_dark);
    cfg.channel.misalignment = num_field(c, "channel", "misalignment", cfg.channel.misalignment);
  }
  cfg.f_ec = num_field(doc, "config", "f_ec", cfg.f_ec);
  cfg.n_cut = int_field(doc, "config", "n_cut", cfg.n_cut);
  if (doc.contains("quad")) {
    const json& q = object_field(doc, "config", "quad");
    require_keys(q, "quad", {"outer_nodes", "inner_nodes", "phi_nodes"});
    cfg.quad.outer_nodes = int_field(q, "quad", "outer_nodes", cfg.quad.outer_nodes);
    cfg.quad.inner_nodes = int_field(q, "quad", "inner_nodes", cfg.quad.inner_nodes);
    cfg.quad.phi_nodes = int_field(q, "quad", "phi_nodes", cfg.quad.phi_nodes);
  }
  if (doc.contains("grid")) {
    const json& g = object_field(doc, "config", "grid");
    require_keys(g, "grid", {"start_km", "stop_km", "step_km"});
    cfg.grid_start_km = num_field(g, "grid", "start_km", cfg.grid_start_km);
    cfg.grid_stop_km = num_field(g, "grid", "stop_km", cfg.grid_stop_km);
    cfg.grid_step_km = num_field(g, "grid", "step_km", cfg.grid_step_km);
  }
  const std::string mode = str_field(doc, "config", "mode", "fixed");
  if (mode == "fixed")
    cfg.mode = RunMode::fixed;
  else if (mode == "optimize")
    cfg.mode = RunMode::optimize;
  else
    fail("mode", "expected \"fixed\" or \"optimize\"");
  cfg.baselines = bool_field(doc, "config", "baselines", cfg.baselines);
  if (doc.contains("mc")) {
    const json& m = object_field(doc, "config", "mc");
    require_keys(m, "mc", {"enabled", "samples"});
    cfg.mc_enabled = bool_field(m, "mc", "enabled", cfg.mc_enabled);
    cfg.mc_samples = u64_field(m, "mc", "samples", cfg.mc_samples);
  }
  cfg.seed = u64_field(doc, "config", "seed", cfg.seed);
  cfg.out_prefix = str_field(doc, "config", "out_prefix", cfg.out_prefix);

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

ScanOutputs run_scan(const RunConfig& cfg) {
  cfg.validate();
  const std::vector<double> grid = cfg.distances();
  const std::string hash = hash_hex(cfg.hash());

  KeyRateConfig kc;
  kc.transmitter = cfg.transmitter;
  kc.channel = cfg.channel;
  kc.f_ec = cfg.f_ec;
  kc.n_cut = cfg.n_cut;
  kc.quad = cfg.quad;
  GeometryCache cache;

  std::ostringstream csv;
  const char* columns =
      "L_km,K_passive,K_perfect,K_active,y1_low_Z,e1_up_Z,phase_err_Z,Q_s_Z,QBER_s_Z,"
      "nu_t,dtheta,dphi,config_hash,version";
  csv << columns << "\n";

  json optimized = json::array();
  json mc_records = json::array();

  for (size_t i = 0; i < grid.size(); ++i) {
    const double length = grid[i];
    KeyRateConfig pc = kc;
    if (cfg.mode == RunMode::optimize) {
      try {
        pc.transmitter = optimize_parameters(kc, length, {}, &cache).params;
      } catch (const std::exception& e) {
        throw std::runtime_error("optimizer failure at " + fmt_km(length) + " km: " + e.what());
      }
      optimized.push_back({{"L_km", length},
                           {"nu_t", pc.transmitter.nu_t},
                           {"delta_theta", pc.transmitter.delta_theta},
                           {"delta_phi", pc.transmitter.delta_phi}});
    }

    KeyRatePoint pt;
    try {
      pt = evaluate_point(pc, length, cfg.baselines);
    } catch (const std::exception& e) {
      throw std::runtime_error("rate engine failure at " + fmt_km(length) + " km: " + e.what());
    }

    csv << fmt_km(length) << ',' << fmt(pt.key_rate) << ','
        << (cfg.baselines ? fmt(pt.key_rate_perfect) : "nan") << ','
        << (cfg.baselines ? fmt(pt.key_rate_active) : "nan") << ',' << fmt(pt.z.y1_low) << ','
        << fmt(pt.z.e1_up) << ',' << fmt(pt.z.phase_error) << ',' << fmt(pt.z.gain) << ','
        << fmt(pt.z.qber) << ',' << fmt(pc.transmitter.nu_t) << ','
        << fmt(pc.transmitter.delta_theta) << ',' << fmt(pc.transmitter.delta_phi) << ',' << hash
        << ',' << kToolVersion << "\n";

    if (cfg.mc_enabled) {
      const std::uint64_t run_seed = mix64(cfg.seed ^ (0x9E3779B97F4A7C15ull * (i + 1)));
      const McObservables mc = end_to_end_mc(pc.transmitter, cfg.channel, length, Basis::Z,
                                             cfg.mc_samples, run_seed);
      json windows = json::array();
      for (size_t w = 0; w < 3; ++w) {
        windows.push_back({{"window", window_name(static_cast<Window>(w))},
                           {"accepted", mc.window[w].accepted},
                           {"probability", mc.window[w].probability},
                           {"gain", mc.window[w].gain},
                           {"gain_se", mc.window[w].gain_se},
                           {"error_rate", mc.window[w].error_rate},
                           {"error_se", mc.window[w].error_se}});
      }
      mc_records.push_back(
          {{"L_km", length}, {"seed", run_seed}, {"samples", cfg.mc_samples}, {"windows", windows}});
    }
  }

  ScanOutputs out;
  out.csv_path = cfg.out_prefix + ".csv";
  out.sidecar_path = cfg.out_prefix + ".json";
  out.rows = static_cast<int>(grid.size());

  write_file(out.csv_path, csv.str());

  json sidecar;
  sidecar["version"] = kToolVersion;
  sidecar["config_hash"] = hash;
  sidecar["config"] = json::parse(cfg.to_json());
  {
    json cols = json::array();
    std::istringstream split(columns);
    std::string col;
    while (std::getline(split, col, ',')) cols.push_back(col);
    sidecar["columns"] = cols;
  }
  sidecar["csv"] = out.csv_path;
  sidecar["rows"] = out.rows;
  sidecar["distances_km"] = grid;
  if (cfg.mode == RunMode::optimize) sidecar["optimized"] = optimized;
  if (cfg.mc_enabled) sidecar["mc"] = mc_records;
  write_file(out.sidecar_path, sidecar.dump(2) + "\n");

  return out;
}

std::string ValidationReport::to_json() const {
  json j;
  j["pass"] = pass;
  json checks_json = json::array();
  for (const ValidationCheck& c : checks)
    checks_json.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"bound", c.bound}});
  j["checks"] = checks_json;
  return j.dump(2) + "\n";
}

namespace {

// Rebuilds the channel-bound amplitudes implied by the closed-form pulse
// description so they can be compared against the explicit mode map.
double mode_map_max_error(const TransmitterParams& params, size_t n_draws, std::uint64_t seed) {
  SplitMix64 rng(mix64(seed ^ 0x6d6f64656d617000ull));
  const double t = 0.5;
  const double nu = params.nu_t / t;
  double worst = 0.0;
  for (size_t i = 0; i < n_draws; ++i) {
    PhaseDraw draw;
    draw.alpha = 2.0 * M_PI * rng.uniform();
    draw.delta1 = 2.0 * M_PI * rng.uniform();
    draw.delta2 = 2.0 * M_PI * rng.uniform();
    draw.delta3 = 2.0 * M_PI * rng.uniform();
    const OutputPulse pulse = output_from_phases(draw, params);
    if (pulse.vacuum) continue;
    const ModeAmplitudes modes = explicit_mode_simulation(draw, nu, t);
    const double amp = std::sqrt(pulse.intensity);
    const std::complex<double> right =
        amp * std::cos(0.5 * pulse.theta) * std::exp(std::complex<double>(0.0, pulse.psi));
    const std::complex<double> left = amp * std::sin(0.5 * pulse.theta) *
                                      std::exp(std::complex<double>(0.0, pulse.psi + pulse.phi));
    worst = std::max(worst, std::abs(modes.w.right - right));
    worst = std::max(worst, std::abs(modes.w.left - left));
    const double tap = std::sqrt((1.0 - t) / t);
    worst = std::max(worst, std::abs(modes.y.right - tap * modes.w.right));
    worst = std::max(worst, std::abs(modes.y.left - tap * modes.w.left));
  }
  return worst;
}

double table_range_violation(const BiasBounds& b) {
  double worst = 0.0;
  for (const auto& table : {b.delta, b.deltat})
    for (const auto& column : table)
      for (const double v : column) {
        if (v < 0.0) worst = std::max(worst, -v);
        if (v > 1.0) worst = std::max(worst, v - 1.0);
      }
  return worst;
}

double table_max_abs_diff(const BiasBounds& a, const BiasBounds& b) {
  double worst = 0.0;
  for (size_t p = 0; p < 3; ++p)
    for (size_t n = 0; n < a.delta[p].size(); ++n) {
      worst = std::max(worst, std::abs(a.delta[p][n] - b.delta[p][n]));
      worst = std::max(worst, std::abs(a.deltat[p][n] - b.deltat[p][n]));
    }
  return worst;
}

}  // namespace

ValidationReport run_validation(const RunConfig& cfg, const ValidationHooks* hooks) {
  cfg.validate();
  ValidationReport report;
  auto add = [&report](const std::string& name, double value, double bound) {
    report.checks.push_back({name, value <= bound, value, bound});
  };

  add("pdf normalization", std::abs(pdf_normalization(cfg.transmitter.nu_t) - 1.0), 1e-6);
  add("mode map agreement", mode_map_max_error(cfg.transmitter, 10000, cfg.seed), 1e-12);

  BiasBounds bias_z = bias_tables(cfg.transmitter, cfg.n_cut, cfg.quad, Basis::Z);
  const BiasBounds bias_x = bias_tables(cfg.transmitter, cfg.n_cut, cfg.quad, Basis::X);
  if (hooks && hooks->corrupt_bias) hooks->corrupt_bias(bias_z);

  add("bias tables in range", table_range_violation(bias_z), 1e-12);
  {
    double worst = 0.0;
    for (size_t p = 0; p < 3; ++p) worst = std::max(worst, std::abs(bias_z.delta[p][1]));
    add("single photon bias zero", worst, 1e-9);
  }
  {
    double worst = -std::numeric_limits<double>::infinity();
    for (size_t p = 0; p < 3; ++p)
      for (size_t n = 0; n < bias_z.delta[p].size(); ++n)
        worst = std::max(worst, bias_z.delta[p][n] - bias_z.deltat[p][n]);
    add("averaged bias below fixed", worst, 1e-12);
  }
  add("bias basis symmetry", table_max_abs_diff(bias_z, bias_x), 1e-12);

  const double probe_km = 25.0;
  {
    double worst = 0.0;
    for (int w = 0; w < 3; ++w) {
      const WindowObservables oz = window_observables(cfg.transmitter, cfg.channel, probe_km,
                                                      static_cast<Window>(w), Basis::Z, cfg.quad);
      const WindowObservables ox = window_observables(cfg.transmitter, cfg.channel, probe_km,
                                                      static_cast<Window>(w), Basis::X, cfg.quad);
      worst = std::max(worst, std::abs(oz.gain - ox.gain));
      worst = std::max(worst, std::abs(oz.error_rate - ox.error_rate));
      worst = std::max(worst, std::abs(oz.probability - ox.probability));
    }
    add("window observable basis symmetry", worst, 1e-9);
  }

  {
    double worst = std::numeric_limits<double>::infinity();
    try {
      DecoyProblem problem =
          build_decoy_problem(cfg.transmitter, cfg.channel, probe_km, Basis::Z, cfg.n_cut, cfg.quad);
      problem.bias = bias_z;
      const DecoyBounds bounds = estimate_single_photon(problem);
      const double eta = channel_eta(cfg.channel, probe_km);
      const double y1 = n_photon_yield(eta, cfg.channel.p_dark, 1);
      const double e1 = n_photon_error(cfg.transmitter, cfg.channel, probe_km, Window::signal,
                                       Basis::Z, 1, cfg.quad);
      worst = std::max(bounds.y1_low - y1, e1 - bounds.e1_up);
    } catch (const std::exception&) {
      // infeasible or singular program counts as a failure of this check
    }
    add("exact single photon inside bounds", worst, 1e-9);
  }

  {
    const size_t n = std::max<std::uint64_t>(cfg.mc_samples, 100000);
    const PdfCheckReport pdf = pdf_histogram_check(cfg.transmitter, n, 40, cfg.seed);
    add("sampled support inside i_max", pdf.support_ok ? 0.0 : 1.0, 0.5);
    add("histogram max abs z", pdf.max_abs_z, 5.0);
    add("phi marginal ks", pdf.ks_phi, 1.6276);
  }

  {
    const McObservables mc = end_to_end_mc(cfg.transmitter, cfg.channel, probe_km, Basis::Z,
                                           cfg.mc_samples, mix64(cfg.seed ^ 0x6532656d63000000ull));
    double worst_prob = 0.0;
    for (int w = 0; w < 3; ++w) {
      const double p = region_probability(cfg.transmitter, static_cast<Window>(w), Basis::Z,
                                          cfg.quad);
      const double se = std::sqrt(std::max(p * (1.0 - p) / static_cast<double>(mc.samples), 1e-30));
      worst_prob = std::max(worst_prob, std::abs(mc.window[w].probability - p) / se);
    }
    add("mc window probability z", worst_prob, 5.0);

    const auto s = static_cast<size_t>(static_cast<int>(Window::signal));
    const WindowObservables obs = window_observables(cfg.transmitter, cfg.channel, probe_km,
                                                     Window::signal, Basis::Z, cfg.quad);
    const McWindow& win = mc.window[s];
    const double accepted = std::max<double>(static_cast<double>(win.accepted), 1.0);
    const double gain_se = std::max(win.gain_se, std::sqrt(obs.gain / accepted));
    add("mc signal gain z", std::abs(win.gain - obs.gain) / gain_se, 5.0);
    const double err_se = std::max(win.error_se, std::sqrt(obs.error_rate / accepted));
    add("mc signal error z", std::abs(win.error_rate - obs.error_rate) / err_se, 5.0);
  }

  report.pass = true;
  for (const ValidationCheck& c : report.checks) report.pass = report.pass && c.pass;
  return report;
}

}  // namespace pqkd
