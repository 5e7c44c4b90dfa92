#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pqkd/channel.hpp"
#include "pqkd/distance.hpp"
#include "pqkd/keyrate.hpp"
#include "pqkd/quadrature.hpp"
#include "pqkd/transmitter.hpp"

namespace pqkd {

inline constexpr const char* kToolVersion = "1.0.0";

enum class RunMode { fixed, optimize };

// Everything a scan needs, loadable from a single JSON document. Unknown keys
// are rejected so typos surface as errors instead of silently using defaults.
struct RunConfig {
  TransmitterParams transmitter;
  ChannelParams channel;
  double f_ec = 1.16;
  int n_cut = 3;
  QuadSpec quad;

  double grid_start_km = 0.0;
  double grid_stop_km = 100.0;
  double grid_step_km = 10.0;

  RunMode mode = RunMode::fixed;
  bool baselines = true;

  bool mc_enabled = false;
  std::uint64_t mc_samples = 1000000;

  std::uint64_t seed = 1;
  std::string out_prefix = "scan";

  void validate() const;
  std::vector<double> distances() const;

  // Canonical serialization: sorted keys, fixed float formatting. The config
  // hash is FNV-1a over exactly these bytes.
  std::string to_json() const;
  std::uint64_t hash() const;

  // Throws std::runtime_error with a line/column anchored message on malformed
  // JSON, and a key-anchored message on unknown keys or out-of-range values.
  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_json_file(const std::string& path);
};

std::uint64_t fnv1a64(const std::string& bytes);

struct ScanOutputs {
  std::string csv_path;
  std::string sidecar_path;
  int rows = 0;
};

// Runs the distance scan and writes <out_prefix>.csv plus <out_prefix>.json.
// Output bytes depend only on the config (and seed), never on wall time, so
// reruns are byte-identical. Numerical failures are rethrown with the
// offending distance in the message.
ScanOutputs run_scan(const RunConfig& cfg);

struct ValidationCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;  // measured statistic
  double bound = 0.0;  // threshold it is compared against
};

struct ValidationReport {
  bool pass = false;
  std::vector<ValidationCheck> checks;
  std::string to_json() const;
};

// Test seam: lets a test corrupt intermediate tables to prove the suite
// notices. Production callers leave it empty.
struct ValidationHooks {
  std::function<void(BiasBounds&)> corrupt_bias;
};

// Self-check suite: closed-form pdf normalization, the explicit mode-map
// oracle, a sampled histogram test, structural invariants of the bias tables,
// basis symmetry of the window observables, and feasibility of the exact
// yields in the decoy program. Gates are sized so any seed passes.
ValidationReport run_validation(const RunConfig& cfg, const ValidationHooks* hooks = nullptr);

}  // namespace pqkd
