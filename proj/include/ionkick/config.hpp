#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ionkick/constants.hpp"
#include "ionkick/fastgate.hpp"
#include "ionkick/sdk.hpp"

namespace ionkick {

inline constexpr int config_schema_version = 1;

// One experiment run, fully described. Parsed from a JSON file whose physical
// keys carry explicit unit suffixes (_s, _hz, _rad_per_s, ...); unknown keys
// are rejected and the schema version is checked.
struct RunConfig {
  std::string experiment;

  TrapConfig trap{two_pi * 1e6, 0.3};

  // Protocol operating point; omega0 == 0 selects the calibrated reference.
  Protocol protocol = Protocol::STIRAP;
  OperatingPoint op{};
  int pulse_pairs = 10;
  double tolerance = 1e-10;

  // sdk-map
  std::optional<SweepAxis> sweep_x;
  std::optional<SweepAxis> sweep_y;

  // robustness
  PerturbationKind perturbation = PerturbationKind::Intensity;
  double perturbation_span = 0.1;   // +/- relative span
  int perturbation_count = 21;
  double reference_detuning = two_pi * 400e9;

  // delay-scan
  double delay_span = 200e-12;      // +/- absolute span, s
  int delay_count = 41;

  // gate-solve / gate-scan / trajectory
  Scheme scheme = Scheme::GZC;
  int n = 1;
  int n_min = 1;
  int n_max = 4;
  std::vector<double> f_bw = {1e9};
  std::optional<std::array<double, 3>> solver_seed;
  double grid_origin = 0.0;
  bool run_fock_oracle = false;

  // waveform-compile
  double sample_rate = 100e9;
  double v_pi = 1.0;
  double rf_base = two_pi * 4.2e9;
  double carrier = two_pi * 2.8e14;
  bool emit_binary = true;

  // optional 3-level state-trajectory dump of the unperturbed protocol pulse
  bool dump_states = false;

  std::string basename = "run";
  int threads = 0;  // 0: decide at runtime

  std::uint64_t config_hash = 0;  // FNV-1a over the canonical form below
  std::string canonical;
};

extern const char* const known_experiments[8];
bool is_known_experiment(const std::string& name);

// Parses and validates; overrides are dotted `section.key=value` pairs applied
// before validation (value parsed as JSON, falling back to a bare string).
RunConfig parse_config(const std::string& json_text,
                       const std::vector<std::string>& overrides = {});

RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides = {});

// A complete, commented-free example config accepted by parse_config.
std::string example_config_text();

}  // namespace ionkick
