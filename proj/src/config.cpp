#include "ionkick/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ionkick/errors.hpp"
#include "ionkick/textio.hpp"

namespace ionkick {

using nlohmann::json;

const char* const known_experiments[8] = {
    "sdk-map",    "robustness", "delay-scan",       "gate-solve",
    "gate-scan",  "trajectory", "waveform-compile", "validate"};

bool is_known_experiment(const std::string& name) {
  for (const char* e : known_experiments)
    if (name == e) return true;
  return false;
}

namespace {

// Strict object view: every access marks a key as consumed, and done()
// rejects anything left over.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw ConfigError("config: " + (path_.empty() ? "top level" : path_) +
                        " must be an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  double number(const char* key, double fallback) {
    if (!has(key)) return fallback;
    return require_number(key);
  }

  double require_number(const char* key) {
    const json& v = get(key);
    if (!v.is_number())
      throw ConfigError("config: " + qualify(key) + " must be a number");
    return v.get<double>();
  }

  int integer(const char* key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_number_integer())
      throw ConfigError("config: " + qualify(key) + " must be an integer");
    return v.get<int>();
  }

  bool flag(const char* key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_boolean())
      throw ConfigError("config: " + qualify(key) + " must be a boolean");
    return v.get<bool>();
  }

  std::string text(const char* key, const std::string& fallback) {
    if (!has(key)) return fallback;
    return require_text(key);
  }

  std::string require_text(const char* key) {
    const json& v = get(key);
    if (!v.is_string())
      throw ConfigError("config: " + qualify(key) + " must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const char* key) {
    const json& v = get(key);
    if (!v.is_array())
      throw ConfigError("config: " + qualify(key) + " must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number())
        throw ConfigError("config: " + qualify(key) + " must hold numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::optional<Section> section(const char* key) {
    if (!has(key)) return std::nullopt;
    return Section(get(key), qualify(key));
  }

  void done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!consumed_.count(it.key()))
        throw ConfigError("config: unknown key " + qualify(it.key().c_str()));
  }

 private:
  const json& get(const char* key) {
    consumed_.insert(key);
    return j_.at(key);
  }
  std::string qualify(const char* key) const {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> consumed_;
};

json parse_override_value(const std::string& text) {
  json v = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (v.is_discarded()) return json(text);  // bare string
  return v;
}

void apply_override(json& root, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like section.key=value: " + spec);
  const std::string path = spec.substr(0, eq);
  json* node = &root;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    const std::string part = path.substr(start, dot - start);
    if (part.empty()) throw ConfigError("override has an empty key: " + spec);
    if (dot == std::string::npos) {
      (*node)[part] = parse_override_value(spec.substr(eq + 1));
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

SweepAxis parse_axis(Section s) {
  SweepAxis ax;
  ax.parameter = s.require_text("parameter");
  ax.min = s.require_number("min");
  ax.max = s.require_number("max");
  ax.count = s.integer("count", 41);
  const std::string scale = s.text("scale", "linear");
  if (scale == "linear") ax.scale = AxisScale::Linear;
  else if (scale == "log") ax.scale = AxisScale::Log;
  else throw ConfigError("config: sweep scale must be linear or log");
  s.done();
  ax.validate();
  return ax;
}

}  // namespace

RunConfig parse_config(const std::string& json_text,
                       const std::vector<std::string>& overrides) {
  json root = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) throw ConfigError("config: not valid JSON");
  for (const auto& o : overrides) apply_override(root, o);

  RunConfig cfg;
  Section top(root, "");

  const int ver = top.integer("schema_version", -1);
  if (ver == -1) throw ConfigError("config: schema_version is required");
  if (ver != config_schema_version)
    throw ConfigError("config: schema_version " + std::to_string(ver) +
                      " unsupported (expected " +
                      std::to_string(config_schema_version) + ")");

  cfg.experiment = top.require_text("experiment");
  if (!is_known_experiment(cfg.experiment))
    throw ConfigError("config: unknown experiment " + cfg.experiment);

  if (auto s = top.section("trap")) {
    cfg.trap.omega = s->number("omega_rad_per_s", cfg.trap.omega);
    cfg.trap.eta = s->number("eta", cfg.trap.eta);
    cfg.trap.nbar_com = s->number("nbar_com", cfg.trap.nbar_com);
    cfg.trap.nbar_stretch = s->number("nbar_stretch", cfg.trap.nbar_stretch);
    s->done();
    cfg.trap.validate();
  }

  if (auto s = top.section("protocol")) {
    cfg.protocol = protocol_from_string(s->text("name", "stirap"));
    OperatingPoint ref = reference_operating_point(cfg.protocol);
    cfg.op = ref;
    cfg.op.tau = s->number("tau_s", ref.tau);
    cfg.op.omega0 = s->number("peak_rabi_rad_per_s", ref.omega0);
    if (cfg.op.omega0 == 0.0) cfg.op.omega0 = ref.omega0;  // 0: calibrated reference
    cfg.op.delta_single = two_pi * s->number("detuning_hz", ref.delta_single / two_pi);
    cfg.op.delta0 = two_pi * s->number("chirp_amplitude_hz", ref.delta0 / two_pi);
    cfg.op.t_d = s->number("stokes_delay_s", ref.t_d);
    cfg.op.omega_e = two_pi * s->number("envelope_freq_hz", ref.omega_e / two_pi);
    s->done();
  } else {
    cfg.op = reference_operating_point(cfg.protocol);
  }

  cfg.pulse_pairs = top.integer("pulse_pairs", cfg.pulse_pairs);
  if (cfg.pulse_pairs < 1) throw ConfigError("config: pulse_pairs must be >= 1");
  cfg.tolerance = top.number("tolerance", cfg.tolerance);
  if (!(cfg.tolerance > 0.0)) throw ConfigError("config: tolerance must be > 0");

  if (auto s = top.section("sweep_x")) cfg.sweep_x = parse_axis(*s);
  if (auto s = top.section("sweep_y")) cfg.sweep_y = parse_axis(*s);

  if (auto s = top.section("perturbation")) {
    cfg.perturbation = perturbation_from_string(s->text("kind", "intensity"));
    cfg.perturbation_span = s->number("span", cfg.perturbation_span);
    cfg.perturbation_count = s->integer("count", cfg.perturbation_count);
    cfg.reference_detuning =
        two_pi * s->number("reference_detuning_hz", cfg.reference_detuning / two_pi);
    s->done();
    if (cfg.perturbation_count < 2)
      throw ConfigError("config: perturbation.count must be >= 2");
    if (!(cfg.perturbation_span > 0.0))
      throw ConfigError("config: perturbation.span must be > 0");
  }

  if (auto s = top.section("delay_scan")) {
    cfg.delay_span = s->number("span_s", cfg.delay_span);
    cfg.delay_count = s->integer("count", cfg.delay_count);
    s->done();
    if (cfg.delay_count < 2) throw ConfigError("config: delay_scan.count must be >= 2");
    if (!(cfg.delay_span > 0.0))
      throw ConfigError("config: delay_scan.span_s must be > 0");
  }

  if (auto s = top.section("gate")) {
    cfg.scheme = scheme_from_string(s->text("scheme", "gzc"));
    cfg.n = s->integer("n", cfg.n);
    cfg.n_min = s->integer("n_min", cfg.n_min);
    cfg.n_max = s->integer("n_max", cfg.n_max);
    if (s->has("f_bw_hz")) cfg.f_bw = s->numbers("f_bw_hz");
    if (s->has("seed_s")) {
      const auto v = s->numbers("seed_s");
      if (v.size() != 3)
        throw ConfigError("config: gate.seed_s must hold exactly 3 times");
      cfg.solver_seed = std::array<double, 3>{v[0], v[1], v[2]};
    }
    cfg.grid_origin = s->number("grid_origin_s", cfg.grid_origin);
    cfg.run_fock_oracle = s->flag("fock_oracle", cfg.run_fock_oracle);
    s->done();
    if (cfg.n < 1 || cfg.n_min < 1 || cfg.n_max < cfg.n_min)
      throw ConfigError("config: gate repetition bounds must satisfy 1 <= n_min <= n_max");
    for (double f : cfg.f_bw)
      if (!(f > 0.0)) throw ConfigError("config: gate.f_bw_hz must be > 0");
  }

  if (auto s = top.section("waveform")) {
    cfg.sample_rate = s->number("sample_rate_hz", cfg.sample_rate);
    cfg.v_pi = s->number("v_pi_v", cfg.v_pi);
    cfg.rf_base = two_pi * s->number("rf_base_hz", cfg.rf_base / two_pi);
    cfg.carrier = two_pi * s->number("carrier_hz", cfg.carrier / two_pi);
    cfg.emit_binary = s->flag("binary", cfg.emit_binary);
    s->done();
  }

  if (auto s = top.section("output")) {
    cfg.basename = s->text("basename", cfg.basename);
    s->done();
    if (cfg.basename.empty() ||
        cfg.basename.find('/') != std::string::npos)
      throw ConfigError("config: output.basename must be a plain file stem");
  }

  cfg.dump_states = top.flag("dump_states", cfg.dump_states);
  cfg.threads = top.integer("threads", cfg.threads);
  if (cfg.threads < 0) throw ConfigError("config: threads must be >= 0");

  top.done();

  // canonical form: nlohmann objects iterate in sorted key order, so a dump
  // of the merged tree is stable across platforms and field ordering
  cfg.canonical = root.dump();
  cfg.config_hash = fnv1a64(cfg.canonical);
  return cfg;
}

RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string example_config_text() {
  return R"({
  "schema_version": 1,
  "experiment": "delay-scan",
  "trap": {"omega_rad_per_s": 6.283185307179586e6, "eta": 0.3},
  "protocol": {"name": "stirap", "tau_s": 1e-9},
  "pulse_pairs": 10,
  "delay_scan": {"span_s": 2e-10, "count": 41},
  "output": {"basename": "delay"}
}
)";
}

}  // namespace ionkick
