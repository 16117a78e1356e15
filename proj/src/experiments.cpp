#include "ionkick/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ionkick/dynamics.hpp"
#include "ionkick/errors.hpp"
#include "ionkick/fastgate.hpp"
#include "ionkick/levels.hpp"
#include "ionkick/sdk.hpp"
#include "ionkick/textio.hpp"
#include "ionkick/waveform.hpp"

namespace ionkick {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int effective_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::string header_line(const RunConfig& cfg) {
  return "# ionkick schema_version=" + std::to_string(config_schema_version) +
         " experiment=" + cfg.experiment + " config_hash=" +
         hex64(cfg.config_hash) + "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation
  if (!out) throw IoError("cannot open output file: " + path);
  return out;
}

std::string fmt(double v) {
  return std::isnan(v) ? std::string("nan") : format_double(v);
}

struct Emitter {
  const RunConfig& cfg;
  fs::path dir;
  ExperimentResult result;

  std::string path_for(const std::string& suffix) {
    return (dir / (cfg.basename + suffix)).string();
  }
  std::ofstream start(const std::string& suffix) {
    const std::string p = path_for(suffix);
    auto out = open_out(p);
    out << header_line(cfg);
    result.files.push_back(p);
    return out;
  }
  void finish(std::ofstream& out, const std::string& what) {
    out.flush();
    if (!out) throw IoError("write failed: " + what);
  }
};

void write_manifest(Emitter& em) {
  json m;
  m["schema_version"] = config_schema_version;
  m["experiment"] = em.cfg.experiment;
  m["config_hash"] = hex64(em.cfg.config_hash);
  m["config"] = json::parse(em.cfg.canonical);
  m["outputs"] = em.result.files;
  auto out = open_out(em.path_for("_manifest.json"));
  out << m.dump(2) << "\n";
  em.finish(out, "manifest");
  em.result.files.push_back(em.path_for("_manifest.json"));
}

void maybe_dump_states(Emitter& em) {
  if (!em.cfg.dump_states) return;
  const auto lambda = build_lambda_system(yb171::hyperfine_splitting, 0.0);
  PropagateOptions opt;
  opt.tol = em.cfg.tolerance;
  opt.store_trajectory = true;
  const auto prop = propagate(lambda, make_pulse(em.cfg.op), opt);
  auto out = em.start("_states.csv");
  prop.write_csv(out);
  em.finish(out, "state trajectory");
}

void run_sdk_map(Emitter& em, int threads) {
  const RunConfig& cfg = em.cfg;
  if (!cfg.sweep_x || !cfg.sweep_y)
    throw ConfigError("sdk-map requires sweep_x and sweep_y sections");
  const FidelityMap map =
      fidelity_map(cfg.op, *cfg.sweep_x, *cfg.sweep_y, threads, cfg.tolerance);
  auto out = em.start("_map.csv");
  out << "x,y,epsilon\n";
  int failures = 0;
  for (const auto& c : map.cells) {
    out << fmt(c.x) << "," << fmt(c.y) << "," << fmt(c.epsilon) << "\n";
    if (!c.error.empty()) ++failures;
  }
  em.finish(out, "map");
  maybe_dump_states(em);
  std::ostringstream s;
  s << "sdk-map " << to_string(cfg.protocol) << ": " << map.cells.size()
    << " cells (" << cfg.sweep_x->parameter << " x " << cfg.sweep_y->parameter
    << "), " << failures << " failed";
  em.result.summary = s.str();
}

std::vector<double> symmetric_grid(double span, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i)
    v[i] = -span + 2.0 * span * i / (count - 1);
  return v;
}

void write_curve(Emitter& em, const std::string& suffix,
                 const RobustnessCurve& curve) {
  auto out = em.start(suffix);
  out << "perturbation,epsilon,one_minus_Fs\n";
  for (const auto& p : curve.samples)
    out << fmt(p.perturbation) << "," << fmt(p.epsilon) << ","
        << fmt(p.one_minus_fs) << "\n";
  em.finish(out, "curve");
}

void run_robustness(Emitter& em, int threads) {
  const RunConfig& cfg = em.cfg;
  const auto curve = robustness_sweep(
      cfg.op, cfg.perturbation,
      symmetric_grid(cfg.perturbation_span, cfg.perturbation_count),
      cfg.pulse_pairs, cfg.reference_detuning, threads, cfg.tolerance);
  write_curve(em, "_robustness.csv", curve);
  maybe_dump_states(em);
  double worst = 0.0;
  for (const auto& p : curve.samples) worst = std::max(worst, p.one_minus_fs);
  em.result.summary = "robustness " + to_string(cfg.protocol) + " " +
                      to_string(cfg.perturbation) + ": max 1-Fs " + fmt(worst);
}

void run_delay_scan(Emitter& em, int threads) {
  const RunConfig& cfg = em.cfg;
  if (cfg.protocol != Protocol::STIRAP)
    throw ConfigError("delay-scan applies to the stirap protocol");
  const auto curve = delay_sensitivity(
      cfg.op, symmetric_grid(cfg.delay_span, cfg.delay_count), cfg.pulse_pairs,
      threads, cfg.tolerance);
  write_curve(em, "_delay.csv", curve);
  maybe_dump_states(em);
  double worst = 0.0;
  for (const auto& p : curve.samples) worst = std::max(worst, p.one_minus_fs);
  em.result.summary = "delay-scan: " + std::to_string(curve.samples.size()) +
                      " points, max 1-Fs " + fmt(worst);
}

json report_json(const GateReport& rep) {
  json j;
  j["alpha_com"] = {rep.alpha_com.real(), rep.alpha_com.imag()};
  j["alpha_stretch"] = {rep.alpha_stretch.real(), rep.alpha_stretch.imag()};
  j["phase_rad"] = rep.phase;
  j["phase_mismatch_rad"] = rep.phase_mismatch;
  j["fidelity_timing"] = rep.fidelity_timing;
  j["gate_time_s"] = rep.gate_time;
  return j;
}

void run_gate_solve(Emitter& em, int /*threads*/) {
  const RunConfig& cfg = em.cfg;
  const SolveReport sol =
      solve_timings(cfg.scheme, cfg.n, cfg.trap, cfg.solver_seed);
  const GateReport rep = evaluate(sol.sequence, cfg.trap);

  json j;
  j["scheme"] = to_string(cfg.scheme);
  j["n"] = cfg.n;
  j["pulse_pairs"] = sol.sequence.pulse_pairs();
  j["taus_s"] = {sol.taus[0], sol.taus[1], sol.taus[2]};
  j["residual_norm"] = sol.residual_norm;
  j["iterations"] = sol.iterations;
  j["restarts"] = sol.restarts;
  j["report"] = report_json(rep);
  if (cfg.run_fock_oracle) {
    const FockOracleResult orc = fock_oracle(sol.sequence, cfg.trap);
    j["fock_oracle"] = {{"alpha_com_abs", orc.alpha_com_abs},
                        {"alpha_stretch_abs", orc.alpha_stretch_abs},
                        {"phase_rad", orc.phase},
                        {"return_overlap_com", orc.return_overlap_com},
                        {"return_overlap_stretch", orc.return_overlap_stretch},
                        {"truncation", orc.truncation_used}};
  }
  auto out = em.start("_gate.json");
  out << j.dump(2) << "\n";
  em.finish(out, "gate report");
  std::ostringstream s;
  s << "gate-solve " << to_string(cfg.scheme) << " n=" << cfg.n << ": T="
    << fmt(rep.gate_time) << " s, residual " << fmt(sol.residual_norm);
  em.result.summary = s.str();
}

void run_gate_scan(Emitter& em, int threads) {
  const RunConfig& cfg = em.cfg;
  std::vector<int> ns;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) ns.push_back(n);
  const auto rows = repetition_scan(cfg.scheme, ns, cfg.f_bw, cfg.trap, threads);
  auto out = em.start("_scan.csv");
  out << "n,f_bw_hz,gate_time_s,alpha_c_abs,alpha_s_abs,delta_phi,one_minus_Fo\n";
  for (const auto& r : rows)
    out << r.n << "," << fmt(r.f_bw) << "," << fmt(r.gate_time) << ","
        << fmt(r.alpha_com_abs) << "," << fmt(r.alpha_stretch_abs) << ","
        << fmt(r.phase_mismatch) << "," << fmt(r.one_minus_fo) << "\n";
  em.finish(out, "scan");
  em.result.summary = "gate-scan " + to_string(cfg.scheme) + ": " +
                      std::to_string(rows.size()) + " rows";
}

void write_trajectory(Emitter& em, const std::string& suffix,
                      const KickSequence& seq) {
  const ClosureResult c = closure(seq, em.cfg.trap);
  auto out = em.start(suffix);
  out << "mode,step,re,im\n";
  for (size_t i = 0; i < c.trajectory.com.size(); ++i)
    out << "com," << i << "," << fmt(c.trajectory.com[i].real()) << ","
        << fmt(c.trajectory.com[i].imag()) << "\n";
  for (size_t i = 0; i < c.trajectory.stretch.size(); ++i)
    out << "stretch," << i << "," << fmt(c.trajectory.stretch[i].real()) << ","
        << fmt(c.trajectory.stretch[i].imag()) << "\n";
  em.finish(out, "trajectory");
}

void run_trajectory(Emitter& em, int /*threads*/) {
  const RunConfig& cfg = em.cfg;
  const SolveReport sol =
      solve_timings(cfg.scheme, cfg.n, cfg.trap, cfg.solver_seed);
  write_trajectory(em, "_trajectory.csv", sol.sequence);
  std::string note;
  if (!cfg.f_bw.empty()) {
    const DiscretizeResult disc =
        discretize(sol.sequence, cfg.f_bw.front(), cfg.grid_origin);
    write_trajectory(em, "_trajectory_discretized.csv", disc.sequence);
    if (!disc.warnings.empty())
      note = ", " + std::to_string(disc.warnings.size()) + " grid collisions";
  }
  em.result.summary = "trajectory " + to_string(cfg.scheme) + " n=" +
                      std::to_string(cfg.n) + note;
}

void run_waveform(Emitter& em, int /*threads*/) {
  const RunConfig& cfg = em.cfg;
  const ProtocolPulse pulse = make_pulse(cfg.op);
  const WaveformProgram prog = compile_protocol(pulse, cfg.sample_rate,
                                                cfg.v_pi, cfg.rf_base,
                                                cfg.carrier);
  for (int c = 0; c < 2; ++c) {
    auto out = em.start("_ch" + std::to_string(c) + ".csv");
    write_channel_csv(out, prog, c);
    em.finish(out, "waveform channel");
  }
  if (cfg.emit_binary) {
    const std::string p = em.path_for(".ionkwf");
    auto out = open_out(p);
    write_program_binary(out, prog);
    em.finish(out, "waveform binary");
    em.result.files.push_back(p);
  }
  std::ostringstream s;
  s << "waveform-compile " << to_string(cfg.protocol) << ": " << prog.samples()
    << " samples/channel, path delay " << fmt(prog.path_delay) << " s";
  em.result.summary = s.str();
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& cfg, const std::string& out_dir,
                                int threads) {
  const int nthreads = effective_threads(threads);
  Emitter em{cfg, fs::path(out_dir.empty() ? "." : out_dir), {}};

  if (cfg.experiment == "validate") {
    em.result.summary = "config ok (hash " + hex64(cfg.config_hash) + ")";
    return em.result;
  }

  std::error_code ec;
  fs::create_directories(em.dir, ec);
  if (ec) throw IoError("cannot create output directory: " + em.dir.string());

  if (cfg.experiment == "sdk-map") run_sdk_map(em, nthreads);
  else if (cfg.experiment == "robustness") run_robustness(em, nthreads);
  else if (cfg.experiment == "delay-scan") run_delay_scan(em, nthreads);
  else if (cfg.experiment == "gate-solve") run_gate_solve(em, nthreads);
  else if (cfg.experiment == "gate-scan") run_gate_scan(em, nthreads);
  else if (cfg.experiment == "trajectory") run_trajectory(em, nthreads);
  else if (cfg.experiment == "waveform-compile") run_waveform(em, nthreads);
  else throw ConfigError("unknown experiment: " + cfg.experiment);

  write_manifest(em);
  return em.result;
}

}  // namespace ionkick
