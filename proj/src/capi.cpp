#include "ionkick/ionkick.h"

#include <cstring>
#include <string>
#include <vector>

#include "ionkick/config.hpp"
#include "ionkick/errors.hpp"
#include "ionkick/experiments.hpp"
#include "ionkick/fastgate.hpp"
#include "ionkick/sdk.hpp"
#include "ionkick/textio.hpp"
#include "ionkick/waveform.hpp"

struct ik_context {
  std::string error;
};

struct ik_sequence {
  ionkick::SolveReport solve;
  ionkick::TrapConfig trap;
};

namespace {

void copy_out(const std::string& s, char* out, size_t cap) {
  if (!out || cap == 0) return;
  const size_t n = std::min(s.size(), cap - 1);
  std::memcpy(out, s.data(), n);
  out[n] = '\0';
}

// Runs fn, translating exceptions into status codes + a context message.
template <typename Fn>
int guarded(ik_context* ctx, Fn&& fn) {
  if (!ctx) return IK_ERR_CONFIG;
  ctx->error.clear();
  try {
    fn();
    return IK_OK;
  } catch (const ionkick::Error& e) {
    ctx->error = e.what();
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    ctx->error = e.what();
    return IK_ERR_NUMERIC;
  }
}

std::vector<std::string> collect(const char* const* overrides, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) {
    if (!overrides || !overrides[i])
      throw ionkick::ConfigError("null override string");
    out.emplace_back(overrides[i]);
  }
  return out;
}

int run_parsed(ik_context* ctx, ionkick::RunConfig cfg, const char* out_dir,
               int threads, char* summary_out, size_t summary_cap) {
  return guarded(ctx, [&] {
    const auto res = ionkick::run_experiment(
        cfg, out_dir ? std::string(out_dir) : std::string(), threads);
    copy_out(res.summary, summary_out, summary_cap);
  });
}

}  // namespace

extern "C" {

ik_context* ik_context_create(void) { return new (std::nothrow) ik_context; }

void ik_context_destroy(ik_context* ctx) { delete ctx; }

const char* ik_last_error(const ik_context* ctx) {
  return ctx ? ctx->error.c_str() : "null context";
}

const char* ik_version(void) { return "1.0.0"; }

const char* ik_example_config(void) {
  static const std::string text = ionkick::example_config_text();
  return text.c_str();
}

int ik_validate_config(ik_context* ctx, const char* json_text,
                       const char* const* overrides, int n_overrides,
                       char* hash_out, size_t hash_cap) {
  return guarded(ctx, [&] {
    if (!json_text) throw ionkick::ConfigError("null config text");
    const auto cfg =
        ionkick::parse_config(json_text, collect(overrides, n_overrides));
    copy_out(ionkick::hex64(cfg.config_hash), hash_out, hash_cap);
  });
}

int ik_run_config(ik_context* ctx, const char* json_text,
                  const char* const* overrides, int n_overrides,
                  const char* out_dir, int threads, char* summary_out,
                  size_t summary_cap) {
  ionkick::RunConfig cfg;
  const int st = guarded(ctx, [&] {
    if (!json_text) throw ionkick::ConfigError("null config text");
    cfg = ionkick::parse_config(json_text, collect(overrides, n_overrides));
  });
  if (st != IK_OK) return st;
  return run_parsed(ctx, std::move(cfg), out_dir, threads, summary_out,
                    summary_cap);
}

int ik_run_file(ik_context* ctx, const char* config_path,
                const char* const* overrides, int n_overrides,
                const char* out_dir, int threads, char* summary_out,
                size_t summary_cap) {
  ionkick::RunConfig cfg;
  const int st = guarded(ctx, [&] {
    if (!config_path) throw ionkick::ConfigError("null config path");
    cfg = ionkick::load_config(config_path, collect(overrides, n_overrides));
  });
  if (st != IK_OK) return st;
  return run_parsed(ctx, std::move(cfg), out_dir, threads, summary_out,
                    summary_cap);
}

double ik_cumulative_fidelity(double eps, int np) {
  return ionkick::cumulative_fidelity(eps, np);
}

ik_sequence* ik_sequence_solve(ik_context* ctx, const char* scheme, int n,
                               double omega, double eta, const double* seed3) {
  ik_sequence* seq = nullptr;
  const int st = guarded(ctx, [&] {
    if (!scheme) throw ionkick::ConfigError("null scheme name");
    ionkick::TrapConfig trap{omega, eta};
    trap.validate();
    std::optional<std::array<double, 3>> seed;
    if (seed3) seed = std::array<double, 3>{seed3[0], seed3[1], seed3[2]};
    auto solve = ionkick::solve_timings(ionkick::scheme_from_string(scheme), n,
                                        trap, seed);
    seq = new ik_sequence{std::move(solve), trap};
  });
  return st == IK_OK ? seq : nullptr;
}

void ik_sequence_destroy(ik_sequence* seq) { delete seq; }

int ik_sequence_report(ik_context* ctx, const ik_sequence* seq,
                       double out[IK_REP_COUNT]) {
  return guarded(ctx, [&] {
    if (!seq || !out) throw ionkick::ConfigError("null sequence or output");
    const auto rep = ionkick::evaluate(seq->solve.sequence, seq->trap);
    out[IK_REP_TAU1] = seq->solve.taus[0];
    out[IK_REP_TAU2] = seq->solve.taus[1];
    out[IK_REP_TAU3] = seq->solve.taus[2];
    out[IK_REP_RESIDUAL] = seq->solve.residual_norm;
    out[IK_REP_GATE_TIME] = rep.gate_time;
    out[IK_REP_PHASE] = rep.phase;
    out[IK_REP_ALPHA_COM_ABS] = std::abs(rep.alpha_com);
    out[IK_REP_ALPHA_STRETCH_ABS] = std::abs(rep.alpha_stretch);
    out[IK_REP_ONE_MINUS_FO] = 1.0 - rep.fidelity_timing;
    out[IK_REP_PULSE_PAIRS] =
        static_cast<double>(seq->solve.sequence.pulse_pairs());
  });
}

int ik_bessel_sidebands(ik_context* ctx, double beta, int n_max, double* out) {
  return guarded(ctx, [&] {
    if (!out || n_max < 0)
      throw ionkick::ConfigError("null output or negative order");
    const auto bands = ionkick::phase_eom_spectrum(beta, n_max);
    for (const auto& b : bands) out[b.order + n_max] = b.amplitude;
  });
}

}  // extern "C"
