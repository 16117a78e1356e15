// Command-line front end. Talks to the engine exclusively through the C API.
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ionkick/ionkick.h"

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  int threads = 0;
};

int threads_from_env() {
  const char* env = std::getenv("IONKICK_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 0) {
    std::fprintf(stderr, "ionkick: ignoring invalid IONKICK_THREADS=%s\n", env);
    return 0;
  }
  return static_cast<int>(v);
}

int run(const char* experiment, const Options& opt) {
  std::unique_ptr<ik_context, decltype(&ik_context_destroy)> ctx(
      ik_context_create(), ik_context_destroy);
  if (!ctx) {
    std::fprintf(stderr, "ionkick: out of memory\n");
    return IK_ERR_NUMERIC;
  }

  std::vector<std::string> overrides = opt.overrides;
  overrides.push_back(std::string("experiment=") + experiment);
  std::vector<const char*> raw;
  for (const auto& o : overrides) raw.push_back(o.c_str());

  const int threads = opt.threads > 0 ? opt.threads : threads_from_env();

  char summary[512] = {0};
  const int st = ik_run_file(ctx.get(), opt.config_path.c_str(), raw.data(),
                             static_cast<int>(raw.size()),
                             opt.out_dir.empty() ? nullptr : opt.out_dir.c_str(),
                             threads, summary, sizeof summary);
  if (st != IK_OK) {
    std::fprintf(stderr, "ionkick: %s\n", ik_last_error(ctx.get()));
    return st;
  }
  std::printf("%s\n", summary);
  return 0;
}

void add_subcommand(CLI::App& app, Options& opt, const char* name,
                    const char* help) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("-c,--config", opt.config_path, "JSON configuration file")
      ->required();
  sub->add_option("-s,--set", opt.overrides,
                  "override a config value (section.key=value, repeatable)");
  sub->add_option("-o,--out-dir", opt.out_dir,
                  "output directory (default: current directory)");
  sub->add_option("-j,--threads", opt.threads,
                  "worker threads (default: IONKICK_THREADS or all cores)");
  sub->callback([&opt, name] { std::exit(run(name, opt)); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ionkick: ultrafast trapped-ion gate simulation and synthesis"};
  app.set_version_flag("--version", ik_version());
  app.require_subcommand(0, 1);

  bool example = false;
  app.add_flag("--example-config", example,
               "print a complete example configuration and exit");

  Options opt;
  add_subcommand(app, opt, "sdk-map",
                 "flip-error map over two protocol parameters");
  add_subcommand(app, opt, "robustness",
                 "quasi-static intensity/detuning perturbation sweep");
  add_subcommand(app, opt, "delay-scan",
                 "pulse-delay sensitivity of the stirap protocol");
  add_subcommand(app, opt, "gate-solve",
                 "solve kick timings of one entangling gate");
  add_subcommand(app, opt, "gate-scan",
                 "gate time and timing infidelity vs repetition and bandwidth");
  add_subcommand(app, opt, "trajectory",
                 "phase-space trajectories of a solved gate");
  add_subcommand(app, opt, "waveform-compile",
                 "compile a protocol into EOM drive waveforms");
  add_subcommand(app, opt, "validate", "parse and validate a configuration");

  CLI11_PARSE(app, argc, argv);

  if (example) {
    std::fputs(ik_example_config(), stdout);
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::fputs(app.help().c_str(), stderr);
    return IK_ERR_CONFIG;
  }
  return 0;
}
