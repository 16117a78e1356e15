#pragma once

#include <string>
#include <vector>

#include "ionkick/config.hpp"

namespace ionkick {

struct ExperimentResult {
  std::vector<std::string> files;  // paths written, in emission order
  std::string summary;             // one line for the console
};

// Executes cfg.experiment, writing deterministic CSV/JSON artifacts under
// out_dir (created if missing). Every file starts with a comment line carrying
// the schema version and config hash. threads <= 0 picks hardware concurrency.
ExperimentResult run_experiment(const RunConfig& cfg, const std::string& out_dir,
                                int threads);

}  // namespace ionkick
