#pragma once

// Config-driven workflows behind the command-line tool. Each writes its
// artifacts into an output directory and returns the in-memory results.

#include <filesystem>
#include <string>
#include <vector>

#include "gllb/io.hpp"

namespace gllb {

/// Calibration constants, bound functions and majorant for a run config.
struct MajorantSetup {
  double y0 = 0.0;  // l2sq + h2sq of the projected initial data
  SobolevConstants constants;
  BoundFns bounds;
  Majorant majorant;
};

/// Sampled bounds with lambda_max = 0 get a radius of twice the sup bound at
/// the doubling threshold, 2 c_inf sqrt(2 max(y0, 1)).
MajorantSetup prepare_majorant(const RunConfig& config);

struct SimulateResult {
  Trajectory trajectory;
  RunReport report;
};

/// Writes energy.csv, report.json and checkpoints (ckpt_<record>.bin every
/// checkpoint_every records, plus final.bin). Throws IoError when the
/// directory or a file cannot be written.
SimulateResult run_simulate(const RunConfig& config, const std::filesystem::path& out_dir);

/// Writes majorant.csv and report.json.
MajorantSetup run_tstar(const RunConfig& config, const std::filesystem::path& out_dir);

/// Writes convergence.csv and rates.csv. Needs study.n_list.
ConvergenceReport run_converge(const RunConfig& config, const std::filesystem::path& out_dir);

/// Writes oracle.csv with one row per study.grid_list entry. Throws
/// ConfigError for d > 2 or a missing study section.
std::vector<CrossValidation> run_oracle(const RunConfig& config,
                                        const std::filesystem::path& out_dir);

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Invariant suite on a configuration; writes validation.csv.
std::vector<PropertyResult> run_validate(const RunConfig& config,
                                         const std::filesystem::path& out_dir);

}  // namespace gllb
