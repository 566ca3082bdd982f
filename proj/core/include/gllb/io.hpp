#pragma once

// Run configuration files, CSV tables, run reports and state checkpoints.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gllb/convergence.hpp"
#include "gllb/energy_record.hpp"
#include "gllb/estimates.hpp"
#include "gllb/galerkin.hpp"
#include "gllb/initial_data.hpp"
#include "gllb/potential.hpp"

namespace gllb {

struct OutputSettings {
  std::filesystem::path dir = "out";
  /// Write a checkpoint every this many records (0: final state only).
  int checkpoint_every = 0;
};

struct StudySettings {
  std::vector<int> n_list;
  int oracle_n = 32;
  std::vector<int> grid_list;
  double fd_dt_factor = 0.25;
};

struct RunConfig {
  SolverConfig solver;
  BoundMode bound_mode = BoundMode::kAnalytic;
  SamplingParams sampling{};
  std::uint64_t seed = 1;
  double t_max = 1.0;
  int calibration_samples = 200;
  InitialData initial = ModeTable{};
  OutputSettings outputs{};
  std::optional<StudySettings> study{};
  /// Normalized JSON of the parsed configuration, echoed into reports.
  std::string echo{};
};

/// Parses a JSON run configuration. Unknown keys, missing required keys and
/// invalid values raise ConfigError; an infeasible physical parameter set
/// raises DomainError.
RunConfig parse_config(std::string_view text);
/// Throws IoError when the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

inline constexpr std::string_view kEnergyCsvHeader =
    "t,l2sq,h1sq,h2sq,h3sq,dt_norm,sup_est,aliasing_residual,"
    "identity_residual_l2,identity_residual_h2";

/// Shortest decimal that round-trips to the same double; "nan", "inf", "-inf"
/// for non-finite values.
std::string format_number(double x);

void write_energy_csv(std::ostream& out, std::span<const EnergyRecord> records);
void write_majorant_csv(std::ostream& out, const Majorant& majorant);
void write_convergence_csv(std::ostream& out, const ConvergenceReport& report);
void write_rates_csv(std::ostream& out, const ConvergenceReport& report);
void write_oracle_csv(std::ostream& out, std::span<const int> grid_list,
                      std::span<const CrossValidation> rows);

struct RunReport {
  std::string config_echo;
  std::optional<SobolevConstants> constants;
  std::vector<EnergyRecord> energy;
  std::optional<Majorant> majorant;
  std::optional<DominanceReport> dominance;
  Outcome outcome = Outcome::kCompleted;
  std::optional<BlowupReport> blowup;
};

void write_report(std::ostream& out, const RunReport& report);

// Checkpoint layout, every multi-byte field little-endian:
//   char[8]   "GLLBCKPT"
//   uint32    format version (1)
//   uint32    d
//   float64   L_j            (d entries)
//   int32     N_j            (d entries)
//   int32     n_j            (d entries)
//   float64   time
//   uint64    coefficient count (3 * prod n_j)
//   float64   coefficients in SpectralField storage order
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  double time = 0.0;
  SpectralField field;
};

void write_checkpoint(std::ostream& out, const SpectralField& field, double time);
/// Throws InputError on a malformed or truncated stream.
Checkpoint read_checkpoint(std::istream& in);
void save_checkpoint(const std::filesystem::path& path, const SpectralField& field,
                     double time);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace gllb
