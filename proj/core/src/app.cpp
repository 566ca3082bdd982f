#include "gllb/app.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gllb/errors.hpp"

namespace gllb {

namespace {

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  writer(out);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string checkpoint_name(std::size_t record) {
  std::string digits = std::to_string(record);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return "ckpt_" + digits + ".bin";
}

}  // namespace

MajorantSetup prepare_majorant(const RunConfig& config) {
  const SolverConfig& s = config.solver;
  MajorantSetup out;
  const SpectralField u0 = project_initial(config.initial, s.domain, s.trunc);
  const SpectralNorms n0 = norms(u0);
  out.y0 = n0.l2sq + n0.h2sq;
  out.constants = calibrate_sobolev(s.domain, s.trunc, config.calibration_samples, config.seed,
                                    s.sup_refine);
  SamplingParams sampling = config.sampling;
  if (config.bound_mode == BoundMode::kSampled && sampling.lambda_max == 0.0) {
    sampling.lambda_max = 2.0 * out.constants.c_inf * std::sqrt(2.0 * std::max(out.y0, 1.0));
  }
  out.bounds = bounds(s.potential, config.bound_mode, sampling);
  MajorantOptions opts;
  opts.t_max = config.t_max;
  out.majorant = build_majorant(out.y0, s.params, out.bounds, out.constants, s.domain, opts);
  return out;
}

SimulateResult run_simulate(const RunConfig& config, const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);
  MajorantSetup setup = prepare_majorant(config);
  SimulateResult res;
  res.trajectory = simulate(config.solver, config.initial);
  const Trajectory& traj = res.trajectory;

  RunReport& rep = res.report;
  rep.config_echo = config.echo;
  rep.constants = setup.constants;
  rep.energy = traj.energy;
  rep.dominance = check_dominance(traj, setup.majorant);
  rep.majorant = std::move(setup.majorant);
  rep.outcome = traj.outcome;
  rep.blowup = traj.blowup;

  write_file(out_dir / "energy.csv", [&](std::ostream& o) { write_energy_csv(o, traj.energy); });
  write_file(out_dir / "report.json", [&](std::ostream& o) { write_report(o, rep); });
  const int every = config.outputs.checkpoint_every;
  for (std::size_t r = 0; r < traj.states.size(); ++r) {
    if (every > 0 && r % static_cast<std::size_t>(every) == 0) {
      save_checkpoint(out_dir / checkpoint_name(r), traj.states[r], traj.times[r]);
    }
  }
  if (!traj.states.empty()) {
    save_checkpoint(out_dir / "final.bin", traj.states.back(), traj.times.back());
  }
  return res;
}

MajorantSetup run_tstar(const RunConfig& config, const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);
  MajorantSetup setup = prepare_majorant(config);
  write_file(out_dir / "majorant.csv",
             [&](std::ostream& o) { write_majorant_csv(o, setup.majorant); });
  RunReport rep;
  rep.config_echo = config.echo;
  rep.constants = setup.constants;
  rep.majorant = setup.majorant;
  write_file(out_dir / "report.json", [&](std::ostream& o) { write_report(o, rep); });
  return setup;
}

ConvergenceReport run_converge(const RunConfig& config, const std::filesystem::path& out_dir) {
  if (!config.study || config.study->n_list.empty()) {
    throw ConfigError("converge needs study.n_list");
  }
  ensure_dir(out_dir);
  const ConvergenceReport rep = cauchy_study(config.solver, config.initial, config.study->n_list);
  write_file(out_dir / "convergence.csv",
             [&](std::ostream& o) { write_convergence_csv(o, rep); });
  write_file(out_dir / "rates.csv", [&](std::ostream& o) { write_rates_csv(o, rep); });
  return rep;
}

std::vector<CrossValidation> run_oracle(const RunConfig& config,
                                        const std::filesystem::path& out_dir) {
  if (config.solver.domain.dim() > 2) {
    throw ConfigError("the finite-difference oracle supports d <= 2 only");
  }
  if (!config.study || config.study->grid_list.empty()) {
    throw ConfigError("oracle needs study.grid_list");
  }
  ensure_dir(out_dir);
  const StudySettings& st = *config.study;
  std::vector<CrossValidation> rows;
  for (int g : st.grid_list) {
    rows.push_back(
        cross_validate(config.solver, config.initial, st.oracle_n, g, st.fd_dt_factor));
  }
  write_file(out_dir / "oracle.csv",
             [&](std::ostream& o) { write_oracle_csv(o, st.grid_list, rows); });
  return rows;
}

}  // namespace gllb
