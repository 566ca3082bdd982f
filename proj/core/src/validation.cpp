#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "gllb/app.hpp"
#include "gllb/errors.hpp"

namespace gllb {

namespace {

PropertyResult make(std::string name, bool passed, const std::string& detail) {
  return {std::move(name), passed, detail};
}

std::string num(double x) { return format_number(x); }

double rel_diff(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

SpectralField random_field(const BoxDomain& domain, const std::vector<int>& trunc,
                           std::uint64_t seed) {
  SpectralField f(domain, trunc);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (double& c : f.coeffs()) c = g(rng);
  return f;
}

PropertyResult transform_roundtrip(const SolverConfig& s, std::uint64_t seed) {
  const SpectralField f = random_field(s.domain, s.trunc, seed);
  const SpectralField back = analyze(synthesize(f), s.trunc);
  double err = 0.0;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    err = std::max(err, std::fabs(f.coeffs()[i] - back.coeffs()[i]));
  }
  const double tol = 1e-12 * std::max(1.0, f.max_abs());
  return make("transform_roundtrip", err <= tol, "max coefficient error " + num(err));
}

PropertyResult embedding_isometry(const SpectralField& u0) {
  std::vector<int> wide(u0.trunc().begin(), u0.trunc().end());
  for (int& n : wide) n *= 2;
  std::vector<int> quad;
  for (int n : wide) quad.push_back(2 * n);
  const SpectralField e = embed(u0, u0.domain().with_quad_points(quad), wide);
  const SpectralNorms a = norms(u0);
  const SpectralNorms b = norms(e);
  const double worst = std::max({rel_diff(a.l2sq, b.l2sq), rel_diff(a.h1sq, b.h1sq),
                                 rel_diff(a.h2sq, b.h2sq), rel_diff(a.h3sq, b.h3sq)});
  return make("embedding_isometry", worst <= 1e-13, "worst relative norm change " + num(worst));
}

PropertyResult boundary_condition(const Trajectory& traj) {
  double worst = 0.0;
  bool ok = true;
  for (const auto& f : traj.states) {
    const double r = boundary_residual(f);
    const double scale = std::max(f.max_abs(), 1e-300);
    worst = std::max(worst, r / scale);
    ok = ok && r <= 1e-12 * scale;
  }
  return make("boundary_condition", ok, "worst residual / coefficient scale " + num(worst));
}

void bound_properties(const BoundFns& b, double lambda_ref, std::vector<PropertyResult>& out) {
  constexpr int kGrid = 100;
  std::vector<double> lam(kGrid), h(kGrid), j(kGrid), i(kGrid);
  for (int k = 0; k < kGrid; ++k) {
    lam[k] = lambda_ref * k / (kGrid - 1);
    h[k] = b.H(lam[k]);
    j[k] = b.J(lam[k]);
    i[k] = b.I(lam[k]);
  }
  bool mono = true;
  for (int k = 1; k < kGrid; ++k) mono = mono && h[k] >= h[k - 1] && j[k] >= j[k - 1] && i[k] >= i[k - 1];
  out.push_back(make("bound_monotonicity", mono, "lambda in [0, " + num(lambda_ref) + "]"));

  bool lip = true;
  double worst = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < kGrid; ++a) {
    for (int c = a + 1; c < kGrid; ++c) {
      const double slack = 1.1 * j[c] * (lam[c] - lam[a]) - (h[c] - h[a]);
      worst = std::max(worst, -slack);
      lip = lip && slack >= 0.0;
    }
  }
  out.push_back(make("bound_lipschitz", lip, "largest excess " + num(worst)));
}

PropertyResult determinism(const RunConfig& config) {
  SolverConfig s = config.solver;
  s.t_end = std::min(s.t_end, 10.0 * s.dt);
  const Trajectory a = simulate(s, config.initial);
  const Trajectory b = simulate(s, config.initial);
  bool same = a.states.size() == b.states.size();
  for (std::size_t r = 0; same && r < a.states.size(); ++r) {
    const auto ca = a.states[r].coeffs();
    const auto cb = b.states[r].coeffs();
    for (std::size_t k = 0; same && k < ca.size(); ++k) {
      same = std::bit_cast<std::uint64_t>(ca[k]) == std::bit_cast<std::uint64_t>(cb[k]);
    }
  }
  std::ostringstream ea, eb;
  write_energy_csv(ea, a.energy);
  write_energy_csv(eb, b.energy);
  same = same && ea.str() == eb.str();
  return make("determinism", same, "two runs to t=" + num(s.t_end));
}

PropertyResult checkpoint_roundtrip(const SpectralField& f) {
  std::stringstream buf;
  write_checkpoint(buf, f, 0.125);
  const Checkpoint c = read_checkpoint(buf);
  bool same = c.time == 0.125 && c.field.domain() == f.domain() &&
              std::equal(c.field.trunc().begin(), c.field.trunc().end(), f.trunc().begin(),
                         f.trunc().end());
  for (std::size_t k = 0; same && k < f.coeffs().size(); ++k) {
    same = std::bit_cast<std::uint64_t>(c.field.coeffs()[k]) ==
           std::bit_cast<std::uint64_t>(f.coeffs()[k]);
  }
  return make("checkpoint_roundtrip", same, "bitwise comparison");
}

PropertyResult csv_schema(std::span<const EnergyRecord> records) {
  std::ostringstream out;
  write_energy_csv(out, records);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  bool ok = line == kEnergyCsvHeader;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ok = ok && std::count(line.begin(), line.end(), ',') == 9;
    ++rows;
  }
  ok = ok && rows == records.size();
  return make("csv_schema", ok, std::to_string(rows) + " rows");
}

double identity_scale(std::span<const EnergyRecord> records) {
  double s = 0.0;
  for (const auto& r : records) s = std::max({s, std::fabs(r.power_l2), std::fabs(r.power_h2)});
  return s;
}

PropertyResult energy_identity(const RunConfig& config) {
  SolverConfig s = config.solver;
  s.t_end = std::min(s.t_end, 0.1);
  s.record_every = 1;
  s.dt = std::min(s.dt, s.t_end / 8);
  const Trajectory coarse = simulate(s, config.initial);
  s.dt /= 2;
  const Trajectory fine = simulate(s, config.initial);
  if (coarse.outcome != Outcome::kCompleted || fine.outcome != Outcome::kCompleted) {
    return make("energy_identity", false, "run broke down before t=" + num(s.t_end));
  }
  const IntegratedResidual a = integrated_residuals(coarse.energy);
  const IntegratedResidual b = integrated_residuals(fine.energy);
  const double floor = 1e-10 * std::max(identity_scale(fine.energy), 1e-300) * s.t_end;
  const bool l2 = b.l2 <= floor || b.l2 * 3.0 <= a.l2;
  const bool h2 = b.h2 <= floor || b.h2 * 3.0 <= a.h2;
  return make("energy_identity", l2 && h2,
              "integrated residuals l2 " + num(a.l2) + " -> " + num(b.l2) + ", h2 " + num(a.h2) +
                  " -> " + num(b.h2));
}

}  // namespace

std::vector<PropertyResult> run_validate(const RunConfig& config,
                                         const std::filesystem::path& out_dir) {
  std::vector<PropertyResult> out;
  const SolverConfig& s = config.solver;

  bool params_ok = true;
  try {
    validate(s.params);
  } catch (const ConfigError&) {
    params_ok = false;
  }
  out.push_back(make("params_valid", params_ok, "kappa1 > 0, finite coefficients"));

  const SpectralField u0 = project_initial(config.initial, s.domain, s.trunc);
  out.push_back(transform_roundtrip(s, config.seed));
  out.push_back(embedding_isometry(u0));

  const MajorantSetup setup = prepare_majorant(config);
  const double l_threshold =
      setup.constants.c_inf * std::sqrt(2.0 * std::max(setup.y0, 1.0));
  bound_properties(setup.bounds, std::min(l_threshold, setup.bounds.lambda_max()), out);

  const SobolevConstants again = calibrate_sobolev(s.domain, s.trunc, config.calibration_samples,
                                                   config.seed, s.sup_refine);
  const bool same_constants = again.c_inf == setup.constants.c_inf &&
                              again.k6 == setup.constants.k6 && again.k3 == setup.constants.k3;
  const double sup0 = sup_norm_estimate(u0, s.sup_refine);
  const bool covers = sup0 <= setup.constants.c_inf * std::sqrt(setup.y0) * (1.0 + 1e-12);
  out.push_back(make("calibration", same_constants && covers,
                     "c_inf " + num(setup.constants.c_inf) + ", sup(u0) " + num(sup0)));

  const Majorant& m = setup.majorant;
  SolverConfig run = s;
  run.t_end = std::min(s.t_end, m.tstar());
  Trajectory traj;
  if (run.t_end > 0.0 && run.dt <= run.t_end) {
    traj = simulate(run, config.initial);
    const DominanceReport dom = check_dominance(traj, m);
    out.push_back(make("majorant_dominance", dom.dominated && m.tstar() > 0.0,
                       "tstar " + num(m.tstar()) + ", min margin " + num(dom.min_margin)));
  } else {
    out.push_back(make("majorant_dominance", false, "tstar " + num(m.tstar()) + " below dt"));
    traj = simulate(s, config.initial);
  }
  out.push_back(boundary_condition(traj));
  out.push_back(csv_schema(traj.energy));
  out.push_back(checkpoint_roundtrip(traj.states.back()));
  out.push_back(determinism(config));
  out.push_back(energy_identity(config));

  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::ofstream csv(out_dir / "validation.csv", std::ios::binary | std::ios::trunc);
    if (!csv) throw IoError("cannot write " + (out_dir / "validation.csv").string());
    csv << "property,passed,detail\n";
    for (const auto& p : out) {
      csv << p.name << ',' << (p.passed ? 1 : 0) << ",\"" << p.detail << "\"\n";
    }
    if (!csv) throw IoError("failed writing validation.csv");
  }
  return out;
}

}  // namespace gllb
