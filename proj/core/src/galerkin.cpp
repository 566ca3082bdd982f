#include "gllb/galerkin.hpp"

#include <cmath>
#include <sstream>

#include "gllb/errors.hpp"
#include "gllb/estimates.hpp"

namespace gllb {

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double energy(const SpectralNorms& n) { return n.l2sq + n.h2sq; }

}  // namespace

void validate(const SolverConfig& config) {
  validate(config.params, true);
  if (static_cast<int>(config.trunc.size()) != config.domain.dim()) {
    throw ConfigError("trunc needs one mode count per axis");
  }
  for (int j = 0; j < config.domain.dim(); ++j) {
    if (config.trunc[j] < 1 || 2 * config.trunc[j] > config.domain.quad_points(j)) {
      throw ConfigError("trunc must satisfy 1 <= n_j <= N_j/2");
    }
  }
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) {
    throw ConfigError("dt must be positive");
  }
  if (!(config.t_end > 0.0) || !std::isfinite(config.t_end)) {
    throw ConfigError("t_end must be positive");
  }
  if (config.dt > config.t_end) throw ConfigError("dt must not exceed t_end");
  if (!(config.blowup_threshold > 0.0)) {
    throw ConfigError("blowup_threshold must be positive");
  }
  if (config.record_every < 1) throw ConfigError("record_every must be >= 1");
  if (config.sup_refine < 1) throw ConfigError("sup_refine must be >= 1");
}

// ----------------------------------------------------------- GalerkinSystem

GalerkinSystem::GalerkinSystem(BoxDomain domain, std::vector<int> trunc,
                               GLLBParams params, Potential potential)
    : domain_(std::move(domain)),
      trunc_(std::move(trunc)),
      params_(params),
      potential_(std::move(potential)) {
  validate(params_, true);
  // Validates the truncation against the grid.
  SpectralField probe(domain_, trunc_);
  lambda_ = gllb::eigenvalues(domain_, trunc_);
}

void GalerkinSystem::check_field(const SpectralField& f) const {
  if (!(f.domain() == domain_) ||
      !std::equal(f.trunc().begin(), f.trunc().end(), trunc_.begin(), trunc_.end())) {
    throw InputError("field does not match the Galerkin system's basis");
  }
}

std::vector<double> GalerkinSystem::nonlinear_flat(std::span<const double> coeffs,
                                                   const BoxDomain& grid) const {
  const std::size_t modes = lambda_.size();
  std::vector<double> lap(coeffs.begin(), coeffs.end());
  for (int c = 0; c < kComponents; ++c) {
    for (std::size_t m = 0; m < modes; ++m) lap[c * modes + m] *= -lambda_[m];
  }
  // Coefficients are finite here (checked by the callers), so the fields
  // can be built without re-validation failures.
  const SpectralField u(domain_, trunc_, std::vector<double>(coeffs.begin(), coeffs.end()));
  const SpectralField lu(domain_, trunc_, std::move(lap));
  const GridField ug = synthesize_on(u, grid);
  const GridField lg = synthesize_on(lu, grid);

  const std::size_t nodes = grid.node_count();
  std::vector<double> out(kComponents * nodes);
  const auto u0 = ug.component(0), u1 = ug.component(1), u2 = ug.component(2);
  const auto l0 = lg.component(0), l1 = lg.component(1), l2 = lg.component(2);
  const double gamma = params_.gamma;
  const double kappa2 = params_.kappa2;
  const double mu = params_.mu;
  for (std::size_t i = 0; i < nodes; ++i) {
    const Vec3 z(u0[i], u1[i], u2[i]);
    const Vec3 lz(l0[i], l1[i], l2[i]);
    const auto [f, g] = potential_.value_gradient(z);
    const Vec3 n = gamma * g.cross(lz) - kappa2 * (1.0 + mu * f) * g;
    out[i] = n[0];
    out[nodes + i] = n[1];
    out[2 * nodes + i] = n[2];
  }
  if (!all_finite(out)) {
    throw BlowupError("non-finite nonlinear term", std::nan(""), std::nan(""));
  }
  const SpectralField projected =
      analyze(GridField(grid, std::move(out)), trunc_);
  return std::vector<double>(projected.coeffs().begin(), projected.coeffs().end());
}

SpectralField GalerkinSystem::nonlinear(const SpectralField& f) const {
  return nonlinear_on(f, domain_);
}

SpectralField GalerkinSystem::nonlinear_on(const SpectralField& f,
                                           const BoxDomain& grid) const {
  check_field(f);
  return SpectralField(domain_, trunc_, nonlinear_flat(f.coeffs(), grid));
}

SpectralField GalerkinSystem::rhs(const SpectralField& f) const {
  check_field(f);
  std::vector<double> out = nonlinear_flat(f.coeffs(), domain_);
  const std::size_t modes = lambda_.size();
  const auto a = f.coeffs();
  for (int c = 0; c < kComponents; ++c) {
    for (std::size_t m = 0; m < modes; ++m) {
      out[c * modes + m] -= params_.kappa1 * lambda_[m] * a[c * modes + m];
    }
  }
  return SpectralField(domain_, trunc_, std::move(out));
}

SpectralField GalerkinSystem::step(const SpectralField& f, double dt,
                                   Stepper stepper, const Forcing* forcing,
                                   double t) const {
  check_field(f);
  if (!(dt >= 0.0)) throw InputError("step size must be nonnegative");
  const std::size_t modes = lambda_.size();
  const std::size_t size = kComponents * modes;

  std::vector<double> e_full(modes), e_half(modes);
  for (std::size_t m = 0; m < modes; ++m) {
    e_full[m] = std::exp(-params_.kappa1 * lambda_[m] * dt);
    e_half[m] = std::exp(-params_.kappa1 * lambda_[m] * 0.5 * dt);
  }
  auto scaled = [&](const std::vector<double>& e, std::span<const double> v) {
    std::vector<double> out(size);
    for (int c = 0; c < kComponents; ++c) {
      for (std::size_t m = 0; m < modes; ++m) out[c * modes + m] = e[m] * v[c * modes + m];
    }
    return out;
  };
  auto nl = [&](std::span<const double> v, double time) {
    if (!all_finite(v)) {
      throw BlowupError("non-finite Galerkin stage", time, std::nan(""));
    }
    std::vector<double> k = nonlinear_flat(v, domain_);
    if (forcing != nullptr) (*forcing)(time, k);
    return k;
  };

  const auto a = f.coeffs();
  const std::vector<double> k1 = nl(a, t);
  std::vector<double> out(size);
  if (stepper == Stepper::kIfEuler) {
    std::vector<double> tmp(size);
    for (std::size_t i = 0; i < size; ++i) tmp[i] = a[i] + dt * k1[i];
    out = scaled(e_full, tmp);
  } else {
    const double h = dt;
    std::vector<double> tmp(size);
    for (std::size_t i = 0; i < size; ++i) tmp[i] = a[i] + 0.5 * h * k1[i];
    const std::vector<double> a2 = scaled(e_half, tmp);
    const std::vector<double> k2 = nl(a2, t + 0.5 * h);

    const std::vector<double> ea_half = scaled(e_half, a);
    std::vector<double> a3(size);
    for (std::size_t i = 0; i < size; ++i) a3[i] = ea_half[i] + 0.5 * h * k2[i];
    const std::vector<double> k3 = nl(a3, t + 0.5 * h);

    const std::vector<double> ea_full = scaled(e_full, a);
    const std::vector<double> ek3 = scaled(e_half, k3);
    std::vector<double> a4(size);
    for (std::size_t i = 0; i < size; ++i) a4[i] = ea_full[i] + h * ek3[i];
    const std::vector<double> k4 = nl(a4, t + h);

    const std::vector<double> ek1 = scaled(e_full, k1);
    std::vector<double> k23(size);
    for (std::size_t i = 0; i < size; ++i) k23[i] = k2[i] + k3[i];
    const std::vector<double> ek23 = scaled(e_half, k23);
    for (std::size_t i = 0; i < size; ++i) {
      out[i] = ea_full[i] + h / 6.0 * (ek1[i] + 2.0 * ek23[i] + k4[i]);
    }
  }
  if (!all_finite(out)) {
    throw BlowupError("non-finite coefficients after step", t + dt, std::nan(""));
  }
  return SpectralField(domain_, trunc_, std::move(out));
}

// ------------------------------------------------------------ free functions

SpectralField project_initial(const InitialData& u0, const BoxDomain& domain,
                              std::vector<int> trunc) {
  if (const auto* table = std::get_if<ModeTable>(&u0)) {
    if (table->dim != domain.dim()) {
      throw InputError("initial mode table dimension does not match the box");
    }
    SpectralField out(domain, std::move(trunc));
    for (const auto& e : table->entries) {
      if (!std::isfinite(e.value)) throw InputError("initial data must be finite");
      if (e.component < 0 || e.component >= kComponents ||
          static_cast<int>(e.k.size()) != domain.dim()) {
        throw InputError("malformed initial mode table entry");
      }
      bool inside = true;
      for (int j = 0; j < domain.dim(); ++j) {
        if (e.k[j] < 0) throw InputError("mode indices must be nonnegative");
        inside = inside && e.k[j] < out.trunc()[j];
      }
      if (!inside) continue;
      out.component(e.component)[out.flat_mode(e.k)] += e.value;
    }
    return out;
  }
  const auto& grid = std::get<GridField>(u0);
  for (double v : grid.values()) {
    if (!std::isfinite(v)) throw InputError("initial data must be finite");
  }
  if (grid.domain().dim() != domain.dim()) {
    throw InputError("initial grid dimension does not match the box");
  }
  for (int j = 0; j < domain.dim(); ++j) {
    if (grid.domain().length(j) != domain.length(j)) {
      throw InputError("initial grid must cover the solver's box");
    }
  }
  const SpectralField on_grid = analyze(grid, trunc);
  return embed(on_grid, domain, std::move(trunc));
}

SpectralField rhs(const SpectralField& f, const GLLBParams& params,
                  const Potential& potential) {
  const GalerkinSystem system(f.domain(), std::vector<int>(f.trunc().begin(), f.trunc().end()),
                              params, potential);
  return system.rhs(f);
}

SpectralField step(const SpectralField& f, double dt, const GLLBParams& params,
                   const Potential& potential, Stepper stepper) {
  const GalerkinSystem system(f.domain(), std::vector<int>(f.trunc().begin(), f.trunc().end()),
                              params, potential);
  return system.step(f, dt, stepper);
}

std::pair<SpectralField, double> time_derivative(const SpectralField& f,
                                                 const GLLBParams& params,
                                                 const Potential& potential) {
  SpectralField d = rhs(f, params, potential);
  return {d, std::sqrt(norms(d).l2sq)};
}

Trajectory simulate(const SolverConfig& config, const InitialData& u0,
                    const Forcing* forcing) {
  validate(config);
  const GalerkinSystem system(config.domain, config.trunc, config.params,
                              config.potential);
  SpectralField f = project_initial(u0, config.domain, config.trunc);

  Trajectory traj;
  const auto steps = static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9));

  auto add_record = [&](const SpectralField& state, double t) {
    traj.times.push_back(t);
    traj.states.push_back(state);
    traj.energy.push_back(record(system, state, t, config.sup_refine));
    if (config.estimate_step_error) {
      const SpectralField full = system.step(state, config.dt, config.stepper, forcing, t);
      const SpectralField half = system.step(
          system.step(state, 0.5 * config.dt, config.stepper, forcing, t),
          0.5 * config.dt, config.stepper, forcing, t + 0.5 * config.dt);
      double diff = 0.0;
      for (std::size_t i = 0; i < full.coeffs().size(); ++i) {
        const double e = full.coeffs()[i] - half.coeffs()[i];
        diff += e * e;
      }
      traj.step_error.push_back(std::sqrt(diff));
    }
  };

  SpectralNorms last = norms(f);
  if (!std::isfinite(energy(last)) || energy(last) > config.blowup_threshold) {
    traj.outcome = Outcome::kBlowup;
    traj.blowup = BlowupReport{0.0, 0.0, last, "initial data above blow-up threshold"};
    return traj;
  }
  add_record(f, 0.0);
  bool recorded_last = true;
  double t = 0.0;
  for (long i = 1; i <= steps; ++i) {
    const double t_next = i == steps ? config.t_end : static_cast<double>(i) * config.dt;
    const double h = t_next - t;
    std::string reason;
    std::optional<SpectralField> next;
    try {
      next = system.step(f, h, config.stepper, forcing, t);
    } catch (const BlowupError& e) {
      reason = e.what();
    }
    if (next) {
      const SpectralNorms n = norms(*next);
      if (!std::isfinite(energy(n))) {
        reason = "non-finite norms";
      } else if (energy(n) > config.blowup_threshold) {
        std::ostringstream os;
        os << "l2sq + h2sq = " << energy(n) << " exceeds threshold "
           << config.blowup_threshold;
        reason = os.str();
      } else {
        f = std::move(*next);
        last = n;
        t = t_next;
        recorded_last = false;
        if (i % config.record_every == 0 || i == steps) {
          add_record(f, t);
          recorded_last = true;
        }
        continue;
      }
    }
    traj.outcome = Outcome::kBlowup;
    traj.blowup = BlowupReport{t_next, t, last, reason};
    if (!recorded_last) {
      try {
        add_record(f, t);
      } catch (const BlowupError&) {
        // The last valid state is too large to diagnose; keep the series as is.
      }
    }
    break;
  }
  fill_identity_residuals(traj.energy);
  return traj;
}

}  // namespace gllb
