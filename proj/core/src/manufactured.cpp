#include <cmath>
#include <limits>
#include <map>

#include "gllb/convergence.hpp"
#include "gllb/errors.hpp"

namespace gllb {

namespace {

using ModeKey = std::pair<int, std::vector<int>>;

std::map<ModeKey, double> exact_modes(const ManufacturedSolution& exact, int dim, double t) {
  std::map<ModeKey, double> out;
  for (const auto& term : exact.terms) {
    if (term.component < 0 || term.component >= kComponents ||
        static_cast<int>(term.k.size()) != dim) {
      throw InputError("manufactured term does not match the domain");
    }
    out[{term.component, term.k}] += term.amplitude * std::exp(term.rate * t);
  }
  return out;
}

bool inside(const std::vector<int>& k, std::span<const int> trunc) {
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (k[j] < 0 || k[j] >= trunc[j]) return false;
  }
  return true;
}

std::vector<int> extent(const ManufacturedSolution& exact, std::span<const int> trunc) {
  std::vector<int> ext(trunc.begin(), trunc.end());
  for (const auto& term : exact.terms) {
    for (std::size_t j = 0; j < ext.size() && j < term.k.size(); ++j) {
      ext[j] = std::max(ext[j], term.k[j] + 1);
    }
  }
  return ext;
}

}  // namespace

SpectralField exact_coefficients(const ManufacturedSolution& exact, const BoxDomain& domain,
                                 std::span<const int> trunc, double t) {
  SpectralField f(domain, std::vector<int>(trunc.begin(), trunc.end()));
  for (const auto& [key, value] : exact_modes(exact, domain.dim(), t)) {
    if (inside(key.second, trunc)) f.set_coeff(key.first, ModeIndex{key.second}, value);
  }
  return f;
}

Forcing manufactured_forcing(const ManufacturedSolution& exact, const GalerkinSystem& system,
                             int oversample) {
  if (oversample < 2) throw ConfigError("oversample must be at least 2");
  const BoxDomain& domain = system.domain();
  const std::vector<int> trunc(system.trunc().begin(), system.trunc().end());
  const std::vector<int> ext = extent(exact, trunc);
  std::vector<int> fine_n;
  for (int e : ext) fine_n.push_back(2 * oversample * e);
  const GalerkinSystem fine(domain.with_quad_points(fine_n), ext, system.params(),
                            system.potential());
  const std::vector<double> lambda = system.eigenvalues();
  const double kappa1 = system.params().kappa1;

  return [exact, fine, domain, trunc, lambda, kappa1](double t, std::span<double> out) {
    const SpectralField u_ext = exact_coefficients(exact, fine.domain(), fine.trunc(), t);
    const SpectralField n_ext = fine.nonlinear(u_ext);
    const SpectralField n_proj = embed(n_ext, domain, trunc);

    SpectralField rate_part(domain, trunc);
    for (const auto& term : exact.terms) {
      if (!inside(term.k, trunc)) continue;
      const ModeIndex k{term.k};
      rate_part.set_coeff(term.component, k,
                          rate_part.coeff(term.component, k) +
                              term.rate * term.amplitude * std::exp(term.rate * t));
    }
    const std::size_t modes = rate_part.mode_count();
    const auto rc = rate_part.coeffs();
    const auto nc = n_proj.coeffs();
    const SpectralField u_in = exact_coefficients(exact, domain, trunc, t);
    const auto uc = u_in.coeffs();
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] += rc[i] + kappa1 * lambda[i % modes] * uc[i] - nc[i];
    }
  };
}

std::vector<ManufacturedRow> manufactured_solution(const SolverConfig& base,
                                                   const ManufacturedSolution& exact,
                                                   std::span<const int> n_list,
                                                   std::span<const double> dt_list) {
  if (n_list.size() != dt_list.size()) {
    throw ConfigError("manufactured study needs one dt per truncation");
  }
  const int dim = base.domain.dim();
  ModeTable initial{dim, {}};
  for (const auto& [key, value] : exact_modes(exact, dim, 0.0)) {
    initial.entries.push_back({key.first, key.second, value});
  }

  std::vector<ManufacturedRow> rows;
  for (std::size_t r = 0; r < n_list.size(); ++r) {
    SolverConfig cfg = with_truncation(base, n_list[r]);
    cfg.dt = dt_list[r];
    validate(cfg);
    const GalerkinSystem system(cfg.domain, cfg.trunc, cfg.params, cfg.potential);
    const Forcing forcing = manufactured_forcing(exact, system);
    const Trajectory traj = simulate(cfg, initial, &forcing);

    ManufacturedRow row{n_list[r], cfg.dt, 0.0};
    if (traj.outcome != Outcome::kCompleted) {
      row.max_l2_error = std::numeric_limits<double>::infinity();
      rows.push_back(row);
      continue;
    }
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const auto& state = traj.states[i];
      double e2 = 0.0;
      SpectralField inside_part(cfg.domain, cfg.trunc);
      for (const auto& [key, value] : exact_modes(exact, dim, traj.times[i])) {
        if (inside(key.second, cfg.trunc)) {
          inside_part.set_coeff(key.first, ModeIndex{key.second}, value);
        } else {
          e2 += value * value;
        }
      }
      const auto a = state.coeffs();
      const auto b = inside_part.coeffs();
      for (std::size_t k = 0; k < a.size(); ++k) e2 += (a[k] - b[k]) * (a[k] - b[k]);
      row.max_l2_error = std::max(row.max_l2_error, std::sqrt(e2));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gllb
