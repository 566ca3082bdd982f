#pragma once

// Truncated Galerkin system for the GLLB equation with Neumann conditions.
// In coefficient space, C' = -kappa1 lambda C + P_n N(u_n) where
//   N(u) = gamma gradF(u) x Lap u - kappa2 (1 + mu F(u)) gradF(u)
// is evaluated pointwise on an oversampled cosine grid and projected back.
// Time stepping integrates the diffusion exactly (integrating factor) and
// advances the remainder with classical RK4 or explicit Euler.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gllb/energy_record.hpp"
#include "gllb/initial_data.hpp"
#include "gllb/params.hpp"
#include "gllb/potential.hpp"
#include "gllb/spectral_basis.hpp"

namespace gllb {

enum class Stepper { kIfRk4, kIfEuler };

/// Adds projected forcing coefficients at time t to `out` (flat layout of a
/// SpectralField with the system's truncation).
using Forcing = std::function<void(double t, std::span<double> out)>;

struct SolverConfig {
  BoxDomain domain;
  std::vector<int> trunc;
  GLLBParams params{};
  Potential potential{};
  double dt = 1e-3;
  double t_end = 1.0;
  Stepper stepper = Stepper::kIfRk4;
  double blowup_threshold = 1e8;
  int record_every = 1;
  int sup_refine = 4;
  bool estimate_step_error = false;
};

/// Throws ConfigError when the configuration is inconsistent.
void validate(const SolverConfig& config);

class GalerkinSystem {
 public:
  GalerkinSystem(BoxDomain domain, std::vector<int> trunc, GLLBParams params,
                 Potential potential);

  const BoxDomain& domain() const noexcept { return domain_; }
  std::span<const int> trunc() const noexcept { return trunc_; }
  const GLLBParams& params() const noexcept { return params_; }
  const Potential& potential() const noexcept { return potential_; }
  /// lambda_k for every retained mode (flat order).
  const std::vector<double>& eigenvalues() const noexcept { return lambda_; }

  /// P_n N(u_n) with the nonlinearity sampled on the system's grid.
  SpectralField nonlinear(const SpectralField& f) const;
  /// P_n N(u_n) sampled on another grid of the same box.
  SpectralField nonlinear_on(const SpectralField& f, const BoxDomain& grid) const;
  /// kappa1 Lap f + P_n N(f).
  SpectralField rhs(const SpectralField& f) const;
  /// One integrating-factor step of size dt starting at time t.
  SpectralField step(const SpectralField& f, double dt, Stepper stepper,
                     const Forcing* forcing = nullptr, double t = 0.0) const;

  SpectralField zero_field() const { return SpectralField(domain_, trunc_); }

 private:
  std::vector<double> nonlinear_flat(std::span<const double> coeffs,
                                     const BoxDomain& grid) const;
  void check_field(const SpectralField& f) const;

  BoxDomain domain_;
  std::vector<int> trunc_;
  GLLBParams params_;
  Potential potential_;
  std::vector<double> lambda_;
};

/// L2 projection of u0 onto the truncated basis: mode tables are truncated,
/// grid fields are analyzed with the quadrature of their own grid (which must
/// cover the same box and satisfy trunc_j <= N_j/2). Throws InputError on
/// non-finite input.
SpectralField project_initial(const InitialData& u0, const BoxDomain& domain,
                              std::vector<int> trunc);

SpectralField rhs(const SpectralField& f, const GLLBParams& params,
                  const Potential& potential);

SpectralField step(const SpectralField& f, double dt, const GLLBParams& params,
                   const Potential& potential, Stepper stepper = Stepper::kIfRk4);

/// (d/dt u_n, ||d/dt u_n||_2) for the semidiscrete system.
std::pair<SpectralField, double> time_derivative(const SpectralField& f,
                                                 const GLLBParams& params,
                                                 const Potential& potential);

enum class Outcome { kCompleted, kBlowup };

struct BlowupReport {
  double time = 0.0;             // time at which the threshold was crossed
  double last_valid_time = 0.0;  // last state that passed the checks
  SpectralNorms last_norms;
  std::string reason;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> states;
  std::vector<EnergyRecord> energy;
  /// Step-doubling estimate ||step(dt) - step(dt/2)^2||_2 per record, filled
  /// only when SolverConfig::estimate_step_error is set.
  std::vector<double> step_error;
  Outcome outcome = Outcome::kCompleted;
  std::optional<BlowupReport> blowup;
};

/// Fixed-step march from project_initial(u0) to t_end. Records every
/// record_every steps plus the final state. Breakdown (non-finite values or
/// l2sq + h2sq above blowup_threshold) ends the run with a BlowupReport.
Trajectory simulate(const SolverConfig& config, const InitialData& u0,
                    const Forcing* forcing = nullptr);

}  // namespace gllb
