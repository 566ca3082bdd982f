#pragma once

// Convergence studies of the Galerkin sequence u_n and two independent
// verification routes: a second-order finite-difference solver and the method
// of manufactured solutions.

#include <optional>
#include <span>
#include <vector>

#include "gllb/galerkin.hpp"

namespace gllb {

struct PairwiseDiff {
  int n_coarse = 0;
  int n_fine = 0;
  // max over common recorded times of the difference norms
  double l2 = 0.0;
  double h1 = 0.0;  // sqrt(||d||_2^2 + ||grad d||_2^2)
  double sup = 0.0;
};

struct ConvergenceReport {
  std::vector<int> n_list;
  std::vector<bool> diverged;
  std::vector<PairwiseDiff> pairwise_diffs;
  /// log(d_i / d_{i+1}) / log(n_{i+2} / n_{i+1}) for consecutive diffs, per norm.
  std::vector<double> rates_l2, rates_h1, rates_sup;
  /// Per-n max-in-time L2 error against the finite-difference oracle, when run.
  std::optional<std::vector<double>> oracle_errors;
};

/// Truncation n on every axis with the default 2x quadrature grid.
SolverConfig with_truncation(const SolverConfig& base, int n);

/// Runs simulate for every n (concurrently) from the same u0 and compares
/// consecutive truncations at common recorded times after zero-padding the
/// coarser one. Runs that break down before t_end are marked diverged and
/// their differences are NaN. Throws ConfigError unless n_list is strictly
/// increasing.
ConvergenceReport cauchy_study(const SolverConfig& base, const InitialData& u0,
                               std::span<const int> n_list);

/// Grid trajectory of the finite-difference oracle. Nodes are the cell
/// centres x_i = (i + 1/2) h, which coincide with the cosine nodes of a box
/// with N = grid_n.
struct FdTrajectory {
  BoxDomain grid;
  std::vector<double> times;
  std::vector<GridField> states;
  Outcome outcome = Outcome::kCompleted;
  std::optional<double> blowup_time;
};

/// Second-order centred differences with ghost-point Neumann closure
/// (u_{-1} = u_0, u_N = u_{N-1}); diffusion backward Euler (Thomas solve in
/// 1-D, Douglas-type ADI factorization in 2-D), nonlinearity forward Euler.
/// States are recorded every `record_interval` (which must be a multiple of
/// dt up to rounding) and at t_end. Throws ConfigError for d > 2 or
/// grid_n < 16.
FdTrajectory fd_oracle(const SolverConfig& config, const InitialData& u0,
                       int grid_n, double dt, double record_interval);

struct CrossValidation {
  double max_l2_error = 0.0;
  double fd_dt = 0.0;
  Outcome spectral_outcome = Outcome::kCompleted;
  Outcome fd_outcome = Outcome::kCompleted;
};

/// Spectral run at truncation n against fd_oracle on grid_n cells per axis
/// with dt_fd ~ fd_dt_factor h^2 / kappa1 (adjusted to divide the record
/// interval). The spectral solution is evaluated exactly at the FD nodes.
CrossValidation cross_validate(const SolverConfig& config, const InitialData& u0,
                               int n, int grid_n, double fd_dt_factor = 0.25);

/// u_exact(t) = sum amplitude * exp(rate t) e_k in the given component.
struct ExactTerm {
  int component = 0;
  std::vector<int> k;
  double amplitude = 0.0;
  double rate = 0.0;
};

struct ManufacturedSolution {
  std::vector<ExactTerm> terms;
};

/// Projected forcing P_n [d/dt u_exact - kappa1 Lap u_exact - N(u_exact)] for
/// a Galerkin system; N(u_exact) is sampled on a grid fine enough to resolve
/// both u_exact and the truncation (oversample x the combined extent).
Forcing manufactured_forcing(const ManufacturedSolution& exact,
                             const GalerkinSystem& system, int oversample = 8);

/// Coefficients of u_exact(t) that fall inside the truncation.
SpectralField exact_coefficients(const ManufacturedSolution& exact,
                                 const BoxDomain& domain, std::span<const int> trunc,
                                 double t);

struct ManufacturedRow {
  int n = 0;
  double dt = 0.0;
  double max_l2_error = 0.0;  // includes the part of u_exact outside the truncation
};

/// Runs the forced solver for every (n, dt) pair and reports the max-in-time
/// L2 error against u_exact.
std::vector<ManufacturedRow> manufactured_solution(const SolverConfig& base,
                                                   const ManufacturedSolution& exact,
                                                   std::span<const int> n_list,
                                                   std::span<const double> dt_list);

}  // namespace gllb
