#pragma once

namespace gllb {

/// Per-record diagnostics of a Galerkin trajectory.
struct EnergyRecord {
  double t = 0.0;
  double l2sq = 0.0;  // ||u_n||_2^2
  double h1sq = 0.0;  // ||grad u_n||_2^2
  double h2sq = 0.0;  // ||Lap u_n||_2^2
  double h3sq = 0.0;  // ||grad Lap u_n||_2^2
  double dt_norm = 0.0;  // ||d/dt u_n||_2
  double sup_est = 0.0;  // refined-grid estimate of ||u_n||_inf
  double aliasing_residual = 0.0;
  double identity_residual_l2 = 0.0;
  double identity_residual_h2 = 0.0;
  // Right-hand sides of the two energy identities at this state:
  //   d/dt (l2sq/2) = -kappa1 h1sq + <u_n, N(u_n)>
  //   d/dt (h2sq/2) = -kappa1 h3sq + <Lap^2 u_n, N(u_n)>
  double power_l2 = 0.0;
  double power_h2 = 0.0;
};

}  // namespace gllb
