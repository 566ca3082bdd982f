#pragma once

namespace gllb {

/// Coefficients of
///   du/dt = kappa1 Lap u + gamma gradF(u) x Lap u - kappa2 (1 + mu F(u)) gradF(u).
struct GLLBParams {
  double kappa1 = 1.0;
  double kappa2 = 0.0;
  double gamma = 0.0;
  double mu = 0.0;

  bool operator==(const GLLBParams&) const = default;
};

/// Throws ConfigError unless kappa1 > 0 and every coefficient is finite.
/// The semidiscrete solver also accepts kappa1 = 0 (no diffusion), which the
/// a priori estimates exclude.
void validate(const GLLBParams& p, bool allow_zero_kappa1 = false);

/// Physical LLB parameters: kappa2 = kappa1 / chi_par,
/// mu = 3T / (5 (T - T_c)). Throws DomainError unless chi_par > 0,
/// T > T_c > 0 and kappa1 > 0.
GLLBParams map_physical_params(double gamma, double kappa1, double chi_par,
                               double temperature, double curie_temperature);

}  // namespace gllb
