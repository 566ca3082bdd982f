#include "gllb/params.hpp"

#include <cmath>
#include <string>

#include "gllb/errors.hpp"

namespace gllb {

void validate(const GLLBParams& p, bool allow_zero_kappa1) {
  if (!std::isfinite(p.kappa1) || !std::isfinite(p.kappa2) ||
      !std::isfinite(p.gamma) || !std::isfinite(p.mu)) {
    throw ConfigError("GLLB coefficients must be finite");
  }
  if (allow_zero_kappa1 ? !(p.kappa1 >= 0.0) : !(p.kappa1 > 0.0)) {
    throw ConfigError(allow_zero_kappa1 ? "kappa1 must be nonnegative" : "kappa1 must be positive");
  }
}

GLLBParams map_physical_params(double gamma, double kappa1, double chi_par,
                               double temperature, double curie_temperature) {
  if (!(chi_par > 0.0)) {
    throw DomainError("chi_par must be positive (got " +
                      std::to_string(chi_par) + ")");
  }
  if (!(curie_temperature > 0.0) || !(temperature > curie_temperature)) {
    throw DomainError("temperatures must satisfy T > T_c > 0 (got T = " +
                      std::to_string(temperature) +
                      ", T_c = " + std::to_string(curie_temperature) + ")");
  }
  if (!(kappa1 > 0.0)) throw DomainError("kappa1 must be positive");
  GLLBParams p;
  p.kappa1 = kappa1;
  p.kappa2 = kappa1 / chi_par;
  p.gamma = gamma;
  p.mu = 3.0 * temperature / (5.0 * (temperature - curie_temperature));
  validate(p);
  return p;
}

}  // namespace gllb
