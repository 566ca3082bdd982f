#pragma once

// A priori estimate machinery for Galerkin trajectories: energy records and
// identity residuals, numerically calibrated embedding constants, the
// comparison-ODE majorant y' = B(y) for l2sq + h2sq, its doubling time T*,
// and dominance checks of recorded trajectories against it.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gllb/energy_record.hpp"
#include "gllb/galerkin.hpp"
#include "gllb/params.hpp"
#include "gllb/potential.hpp"
#include "gllb/spectral_basis.hpp"

namespace gllb {

/// Fills every norm field of a record. Identity residuals are left at zero;
/// see fill_identity_residuals.
EnergyRecord record(const GalerkinSystem& system, const SpectralField& f,
                    double t, int sup_refine = 4);

/// Post hoc identity residuals: three-point (second order) derivatives of
/// l2sq/2 and h2sq/2 in time minus the recorded power terms. Needs at least
/// three records; otherwise residuals stay zero.
void fill_identity_residuals(std::span<EnergyRecord> records);

/// Trapezoidal integrals of |identity_residual_l2| and |identity_residual_h2|
/// over the recorded times.
struct IntegratedResidual {
  double l2 = 0.0;
  double h2 = 0.0;
};
IntegratedResidual integrated_residuals(std::span<const EnergyRecord> records);

/// Embedding constants of the truncated space, each twice the largest ratio
/// observed over the sample fields:
///   ||u||_inf     <= c_inf * sqrt(l2sq + h2sq)
///   ||grad u||_6  <= k6    * sqrt(l2sq + h2sq)
///   ||D^2 u||_3   <= k3    * sqrt(l2sq + h2sq)
struct SobolevConstants {
  double c_inf = 0.0;
  double k6 = 0.0;
  double k3 = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr double kCalibrationSafety = 2.0;

/// Samples random band-limited fields (spectral decay 1/(1+lambda)^p with p
/// cycling over {0.5, 1, 1.5}) together with deterministic probe fields (the
/// constant mode and the sup-extremal kernel field at a corner). Throws
/// ConfigError for samples < 100 unless allow_few_samples is set.
SobolevConstants calibrate_sobolev(const BoxDomain& domain,
                                   std::span<const int> trunc, int samples,
                                   std::uint64_t seed, int refine = 4,
                                   bool allow_few_samples = false);

struct MajorantOptions {
  double t_max = 1.0;
  int table_points = 2001;
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  /// y above this value counts as blow-up of the majorant.
  double overflow = 1e150;
};

/// Scalar comparison solution y(t) >= l2sq + h2sq of every truncation.
class Majorant {
 public:
  double y0() const noexcept { return y0_; }
  double t_max() const noexcept { return t_max_; }
  /// Operational T*: largest t <= t_max with y(t) <= 2 max(y0, 1).
  double tstar() const noexcept { return tstar_; }
  double threshold() const noexcept { return threshold_; }
  std::optional<double> blowup_time() const noexcept { return blowup_time_; }
  /// True when y reached the doubling threshold before t_max.
  bool doubled() const noexcept { return doubled_; }

  /// B(y) = Q(y) + V(y).
  double rate(double y) const;
  /// Tabulated y(t) with linear interpolation; +inf past a blow-up.
  double operator()(double t) const;

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& values() const noexcept { return values_; }

  const GLLBParams& params() const noexcept { return params_; }
  const SobolevConstants& constants() const noexcept { return constants_; }
  double volume() const noexcept { return volume_; }

 private:
  friend Majorant build_majorant(double, const GLLBParams&, const BoundFns&,
                                 const SobolevConstants&, const BoxDomain&,
                                 const MajorantOptions&);

  double y0_ = 0.0;
  double t_max_ = 0.0;
  double tstar_ = 0.0;
  double threshold_ = 0.0;
  bool doubled_ = false;
  std::optional<double> blowup_time_;
  std::vector<double> times_, values_;
  GLLBParams params_;
  BoundFns bounds_;
  SobolevConstants constants_;
  double volume_ = 1.0;
};

/// Builds B from the two differential inequalities with ||u||_inf replaced by
/// c_inf sqrt(y):
///   V(y) = 2 [ |gamma| J l sqrt(vol) sqrt(y) + |kappa2| (1 + |mu| H) J l vol ]
///   Q(y) = (3 / kappa1) [ gamma^2 I^2 k6^2 k3^2 y^2
///                         + kappa2^2 mu^2 C1^2 J^4 k6^2 y
///                         + kappa2^2 (1 + |mu| H)^2 C1^2 I^2 k6^2 y ]
/// with l = c_inf sqrt(y), C1 = vol^(1/3), and H, J, I evaluated at l.
/// Integrates y' = B(y) adaptively (Dormand-Prince 5(4), dense output).
/// Throws InputError for y0 < 0.
Majorant build_majorant(double y0, const GLLBParams& params,
                        const BoundFns& bounds, const SobolevConstants& constants,
                        const BoxDomain& domain, const MajorantOptions& options = {});

struct DominanceViolation {
  double t = 0.0;
  double energy = 0.0;    // l2sq + h2sq
  double majorant = 0.0;  // y(t)
};

struct DominanceReport {
  bool dominated = true;
  std::size_t checked = 0;
  double min_margin = 0.0;  // min over checked records of y(t) - energy
  std::vector<DominanceViolation> violations;
};

/// Checks l2sq(t) + h2sq(t) <= y(t) for every record with t <= tstar.
/// Throws InputError when the trajectory starts above the majorant's y0.
DominanceReport check_dominance(const Trajectory& trajectory,
                                const Majorant& majorant);

}  // namespace gllb
