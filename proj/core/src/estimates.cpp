#include "gllb/estimates.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "gllb/errors.hpp"

namespace gllb {

namespace {

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Derivative at x of the quadratic through (x0,f0), (x1,f1), (x2,f2).
double three_point_derivative(double x, double x0, double x1, double x2,
                              double f0, double f1, double f2) {
  return f0 * (2 * x - x1 - x2) / ((x0 - x1) * (x0 - x2)) +
         f1 * (2 * x - x0 - x2) / ((x1 - x0) * (x1 - x2)) +
         f2 * (2 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
}

}  // namespace

// ------------------------------------------------------------------ records

EnergyRecord record(const GalerkinSystem& system, const SpectralField& f,
                    double t, int sup_refine) {
  EnergyRecord r;
  r.t = t;
  const SpectralNorms n = norms(f);
  r.l2sq = n.l2sq;
  r.h1sq = n.h1sq;
  r.h2sq = n.h2sq;
  r.h3sq = n.h3sq;

  const SpectralField nl = system.nonlinear(f);
  const SpectralField nl_fine = system.nonlinear_on(f, f.domain().refined(2));
  r.aliasing_residual = std::sqrt(sum_sq_diff(nl.coeffs(), nl_fine.coeffs()));

  const auto& lambda = system.eigenvalues();
  const std::size_t modes = lambda.size();
  const double kappa1 = system.params().kappa1;
  const auto a = f.coeffs();
  const auto b = nl.coeffs();
  double dt_sq = 0.0;
  for (int c = 0; c < kComponents; ++c) {
    for (std::size_t m = 0; m < modes; ++m) {
      const std::size_t i = c * modes + m;
      const double rate = -kappa1 * lambda[m] * a[i] + b[i];
      dt_sq += rate * rate;
      r.power_l2 += a[i] * rate;
      r.power_h2 += lambda[m] * lambda[m] * a[i] * rate;
    }
  }
  r.dt_norm = std::sqrt(dt_sq);
  r.sup_est = sup_norm_estimate(f, sup_refine);
  return r;
}

void fill_identity_residuals(std::span<EnergyRecord> records) {
  const std::size_t n = records.size();
  if (n < 3) return;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = i == 0 ? 0 : (i == n - 1 ? n - 3 : i - 1);
    const auto& r0 = records[s];
    const auto& r1 = records[s + 1];
    const auto& r2 = records[s + 2];
    const double x = records[i].t;
    const double dl2 = three_point_derivative(x, r0.t, r1.t, r2.t, 0.5 * r0.l2sq,
                                              0.5 * r1.l2sq, 0.5 * r2.l2sq);
    const double dh2 = three_point_derivative(x, r0.t, r1.t, r2.t, 0.5 * r0.h2sq,
                                              0.5 * r1.h2sq, 0.5 * r2.h2sq);
    records[i].identity_residual_l2 = dl2 - records[i].power_l2;
    records[i].identity_residual_h2 = dh2 - records[i].power_h2;
  }
}

IntegratedResidual integrated_residuals(std::span<const EnergyRecord> records) {
  IntegratedResidual out;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double h = records[i].t - records[i - 1].t;
    out.l2 += 0.5 * h * (std::fabs(records[i].identity_residual_l2) +
                         std::fabs(records[i - 1].identity_residual_l2));
    out.h2 += 0.5 * h * (std::fabs(records[i].identity_residual_h2) +
                         std::fabs(records[i - 1].identity_residual_h2));
  }
  return out;
}

// -------------------------------------------------------------- calibration

namespace {

struct EmbeddingRatios {
  double sup = 0.0;
  double grad6 = 0.0;
  double hess3 = 0.0;
};

EmbeddingRatios embedding_ratios(const SpectralField& f, int refine) {
  EmbeddingRatios r;
  const SpectralNorms n = norms(f);
  const double y = n.l2sq + n.h2sq;
  if (!(y > 0.0)) return r;
  const double root = std::sqrt(y);
  const BoxDomain fine = f.domain().refined(refine);
  const int d = f.domain().dim();
  const double w = fine.quadrature_weight();
  const std::size_t nodes = fine.node_count();

  r.sup = sup_norm_estimate(f, refine) / root;

  std::vector<double> grad2(nodes, 0.0);
  for (int a = 0; a < d; ++a) {
    std::vector<int> orders(d, 0);
    orders[a] = 1;
    const GridField g = synthesize_on(f, fine, orders);
    for (int c = 0; c < kComponents; ++c) {
      const auto v = g.component(c);
      for (std::size_t i = 0; i < nodes; ++i) grad2[i] += v[i] * v[i];
    }
  }
  double s6 = 0.0;
  for (double g2 : grad2) s6 += g2 * g2 * g2;
  r.grad6 = std::pow(w * s6, 1.0 / 6.0) / root;

  std::vector<double> hess2(nodes, 0.0);
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      std::vector<int> orders(d, 0);
      if (a == b) {
        orders[a] = 2;
      } else {
        orders[a] = 1;
        orders[b] = 1;
      }
      const double mult = a == b ? 1.0 : 2.0;
      const GridField g = synthesize_on(f, fine, orders);
      for (int c = 0; c < kComponents; ++c) {
        const auto v = g.component(c);
        for (std::size_t i = 0; i < nodes; ++i) hess2[i] += mult * v[i] * v[i];
      }
    }
  }
  double s3 = 0.0;
  for (double h2 : hess2) s3 += h2 * std::sqrt(h2);
  r.hess3 = std::cbrt(w * s3) / root;
  return r;
}

}  // namespace

SobolevConstants calibrate_sobolev(const BoxDomain& domain,
                                   std::span<const int> trunc, int samples,
                                   std::uint64_t seed, int refine,
                                   bool allow_few_samples) {
  if (samples < 1 || (samples < 100 && !allow_few_samples)) {
    throw ConfigError("calibration needs at least 100 samples");
  }
  const std::vector<int> tr(trunc.begin(), trunc.end());
  const auto lambda = eigenvalues(domain, tr);
  const std::size_t modes = lambda.size();

  EmbeddingRatios best;
  auto consider = [&](const SpectralField& f) {
    const EmbeddingRatios r = embedding_ratios(f, refine);
    best.sup = std::max(best.sup, r.sup);
    best.grad6 = std::max(best.grad6, r.grad6);
    best.hess3 = std::max(best.hess3, r.hess3);
  };

  {
    SpectralField constant(domain, tr);
    constant.component(0)[0] = 1.0;
    consider(constant);

    // Maximizer of |u(0)|^2 / (l2sq + h2sq): coefficients e_k(0) / (1 + lambda^2).
    SpectralField kernel(domain, tr);
    for (std::size_t m = 0; m < modes; ++m) {
      const ModeIndex k = kernel.mode_at(m);
      double e0 = 1.0;
      for (int j = 0; j < domain.dim(); ++j) e0 *= basis_constant(k.k[j], domain.length(j));
      kernel.component(0)[m] = e0 / (1.0 + lambda[m] * lambda[m]);
    }
    consider(kernel);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr std::array<double, 3> kDecay{0.5, 1.0, 1.5};
  for (int s = 0; s < samples; ++s) {
    const double p = kDecay[s % kDecay.size()];
    SpectralField f(domain, tr);
    for (int c = 0; c < kComponents; ++c) {
      auto comp = f.component(c);
      for (std::size_t m = 0; m < modes; ++m) {
        comp[m] = normal(rng) * std::pow(1.0 + lambda[m], -p);
      }
    }
    consider(f);
  }

  SobolevConstants out;
  out.c_inf = kCalibrationSafety * best.sup;
  out.k6 = kCalibrationSafety * best.grad6;
  out.k3 = kCalibrationSafety * best.hess3;
  out.samples = samples;
  out.seed = seed;
  return out;
}

// ----------------------------------------------------------------- majorant

double Majorant::rate(double y) const {
  if (!(y >= 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const GLLBParams& p = params_;
  const double l = constants_.c_inf * std::sqrt(y);
  const double vol = volume_;
  const double c1 = std::cbrt(vol);
  const double g = std::fabs(p.gamma);
  const double k2 = std::fabs(p.kappa2);
  const double mu = std::fabs(p.mu);
  const double k6sq = constants_.k6 * constants_.k6;
  const double k3sq = constants_.k3 * constants_.k3;

  double v = 0.0;
  double q = 0.0;
  if (g > 0.0) {
    const double j = bounds_.J(l);
    const double i = bounds_.I(l);
    if (j * l > 0.0) v += 2.0 * g * j * l * std::sqrt(vol) * std::sqrt(y);
    if (i > 0.0 && y > 0.0) q += g * g * i * i * k6sq * k3sq * y * y;
  }
  if (k2 > 0.0) {
    const double j = bounds_.J(l);
    const double i = bounds_.I(l);
    const double growth = 1.0 + (mu > 0.0 ? mu * bounds_.H(l) : 0.0);
    if (j * l > 0.0) v += 2.0 * k2 * growth * j * l * vol;
    if (y > 0.0) {
      if (mu > 0.0 && j > 0.0) q += k2 * k2 * mu * mu * c1 * c1 * j * j * j * j * k6sq * y;
      if (i > 0.0) q += k2 * k2 * growth * growth * c1 * c1 * i * i * k6sq * y;
    }
  }
  return v + 3.0 / p.kappa1 * q;
}

double Majorant::operator()(double t) const {
  if (t <= times_.front()) return values_.front();
  if (t > times_.back()) {
    return blowup_time_ ? std::numeric_limits<double>::infinity() : values_.back();
  }
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const auto hi = static_cast<std::size_t>(it - times_.begin());
  if (times_[hi] == t) return values_[hi];
  const std::size_t lo = hi - 1;
  const double s = (t - times_[lo]) / (times_[hi] - times_[lo]);
  return values_[lo] + s * (values_[hi] - values_[lo]);
}

namespace {

struct MajorantOverflow {};

}  // namespace

Majorant build_majorant(double y0, const GLLBParams& params,
                        const BoundFns& bounds, const SobolevConstants& constants,
                        const BoxDomain& domain, const MajorantOptions& options) {
  namespace ode = boost::numeric::odeint;
  if (!(y0 >= 0.0) || !std::isfinite(y0)) {
    throw InputError("majorant initial value must be finite and nonnegative");
  }
  if (!(options.t_max > 0.0) || options.table_points < 2) {
    throw ConfigError("majorant needs t_max > 0 and at least two table points");
  }
  validate(params);

  Majorant mj;
  mj.y0_ = y0;
  mj.t_max_ = options.t_max;
  mj.threshold_ = 2.0 * std::max(y0, 1.0);
  mj.params_ = params;
  mj.bounds_ = bounds;
  mj.constants_ = constants;
  mj.volume_ = domain.volume();

  using State = std::array<double, 1>;
  auto system = [&mj, &options](const State& x, State& dxdt, double) {
    if (!std::isfinite(x[0]) || x[0] > options.overflow) throw MajorantOverflow{};
    const double b = mj.rate(std::max(x[0], 0.0));
    if (!std::isfinite(b)) throw MajorantOverflow{};
    dxdt[0] = b;
  };

  const double t_max = options.t_max;
  std::vector<std::pair<double, double>> table;
  table.reserve(options.table_points + 256);
  const int points = options.table_points;
  auto uniform_t = [&](int i) { return t_max * i / (points - 1); };
  int next_uniform = 1;
  table.emplace_back(0.0, y0);

  auto stepper = ode::make_dense_output(options.abs_tol, options.rel_tol,
                                        ode::runge_kutta_dopri5<State>());
  stepper.initialize(State{y0}, 0.0, std::min(1e-6, t_max * 1e-6));

  std::optional<double> crossing;
  int retries = 0;
  while (stepper.current_time() < t_max) {
    std::pair<double, double> span;
    try {
      span = stepper.do_step(system);
    } catch (const MajorantOverflow&) {
      // A trial stage overflowed; the last accepted state is intact, so
      // restart from it with a much smaller step.
      const double t = stepper.current_time();
      const double h = stepper.current_time_step();
      if (++retries > 100 || h < 1e-14 * std::max(1.0, t)) {
        mj.blowup_time_ = t;
        break;
      }
      const State x = stepper.current_state();
      stepper.initialize(x, t, h / 16);
      continue;
    }
    const auto [t0, t1] = span;
    const double y1 = stepper.current_state()[0];
    if (!std::isfinite(y1) || y1 > options.overflow) {
      mj.blowup_time_ = t0;
      break;
    }
    const double hi = std::min(t1, t_max);
    State tmp;
    while (next_uniform < points && uniform_t(next_uniform) <= hi) {
      const double tu = uniform_t(next_uniform);
      stepper.calc_state(tu, tmp);
      table.emplace_back(tu, tmp[0]);
      ++next_uniform;
    }
    if (t1 <= t_max) table.emplace_back(t1, y1);

    if (!crossing) {
      stepper.calc_state(hi, tmp);
      if (tmp[0] > mj.threshold_) {
        double a = t0, b = hi;
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
          const double m = 0.5 * (a + b);
          stepper.calc_state(m, tmp);
          if (tmp[0] > mj.threshold_) {
            b = m;
          } else {
            a = m;
          }
        }
        crossing = a;
      }
    }
    if (t1 - t0 < 1e-14 * std::max(1.0, t0)) {
      mj.blowup_time_ = t1;
      break;
    }
  }

  std::sort(table.begin(), table.end());
  table.erase(std::unique(table.begin(), table.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              table.end());
  if (mj.blowup_time_) {
    while (table.size() > 1 && table.back().first > *mj.blowup_time_) table.pop_back();
  }
  for (const auto& [t, y] : table) {
    mj.times_.push_back(t);
    mj.values_.push_back(y);
  }

  if (crossing) {
    mj.doubled_ = true;
    mj.tstar_ = *crossing;
  } else if (mj.blowup_time_) {
    mj.tstar_ = *mj.blowup_time_;
  } else {
    mj.tstar_ = t_max;
  }
  return mj;
}

DominanceReport check_dominance(const Trajectory& trajectory,
                                const Majorant& majorant) {
  DominanceReport rep;
  if (trajectory.energy.empty()) return rep;
  const auto& first = trajectory.energy.front();
  const double e0 = first.l2sq + first.h2sq;
  if (e0 > majorant.y0() * (1.0 + 1e-12) + 1e-300) {
    throw InputError("trajectory starts above the majorant's initial value");
  }
  rep.min_margin = std::numeric_limits<double>::infinity();
  const double t_limit = majorant.tstar() * (1.0 + 1e-12);
  for (const auto& r : trajectory.energy) {
    if (r.t > t_limit) continue;
    const double e = r.l2sq + r.h2sq;
    const double y = majorant(r.t);
    ++rep.checked;
    rep.min_margin = std::min(rep.min_margin, y - e);
    if (e > y + 1e-12 * std::max(1.0, y)) {
      rep.dominated = false;
      rep.violations.push_back({r.t, e, y});
    }
  }
  if (rep.checked == 0) rep.min_margin = 0.0;
  return rep;
}

}  // namespace gllb
