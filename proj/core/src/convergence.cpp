#include "gllb/convergence.hpp"

#include <cmath>
#include <future>
#include <limits>

#include "gllb/errors.hpp"

namespace gllb {

SolverConfig with_truncation(const SolverConfig& base, int n) {
  if (n < 1) throw ConfigError("truncation must be positive");
  SolverConfig cfg = base;
  const int d = base.domain.dim();
  cfg.domain = base.domain.with_quad_points(std::vector<int>(d, std::max(4, 2 * n)));
  cfg.trunc.assign(d, n);
  return cfg;
}

namespace {

double rate(double coarse, double fine, double n_ratio) {
  if (!(coarse > 0.0) || !(fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log(coarse / fine) / std::log(n_ratio);
}

}  // namespace

ConvergenceReport cauchy_study(const SolverConfig& base, const InitialData& u0,
                               std::span<const int> n_list) {
  if (n_list.size() < 2) throw ConfigError("convergence study needs at least two truncations");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw ConfigError("truncations must be positive");
    if (i > 0 && n_list[i] <= n_list[i - 1]) {
      throw ConfigError("truncations must be strictly increasing");
    }
  }
  validate(base);

  ConvergenceReport rep;
  rep.n_list.assign(n_list.begin(), n_list.end());

  std::vector<std::future<Trajectory>> futures;
  for (int n : n_list) {
    futures.push_back(std::async(std::launch::async, [&base, &u0, n] {
      return simulate(with_truncation(base, n), u0);
    }));
  }
  std::vector<Trajectory> runs;
  for (auto& f : futures) runs.push_back(f.get());
  for (const auto& r : runs) rep.diverged.push_back(r.outcome != Outcome::kCompleted);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    PairwiseDiff d{n_list[i], n_list[i + 1], 0.0, 0.0, 0.0};
    if (rep.diverged[i] || rep.diverged[i + 1]) {
      d.l2 = d.h1 = d.sup = nan;
      rep.pairwise_diffs.push_back(d);
      continue;
    }
    const Trajectory& coarse = runs[i];
    const Trajectory& fine = runs[i + 1];
    const std::size_t common = std::min(coarse.times.size(), fine.times.size());
    for (std::size_t r = 0; r < common; ++r) {
      if (std::fabs(coarse.times[r] - fine.times[r]) > 1e-12 * std::max(1.0, fine.times[r])) {
        throw InputError("convergence runs recorded at different times");
      }
      const SpectralField& f = fine.states[r];
      const SpectralField padded =
          embed(coarse.states[r], f.domain(), std::vector<int>(f.trunc().begin(), f.trunc().end()));
      std::vector<double> diff(f.coeffs().size());
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = f.coeffs()[k] - padded.coeffs()[k];
      const SpectralField delta(f.domain(), std::vector<int>(f.trunc().begin(), f.trunc().end()),
                                std::move(diff));
      const SpectralNorms n = norms(delta);
      d.l2 = std::max(d.l2, std::sqrt(n.l2sq));
      d.h1 = std::max(d.h1, std::sqrt(n.l2sq + n.h1sq));
      d.sup = std::max(d.sup, sup_norm_estimate(delta, base.sup_refine));
    }
    rep.pairwise_diffs.push_back(d);
  }

  for (std::size_t i = 0; i + 1 < rep.pairwise_diffs.size(); ++i) {
    const auto& a = rep.pairwise_diffs[i];
    const auto& b = rep.pairwise_diffs[i + 1];
    const double ratio = static_cast<double>(b.n_fine) / a.n_fine;
    rep.rates_l2.push_back(rate(a.l2, b.l2, ratio));
    rep.rates_h1.push_back(rate(a.h1, b.h1, ratio));
    rep.rates_sup.push_back(rate(a.sup, b.sup, ratio));
  }
  return rep;
}

}  // namespace gllb
