#pragma once

// Brute-force reference implementations used as test oracles. Nothing here
// calls into the transform code.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "gllb/spectral_basis.hpp"

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

// d^order/dx^order of sqrt(norm/L) cos(k pi x / L)
inline double basis_1d(int k, double length, double x, int order = 0) {
  const double c = std::sqrt((k == 0 ? 1.0 : 2.0) / length);
  const double w = k * kPi / length;
  switch (order) {
    case 0: return c * std::cos(w * x);
    case 1: return -c * w * std::sin(w * x);
    default: return -c * w * w * std::cos(w * x);
  }
}

// Multi-index of flat mode m in a row-major (n_1, ..., n_d) block.
inline std::vector<int> unflatten(std::size_t m, const std::vector<int>& trunc) {
  std::vector<int> k(trunc.size());
  for (std::size_t j = trunc.size(); j-- > 0;) {
    k[j] = static_cast<int>(m % trunc[j]);
    m /= trunc[j];
  }
  return k;
}

// Direct double sum of the cosine series (or a partial derivative of it) at x.
inline double series(const gllb::SpectralField& f, int component, const std::vector<double>& x,
                     const std::vector<int>& orders = {}) {
  const std::vector<int> trunc(f.trunc().begin(), f.trunc().end());
  const auto coeffs = f.component(component);
  double sum = 0.0;
  for (std::size_t m = 0; m < f.mode_count(); ++m) {
    const auto k = unflatten(m, trunc);
    double v = coeffs[m];
    for (std::size_t j = 0; j < k.size(); ++j) {
      v *= basis_1d(k[j], f.domain().length(static_cast<int>(j)), x[j],
                    orders.empty() ? 0 : orders[j]);
    }
    sum += v;
  }
  return sum;
}

inline gllb::SpectralField random_field(const gllb::BoxDomain& domain, std::vector<int> trunc,
                                        std::uint64_t seed, double decay = 0.0) {
  gllb::SpectralField f(domain, trunc);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int c = 0; c < gllb::kComponents; ++c) {
    auto comp = f.component(c);
    for (std::size_t m = 0; m < comp.size(); ++m) {
      double kk = 0.0;
      for (int k : unflatten(m, trunc)) kk += k;
      comp[m] = u(rng) / std::pow(1.0 + kk, decay);
    }
  }
  return f;
}

// Nodes of a domain as coordinate vectors in row-major order.
inline std::vector<std::vector<double>> nodes(const gllb::BoxDomain& d) {
  const std::vector<int> n(d.quad_points().begin(), d.quad_points().end());
  std::vector<std::vector<double>> out;
  for (std::size_t p = 0; p < d.node_count(); ++p) {
    const auto idx = unflatten(p, n);
    std::vector<double> x(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
      x[j] = d.length(static_cast<int>(j)) * (2 * idx[j] + 1) / (2.0 * n[j]);
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace oracle
