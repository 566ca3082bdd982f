#include "gllb/initial_data.hpp"

#include <cmath>
#include <random>

#include "gllb/errors.hpp"
#include "tensor_ops.hpp"

namespace gllb {

namespace {

void check_table(const ModeTable& table, int dim) {
  if (table.dim != dim) throw InputError("mode table dimension does not match the box");
  for (const auto& e : table.entries) {
    if (e.component < 0 || e.component >= kComponents) {
      throw InputError("mode table component must be 0, 1 or 2");
    }
    if (static_cast<int>(e.k.size()) != dim) {
      throw InputError("mode table index has the wrong dimension");
    }
    for (int k : e.k) {
      if (k < 0) throw InputError("mode table indices must be nonnegative");
    }
    if (!std::isfinite(e.value)) throw InputError("mode table values must be finite");
  }
}

}  // namespace

ModeTable single_mode(int dim, int component, std::vector<int> k, double amplitude) {
  ModeTable t{dim, {{component, std::move(k), amplitude}}};
  check_table(t, dim);
  return t;
}

ModeTable random_band_limited(int dim, std::vector<int> modes, double amplitude,
                              double decay, std::uint64_t seed) {
  if (static_cast<int>(modes.size()) != dim) {
    throw ConfigError("random initial data needs one mode count per axis");
  }
  std::size_t total = 1;
  for (int m : modes) {
    if (m < 1) throw ConfigError("random initial data needs positive mode counts");
    total *= static_cast<std::size_t>(m);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ModeTable t{dim, {}};
  t.entries.reserve(kComponents * total);
  for (int c = 0; c < kComponents; ++c) {
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::vector<int> k(dim);
      std::size_t rest = flat;
      for (int j = dim - 1; j >= 0; --j) {
        k[j] = static_cast<int>(rest % static_cast<std::size_t>(modes[j]));
        rest /= static_cast<std::size_t>(modes[j]);
      }
      double knorm2 = 0.0;
      for (int x : k) knorm2 += static_cast<double>(x) * x;
      const double w = std::pow(1.0 + std::sqrt(knorm2), -decay);
      t.entries.push_back({c, std::move(k), amplitude * w * normal(rng)});
    }
  }
  return t;
}

std::vector<int> mode_extent(const ModeTable& table) {
  std::vector<int> ext(table.dim, 1);
  for (const auto& e : table.entries) {
    for (int j = 0; j < table.dim; ++j) ext[j] = std::max(ext[j], e.k[j] + 1);
  }
  return ext;
}

SpectralNorms mode_table_norms(const ModeTable& table, const BoxDomain& box) {
  check_table(table, box.dim());
  // Accumulate duplicates before squaring.
  const auto ext = mode_extent(table);
  std::size_t modes = 1;
  for (int e : ext) modes *= static_cast<std::size_t>(e);
  std::vector<double> dense(kComponents * modes, 0.0);
  for (const auto& e : table.entries) {
    std::size_t flat = 0;
    for (int j = 0; j < box.dim(); ++j) flat = flat * ext[j] + e.k[j];
    dense[e.component * modes + flat] += e.value;
  }
  const auto lambda = eigenvalues(box, ext);
  SpectralNorms n;
  for (int c = 0; c < kComponents; ++c) {
    for (std::size_t m = 0; m < modes; ++m) {
      const double a2 = dense[c * modes + m] * dense[c * modes + m];
      n.l2sq += a2;
      n.h1sq += lambda[m] * a2;
      n.h2sq += lambda[m] * lambda[m] * a2;
      n.h3sq += lambda[m] * lambda[m] * lambda[m] * a2;
    }
  }
  return n;
}

GridField evaluate_on(const ModeTable& table, const BoxDomain& grid) {
  check_table(table, grid.dim());
  const int d = grid.dim();
  const auto ext = mode_extent(table);
  std::size_t modes = 1;
  for (int e : ext) modes *= static_cast<std::size_t>(e);
  std::vector<double> dense(kComponents * modes, 0.0);
  for (const auto& e : table.entries) {
    std::size_t flat = 0;
    for (int j = 0; j < d; ++j) flat = flat * ext[j] + e.k[j];
    dense[e.component * modes + flat] += e.value;
  }
  std::vector<int> shape{kComponents};
  shape.insert(shape.end(), ext.begin(), ext.end());
  for (int j = 0; j < d; ++j) {
    const int nq = grid.quad_points(j);
    const double len = grid.length(j);
    Eigen::MatrixXd m(nq, ext[j]);
    for (int i = 0; i < nq; ++i) {
      for (int k = 0; k < ext[j]; ++k) {
        m(i, k) = basis_constant(k, len) *
                  cos_pi(static_cast<double>(k) * (2 * i + 1) / (2.0 * nq));
      }
    }
    dense = detail::apply_along_axis(dense, shape, j + 1, m);
  }
  return GridField(grid, std::move(dense));
}

}  // namespace gllb
