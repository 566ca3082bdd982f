#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "gllb/spectral_basis.hpp"

namespace gllb {

/// One coefficient of u0 in the normalized cosine basis.
struct ModeEntry {
  int component = 0;
  std::vector<int> k;
  double value = 0.0;
};

/// Finite cosine-mode description of an initial field. Entries may reference
/// modes above any particular truncation; repeated entries add up.
struct ModeTable {
  int dim = 1;
  std::vector<ModeEntry> entries;
};

using InitialData = std::variant<GridField, ModeTable>;

ModeTable single_mode(int dim, int component, std::vector<int> k,
                      double amplitude);

/// Coefficients amplitude * g / (1 + |k|)^decay with g ~ N(0,1) for every
/// component and every k with k_j < modes[j]. Deterministic for a seed.
ModeTable random_band_limited(int dim, std::vector<int> modes, double amplitude,
                              double decay, std::uint64_t seed);

/// Norms of the full (untruncated) series.
SpectralNorms mode_table_norms(const ModeTable& table, const BoxDomain& box);

/// Exact evaluation of the series at the box's quadrature nodes.
GridField evaluate_on(const ModeTable& table, const BoxDomain& grid);

/// Largest k_j + 1 over entries, per axis (at least 1).
std::vector<int> mode_extent(const ModeTable& table);

}  // namespace gllb
