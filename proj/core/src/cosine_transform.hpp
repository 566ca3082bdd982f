#pragma once

#include <span>

namespace gllb::detail {

enum class AxisTransform {
  kCosineSynthesis,  // FFTW_REDFT01 (DCT-III)
  kSineSynthesis,    // FFTW_RODFT01 (DST-III)
  kCosineAnalysis,   // FFTW_REDFT10 (DCT-II)
};

/// Applies a separable real-to-real transform to `batch` contiguous arrays of
/// the given row-major shape. `in` and `out` may alias. Plans are cached per
/// thread; plan creation and destruction are serialized on a global mutex
/// because the FFTW planner is not thread safe.
void apply_r2r(std::span<const int> shape, std::span<const AxisTransform> kinds,
               int batch, std::span<const double> in, std::span<double> out);

}  // namespace gllb::detail
