#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace gllb::detail {

/// Contracts one axis of a row-major tensor with a matrix:
///   out[..., p, ...] = sum_k m(p, k) in[..., k, ...].
/// `shape` is updated in place (shape[axis] becomes m.rows()).
inline std::vector<double> apply_along_axis(const std::vector<double>& in,
                                            std::vector<int>& shape, int axis,
                                            const Eigen::MatrixXd& m) {
  std::size_t outer = 1;
  for (int j = 0; j < axis; ++j) outer *= static_cast<std::size_t>(shape[j]);
  std::size_t inner = 1;
  for (std::size_t j = axis + 1; j < shape.size(); ++j) {
    inner *= static_cast<std::size_t>(shape[j]);
  }
  const auto n_in = static_cast<std::size_t>(shape[axis]);
  const auto n_out = static_cast<std::size_t>(m.rows());
  std::vector<double> out(outer * n_out * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t p = 0; p < n_out; ++p) {
      double* dst = out.data() + (o * n_out + p) * inner;
      for (std::size_t k = 0; k < n_in; ++k) {
        const double w = m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(k));
        if (w == 0.0) continue;
        const double* src = in.data() + (o * n_in + k) * inner;
        for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
      }
    }
  }
  shape[axis] = static_cast<int>(n_out);
  return out;
}

}  // namespace gllb::detail
