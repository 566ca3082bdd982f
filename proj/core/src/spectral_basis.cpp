#include "gllb/spectral_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "cosine_transform.hpp"
#include "gllb/errors.hpp"
#include "tensor_ops.hpp"

namespace gllb {

using detail::AxisTransform;
using std::numbers::pi;

namespace {

std::size_t product(std::span<const int> v) {
  std::size_t p = 1;
  for (int x : v) p *= static_cast<std::size_t>(x);
  return p;
}

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw InputError(std::string(what) + " contains non-finite values");
    }
  }
}

// Unravels a row-major flat index into per-axis indices.
void unravel(std::size_t flat, std::span<const int> shape, std::span<int> out) {
  for (int j = static_cast<int>(shape.size()) - 1; j >= 0; --j) {
    out[j] = static_cast<int>(flat % static_cast<std::size_t>(shape[j]));
    flat /= static_cast<std::size_t>(shape[j]);
  }
}

}  // namespace

// ---------------------------------------------------------------- BoxDomain

BoxDomain::BoxDomain(std::vector<double> lengths, std::vector<int> quad_points)
    : lengths_(std::move(lengths)), quad_points_(std::move(quad_points)) {
  if (lengths_.empty() || lengths_.size() > 3) {
    throw InputError("box dimension must be 1, 2 or 3");
  }
  if (lengths_.size() != quad_points_.size()) {
    throw InputError("box needs one quadrature size per edge length");
  }
  for (double l : lengths_) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw InputError("box edge lengths must be positive and finite");
    }
  }
  for (int n : quad_points_) {
    if (n < 4 || n % 2 != 0) {
      throw InputError("quadrature sizes must be even and at least 4");
    }
  }
}

double BoxDomain::volume() const noexcept {
  return std::accumulate(lengths_.begin(), lengths_.end(), 1.0,
                         std::multiplies<>());
}

std::size_t BoxDomain::node_count() const noexcept {
  return product(quad_points_);
}

double BoxDomain::node(int axis, int i) const {
  return length(axis) * (2.0 * i + 1.0) / (2.0 * quad_points(axis));
}

double BoxDomain::quadrature_weight() const noexcept {
  double w = 1.0;
  for (std::size_t j = 0; j < lengths_.size(); ++j) {
    w *= lengths_[j] / quad_points_[j];
  }
  return w;
}

BoxDomain BoxDomain::with_quad_points(std::vector<int> quad_points) const {
  return BoxDomain(lengths_, std::move(quad_points));
}

BoxDomain BoxDomain::refined(int factor) const {
  if (factor < 1) throw InputError("refinement factor must be >= 1");
  std::vector<int> q = quad_points_;
  for (int& n : q) n *= factor;
  return BoxDomain(lengths_, std::move(q));
}

// ------------------------------------------------------------- basis values

double basis_constant(int k, double length) {
  return std::sqrt((k == 0 ? 1.0 : 2.0) / length);
}

double eigenvalue(const ModeIndex& k, const BoxDomain& box) {
  if (static_cast<int>(k.k.size()) != box.dim()) {
    throw InputError("mode index dimension does not match the box");
  }
  double lambda = 0.0;
  for (int j = 0; j < box.dim(); ++j) {
    if (k.k[j] < 0) throw InputError("mode indices must be nonnegative");
    const double w = k.k[j] * pi / box.length(j);
    lambda += w * w;
  }
  return lambda;
}

double cos_pi(double x) {
  const double r = std::fmod(std::fabs(x), 2.0);
  if (r == 0.0) return 1.0;
  if (r == 0.5 || r == 1.5) return 0.0;
  if (r == 1.0) return -1.0;
  return std::cos(pi * r);
}

double sin_pi(double x) {
  const double s = x < 0.0 ? -1.0 : 1.0;
  const double r = std::fmod(std::fabs(x), 2.0);
  if (r == 0.0 || r == 1.0) return 0.0;
  if (r == 0.5) return s;
  if (r == 1.5) return -s;
  return s * std::sin(pi * r);
}

// ------------------------------------------------------------ SpectralField

SpectralField::SpectralField(BoxDomain domain, std::vector<int> trunc)
    : domain_(std::move(domain)), trunc_(std::move(trunc)) {
  if (static_cast<int>(trunc_.size()) != domain_.dim()) {
    throw InputError("truncation needs one mode count per axis");
  }
  for (int j = 0; j < domain_.dim(); ++j) {
    if (trunc_[j] < 1 || 2 * trunc_[j] > domain_.quad_points(j)) {
      throw InputError("mode counts must satisfy 1 <= n_j <= N_j/2 (axis " +
                       std::to_string(j) + ")");
    }
  }
  modes_ = product(trunc_);
  coeffs_.assign(kComponents * modes_, 0.0);
}

SpectralField::SpectralField(BoxDomain domain, std::vector<int> trunc,
                             std::vector<double> coeffs)
    : SpectralField(std::move(domain), std::move(trunc)) {
  if (coeffs.size() != coeffs_.size()) {
    throw InputError("coefficient array has the wrong size");
  }
  check_finite(coeffs, "spectral field");
  coeffs_ = std::move(coeffs);
}

std::span<const double> SpectralField::component(int c) const {
  return std::span<const double>(coeffs_).subspan(c * modes_, modes_);
}

std::span<double> SpectralField::component(int c) {
  return std::span<double>(coeffs_).subspan(c * modes_, modes_);
}

std::size_t SpectralField::flat_mode(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != domain_.dim()) {
    throw InputError("mode index dimension does not match the field");
  }
  std::size_t flat = 0;
  for (int j = 0; j < domain_.dim(); ++j) {
    if (k[j] < 0 || k[j] >= trunc_[j]) {
      throw InputError("mode index outside the truncation");
    }
    flat = flat * static_cast<std::size_t>(trunc_[j]) + k[j];
  }
  return flat;
}

ModeIndex SpectralField::mode_at(std::size_t flat) const {
  ModeIndex m{std::vector<int>(domain_.dim())};
  unravel(flat, trunc_, m.k);
  return m;
}

double SpectralField::coeff(int c, const ModeIndex& k) const {
  return coeffs_.at(c * modes_ + flat_mode(k.k));
}

void SpectralField::set_coeff(int c, const ModeIndex& k, double value) {
  if (!std::isfinite(value)) throw InputError("coefficient must be finite");
  coeffs_.at(c * modes_ + flat_mode(k.k)) = value;
}

double SpectralField::max_abs() const noexcept {
  double m = 0.0;
  for (double x : coeffs_) m = std::max(m, std::fabs(x));
  return m;
}

// ---------------------------------------------------------------- GridField

GridField::GridField(BoxDomain domain)
    : domain_(std::move(domain)), nodes_(domain_.node_count()) {
  values_.assign(kComponents * nodes_, 0.0);
}

GridField::GridField(BoxDomain domain, std::vector<double> values)
    : GridField(std::move(domain)) {
  if (values.size() != values_.size()) {
    throw InputError("grid value array has the wrong size");
  }
  check_finite(values, "grid field");
  values_ = std::move(values);
}

std::span<const double> GridField::component(int c) const {
  return std::span<const double>(values_).subspan(c * nodes_, nodes_);
}

std::span<double> GridField::component(int c) {
  return std::span<double>(values_).subspan(c * nodes_, nodes_);
}

double GridField::max_abs() const noexcept {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::fabs(x));
  return m;
}

// --------------------------------------------------------------- transforms

std::vector<double> eigenvalues(const BoxDomain& box, std::span<const int> trunc) {
  const std::size_t modes = product(trunc);
  std::vector<double> lambda(modes);
  std::vector<int> k(box.dim());
  for (std::size_t m = 0; m < modes; ++m) {
    unravel(m, trunc, k);
    double s = 0.0;
    for (int j = 0; j < box.dim(); ++j) {
      const double w = k[j] * pi / box.length(j);
      s += w * w;
    }
    lambda[m] = s;
  }
  return lambda;
}

GridField synthesize(const SpectralField& f) {
  return synthesize_on(f, f.domain());
}

GridField synthesize_on(const SpectralField& f, const BoxDomain& target,
                        std::span<const int> derivative_orders) {
  const int d = f.domain().dim();
  if (target.dim() != d) throw InputError("target grid dimension mismatch");
  for (int j = 0; j < d; ++j) {
    if (target.length(j) != f.domain().length(j)) {
      throw InputError("target grid must cover the same box");
    }
    if (f.trunc()[j] > target.quad_points(j)) {
      throw InputError("target grid too coarse for the truncation");
    }
  }
  std::vector<int> orders(d, 0);
  if (!derivative_orders.empty()) {
    if (static_cast<int>(derivative_orders.size()) != d) {
      throw InputError("one derivative order per axis required");
    }
    std::copy(derivative_orders.begin(), derivative_orders.end(),
              orders.begin());
  }

  // Per-axis placement and scaling so that the DCT-III / DST-III sums
  // reproduce c(k) cos(k pi x / L) and its derivatives at the nodes.
  std::vector<std::vector<double>> scale(d);
  std::vector<std::vector<int>> slot(d);
  std::vector<AxisTransform> kinds(d);
  for (int j = 0; j < d; ++j) {
    const int n = f.trunc()[j];
    const double len = f.domain().length(j);
    scale[j].resize(n);
    slot[j].resize(n);
    kinds[j] = orders[j] == 1 ? AxisTransform::kSineSynthesis
                              : AxisTransform::kCosineSynthesis;
    for (int k = 0; k < n; ++k) {
      const double c = basis_constant(k, len);
      const double w = k * pi / len;
      const double half = k == 0 ? 1.0 : 0.5;
      switch (orders[j]) {
        case 0:
          scale[j][k] = c * half;
          slot[j][k] = k;
          break;
        case 1:
          scale[j][k] = -c * w * 0.5;
          slot[j][k] = k - 1;  // k = 0 has zero derivative; skipped below
          break;
        case 2:
          scale[j][k] = -c * w * w * half;
          slot[j][k] = k;
          break;
        default:
          throw InputError("derivative orders must be 0, 1 or 2");
      }
    }
  }

  const std::vector<int> shape(target.quad_points().begin(),
                               target.quad_points().end());
  const std::size_t nodes = target.node_count();
  std::vector<double> buffer(kComponents * nodes, 0.0);
  std::vector<int> k(d);
  for (std::size_t m = 0; m < f.mode_count(); ++m) {
    unravel(m, f.trunc(), k);
    double s = 1.0;
    std::size_t dest = 0;
    bool skip = false;
    for (int j = 0; j < d; ++j) {
      if (slot[j][k[j]] < 0) {
        skip = true;
        break;
      }
      s *= scale[j][k[j]];
      dest = dest * static_cast<std::size_t>(shape[j]) + slot[j][k[j]];
    }
    if (skip) continue;
    for (int c = 0; c < kComponents; ++c) {
      buffer[c * nodes + dest] = s * f.component(c)[m];
    }
  }
  detail::apply_r2r(shape, kinds, kComponents, buffer, buffer);
  return GridField(target, std::move(buffer));
}

SpectralField analyze(const GridField& g, std::vector<int> trunc) {
  const BoxDomain& box = g.domain();
  const int d = box.dim();
  SpectralField out(box, std::move(trunc));

  const std::vector<int> shape(box.quad_points().begin(),
                               box.quad_points().end());
  std::vector<AxisTransform> kinds(d, AxisTransform::kCosineAnalysis);
  std::vector<double> buffer(g.values().begin(), g.values().end());
  detail::apply_r2r(shape, kinds, kComponents, buffer, buffer);

  std::vector<std::vector<double>> scale(d);
  for (int j = 0; j < d; ++j) {
    const double len = box.length(j);
    const int n = out.trunc()[j];
    scale[j].resize(n);
    for (int k = 0; k < n; ++k) {
      scale[j][k] = len / shape[j] * basis_constant(k, len) * 0.5;
    }
  }

  const std::size_t nodes = box.node_count();
  std::vector<int> k(d);
  for (std::size_t m = 0; m < out.mode_count(); ++m) {
    unravel(m, out.trunc(), k);
    double s = 1.0;
    std::size_t src = 0;
    for (int j = 0; j < d; ++j) {
      s *= scale[j][k[j]];
      src = src * static_cast<std::size_t>(shape[j]) + k[j];
    }
    for (int c = 0; c < kComponents; ++c) {
      out.component(c)[m] = s * buffer[c * nodes + src];
    }
  }
  return out;
}

SpectralField laplacian(const SpectralField& f) {
  const auto lambda = eigenvalues(f.domain(), f.trunc());
  SpectralField out = f;
  for (int c = 0; c < kComponents; ++c) {
    auto comp = out.component(c);
    for (std::size_t m = 0; m < comp.size(); ++m) comp[m] *= -lambda[m];
  }
  return out;
}

SpectralNorms norms(const SpectralField& f) {
  const auto lambda = eigenvalues(f.domain(), f.trunc());
  SpectralNorms n;
  for (int c = 0; c < kComponents; ++c) {
    const auto comp = f.component(c);
    for (std::size_t m = 0; m < comp.size(); ++m) {
      const double a2 = comp[m] * comp[m];
      const double l = lambda[m];
      n.l2sq += a2;
      n.h1sq += l * a2;
      n.h2sq += l * l * a2;
      n.h3sq += l * l * l * a2;
    }
  }
  return n;
}

double sup_norm_estimate(const SpectralField& f, int refine) {
  const GridField g = synthesize_on(f, f.domain().refined(refine));
  const auto u0 = g.component(0);
  const auto u1 = g.component(1);
  const auto u2 = g.component(2);
  double m2 = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    m2 = std::max(m2, u0[i] * u0[i] + u1[i] * u1[i] + u2[i] * u2[i]);
  }
  return std::sqrt(m2);
}

double boundary_residual(const SpectralField& f) {
  const BoxDomain& box = f.domain();
  const int d = box.dim();
  std::vector<int> shape{kComponents};
  shape.insert(shape.end(), f.trunc().begin(), f.trunc().end());
  const std::vector<double> data(f.coeffs().begin(), f.coeffs().end());

  double worst = 0.0;
  for (int axis = 0; axis < d; ++axis) {
    for (double face : {0.0, 1.0}) {
      std::vector<double> cur = data;
      std::vector<int> cur_shape = shape;
      for (int j = 0; j < d; ++j) {
        const int n = f.trunc()[j];
        const double len = box.length(j);
        Eigen::MatrixXd m;
        if (j == axis) {
          // d/dx [c cos(k pi x / L)] at x = face * L.
          m.resize(1, n);
          for (int k = 0; k < n; ++k) {
            m(0, k) = -basis_constant(k, len) * (k * pi / len) *
                      sin_pi(static_cast<double>(k) * face);
          }
        } else {
          const int nq = box.quad_points(j);
          m.resize(nq, n);
          for (int i = 0; i < nq; ++i) {
            for (int k = 0; k < n; ++k) {
              m(i, k) = basis_constant(k, len) *
                        cos_pi(static_cast<double>(k) * (2 * i + 1) / (2.0 * nq));
            }
          }
        }
        cur = detail::apply_along_axis(cur, cur_shape, j + 1, m);
      }
      for (double v : cur) worst = std::max(worst, std::fabs(v));
    }
  }
  return worst;
}

SpectralField embed(const SpectralField& f, const BoxDomain& target,
                    std::vector<int> trunc) {
  const int d = f.domain().dim();
  if (target.dim() != d) throw InputError("embed: dimension mismatch");
  for (int j = 0; j < d; ++j) {
    if (target.length(j) != f.domain().length(j)) {
      throw InputError("embed: target must cover the same box");
    }
  }
  SpectralField out(target, std::move(trunc));
  std::vector<int> k(d);
  for (std::size_t m = 0; m < f.mode_count(); ++m) {
    unravel(m, f.trunc(), k);
    bool inside = true;
    for (int j = 0; j < d; ++j) inside = inside && k[j] < out.trunc()[j];
    if (!inside) continue;
    const std::size_t dest = out.flat_mode(k);
    for (int c = 0; c < kComponents; ++c) {
      out.component(c)[dest] = f.component(c)[m];
    }
  }
  return out;
}

std::vector<RankedMode> sorted_modes(const BoxDomain& box,
                                     std::span<const int> trunc) {
  const std::size_t modes = product(trunc);
  std::vector<RankedMode> out;
  out.reserve(modes);
  for (std::size_t m = 0; m < modes; ++m) {
    ModeIndex idx{std::vector<int>(box.dim())};
    unravel(m, trunc, idx.k);
    const double l = eigenvalue(idx, box);
    out.push_back({std::move(idx), l});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedMode& a, const RankedMode& b) {
                     return a.eigenvalue < b.eigenvalue;
                   });
  return out;
}

}  // namespace gllb
