#pragma once

// Neumann Laplacian eigenbasis on axis-aligned boxes [0,L_1]x...x[0,L_d].
//
// Basis functions are tensor products of L2-normalized cosines
//   e_k(x) = prod_j c(k_j) cos(k_j pi x_j / L_j),
//   c(0) = sqrt(1/L_j), c(k>0) = sqrt(2/L_j),
// with -Laplace e_k = lambda_k e_k and lambda_k = sum_j (k_j pi / L_j)^2.
// Physical samples live on the midpoint ("cosine") nodes
//   x_i = L (2i+1) / (2N),  i = 0..N-1,
// where the midpoint rule integrates products of two retained modes exactly.

#include <cstddef>
#include <span>
#include <vector>

namespace gllb {

/// Number of vector components of every field (u maps into R^3).
inline constexpr int kComponents = 3;

class BoxDomain {
 public:
  /// Throws InputError unless 1 <= d <= 3, every length is positive and
  /// every quadrature size is even and at least 4.
  BoxDomain(std::vector<double> lengths, std::vector<int> quad_points);

  int dim() const noexcept { return static_cast<int>(lengths_.size()); }
  std::span<const double> lengths() const noexcept { return lengths_; }
  std::span<const int> quad_points() const noexcept { return quad_points_; }
  double length(int axis) const { return lengths_.at(axis); }
  int quad_points(int axis) const { return quad_points_.at(axis); }

  double volume() const noexcept;
  /// Total number of quadrature nodes, prod_j N_j.
  std::size_t node_count() const noexcept;
  /// Coordinate of node i along an axis.
  double node(int axis, int i) const;
  /// Midpoint-rule weight prod_j L_j / N_j shared by every node.
  double quadrature_weight() const noexcept;

  BoxDomain with_quad_points(std::vector<int> quad_points) const;
  /// Same box with every N_j multiplied by factor.
  BoxDomain refined(int factor) const;

  bool operator==(const BoxDomain&) const = default;

 private:
  std::vector<double> lengths_;
  std::vector<int> quad_points_;
};

struct ModeIndex {
  std::vector<int> k;
  bool operator==(const ModeIndex&) const = default;
};

/// L2 normalization constant of cos(k pi x / L) on [0, L].
double basis_constant(int k, double length);

/// lambda_k = sum_j (k_j pi / L_j)^2. Throws InputError on a dimension
/// mismatch or a negative index.
double eigenvalue(const ModeIndex& k, const BoxDomain& box);

/// Galerkin coefficients of an R^3-valued field, stored row-major with
/// shape (3, n_1, ..., n_d). Entry (c, k) multiplies e_k in component c.
class SpectralField {
 public:
  /// Zero field. Throws InputError unless 1 <= n_j <= N_j / 2.
  SpectralField(BoxDomain domain, std::vector<int> trunc);
  /// Throws InputError on a size mismatch or non-finite coefficients.
  SpectralField(BoxDomain domain, std::vector<int> trunc,
                std::vector<double> coeffs);

  const BoxDomain& domain() const noexcept { return domain_; }
  std::span<const int> trunc() const noexcept { return trunc_; }
  /// Modes per component, prod_j n_j.
  std::size_t mode_count() const noexcept { return modes_; }

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::span<double> coeffs() noexcept { return coeffs_; }
  std::span<const double> component(int c) const;
  std::span<double> component(int c);

  std::size_t flat_mode(std::span<const int> k) const;
  ModeIndex mode_at(std::size_t flat) const;

  double coeff(int c, const ModeIndex& k) const;
  void set_coeff(int c, const ModeIndex& k, double value);

  double max_abs() const noexcept;

 private:
  BoxDomain domain_;
  std::vector<int> trunc_;
  std::size_t modes_;
  std::vector<double> coeffs_;
};

/// Physical samples of an R^3-valued field on a domain's cosine nodes, shape
/// (3, N_1, ..., N_d) row-major.
class GridField {
 public:
  explicit GridField(BoxDomain domain);
  /// Throws InputError on a size mismatch or non-finite values.
  GridField(BoxDomain domain, std::vector<double> values);

  const BoxDomain& domain() const noexcept { return domain_; }
  std::size_t node_count() const noexcept { return nodes_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> component(int c) const;
  std::span<double> component(int c);

  double max_abs() const noexcept;

 private:
  BoxDomain domain_;
  std::size_t nodes_;
  std::vector<double> values_;
};

/// Eigenvalues of every retained mode, in flat storage order.
std::vector<double> eigenvalues(const BoxDomain& box, std::span<const int> trunc);

/// Pointwise values of sum_k C_k e_k on the field's own quadrature grid.
GridField synthesize(const SpectralField& f);

/// Evaluates the series (or a partial derivative of it) on another grid of
/// the same box. derivative_orders[j] in {0,1,2} differentiates along axis j;
/// an empty span means no differentiation. Requires n_j <= target N_j.
GridField synthesize_on(const SpectralField& f, const BoxDomain& target,
                        std::span<const int> derivative_orders = {});

/// Quadrature inner products <g, e_k> for every k below trunc.
SpectralField analyze(const GridField& g, std::vector<int> trunc);

SpectralField laplacian(const SpectralField& f);

struct SpectralNorms {
  double l2sq = 0.0;  // sum C^2            = ||u||_2^2
  double h1sq = 0.0;  // sum lambda C^2     = ||grad u||_2^2
  double h2sq = 0.0;  // sum lambda^2 C^2   = ||Laplace u||_2^2
  double h3sq = 0.0;  // sum lambda^3 C^2   = ||grad Laplace u||_2^2
};

SpectralNorms norms(const SpectralField& f);

/// max |u(x)| over a grid refined `refine` times per axis. A lower bound on
/// the true sup norm.
double sup_norm_estimate(const SpectralField& f, int refine = 4);

/// Largest |du/dnu| over all box faces, evaluated from the differentiated
/// cosine series at face points lying on the other axes' quadrature nodes.
double boundary_residual(const SpectralField& f);

/// Copies f into a field with a different truncation (and possibly a finer
/// quadrature grid on the same box), zero-padding or truncating modes.
SpectralField embed(const SpectralField& f, const BoxDomain& target,
                    std::vector<int> trunc);

struct RankedMode {
  ModeIndex k;
  double eigenvalue;
};

/// Retained modes sorted by eigenvalue (ties by storage order), i.e. the
/// single-index enumeration e_1, e_2, ... of the truncated basis.
std::vector<RankedMode> sorted_modes(const BoxDomain& box,
                                     std::span<const int> trunc);

/// cos(pi x) and sin(pi x) with exact values at integer and half-integer x.
double cos_pi(double x);
double sin_pi(double x);

}  // namespace gllb
