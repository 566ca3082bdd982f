#pragma once

// Potentials F: R^3 -> R entering the GLLB right-hand side through grad F,
// together with the ball-sup bound functions
//   H(l) = sup_{|z|<=l} |F(z)|,  J(l) = sup |grad F(z)|,  I(l) = sup |Hess F(z)|
// used by the a priori estimates. |Hess F| is the Euclidean operator norm.

#include <Eigen/Dense>

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace gllb {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct PotentialEval {
  double value = 0.0;
  Vec3 gradient = Vec3::Zero();
  Mat3 hessian = Mat3::Zero();
};

/// coefficient * z1^p0 * z2^p1 * z3^p2
struct Monomial {
  std::array<int, 3> powers{0, 0, 0};
  double coefficient = 0.0;
};

enum class PotentialKind { kQuadratic, kAnisotropicQuadratic, kPolynomial };

class Potential {
 public:
  /// F(z) = alpha |z|^2 / 2.
  Potential() = default;

  static Potential quadratic(double alpha);
  /// F(z) = z^T A z / 2; A must be symmetric to 1e-12.
  static Potential anisotropic(const Mat3& a);
  /// Sum of monomials; powers must be nonnegative.
  static Potential polynomial(std::vector<Monomial> terms);

  PotentialKind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  const Mat3& matrix() const noexcept { return matrix_; }
  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  /// Total degree (2 for the quadratic kinds).
  int degree() const noexcept;
  /// True when grad F(z) is parallel to z for every z.
  bool is_radial() const noexcept { return kind_ == PotentialKind::kQuadratic; }

  PotentialEval eval(const Vec3& z) const;
  std::pair<double, Vec3> value_gradient(const Vec3& z) const;
  double value(const Vec3& z) const { return value_gradient(z).first; }
  Vec3 gradient(const Vec3& z) const { return value_gradient(z).second; }
  Mat3 hessian(const Vec3& z) const { return eval(z).hessian; }

  std::string describe() const;

 private:
  PotentialKind kind_ = PotentialKind::kQuadratic;
  double alpha_ = 1.0;
  Mat3 matrix_ = Mat3::Identity();
  std::vector<Monomial> terms_;
};

/// Largest absolute eigenvalue of a symmetric 3x3 matrix.
double operator_norm(const Mat3& m);

enum class BoundMode { kAnalytic, kSampled };

struct SamplingParams {
  int shells = 64;          // radial shells m = 0..shells
  int directions = 2048;    // Fibonacci directions per shell
  double lambda_max = 0.0;  // radius of the outermost shell
  double safety = 1.05;     // multiplies every sampled sup at radius > 0
};

class BoundFns;

/// Builds H/J/I. Analytic mode uses exact closed forms for the quadratic
/// kinds and a monomial-wise majorant for polynomials. Sampled mode takes the
/// running maximum over shells of radius lambda_max * m / shells times a
/// deterministic Fibonacci direction set (plus coordinate axes and cube
/// diagonals), scaled by the safety factor. Throws ConfigError on invalid
/// sampling parameters.
BoundFns bounds(const Potential& potential, BoundMode mode,
                const SamplingParams& sampling = {});

/// Monotone bound functions H, J, I on [0, inf). Analytic instances are
/// closed forms; sampled instances interpolate a nested-shell table linearly
/// and return +inf beyond lambda_max.
class BoundFns {
 public:
  double H(double lambda) const;
  double J(double lambda) const;
  double I(double lambda) const;

  BoundMode mode() const noexcept { return mode_; }
  /// +inf for analytic bounds.
  double lambda_max() const noexcept;
  /// Shell radii of the sampled table (empty for analytic bounds).
  const std::vector<double>& grid() const noexcept { return grid_; }

 private:
  friend BoundFns bounds(const Potential&, BoundMode, const SamplingParams&);

  enum class Closed { kNone, kQuadratic, kPolynomialMajorant };

  double interpolate(const std::vector<double>& table, double lambda) const;
  double majorant(int which, double lambda) const;

  BoundMode mode_ = BoundMode::kAnalytic;
  Closed closed_ = Closed::kNone;
  double scale_ = 0.0;  // |alpha| or ||A|| for the quadratic closed form
  // Per-degree majorant coefficients for polynomials: value, gradient and
  // Hessian bounds are sum_d coef[d] * lambda^d.
  std::vector<double> h_coef_, j_coef_, i_coef_;
  std::vector<double> grid_, h_, j_, i_;
};

/// Deterministic quasi-uniform unit vectors: a Fibonacci lattice of `count`
/// points plus the 6 axis and 8 diagonal directions.
std::vector<Vec3> sphere_directions(int count);

}  // namespace gllb
