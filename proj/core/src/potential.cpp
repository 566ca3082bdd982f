#include "gllb/potential.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gllb/errors.hpp"

namespace gllb {

namespace {

double ipow(double x, int p) {
  if (p < 0) return 0.0;
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

double poly_eval(const std::vector<double>& coef, double x) {
  double r = 0.0;
  for (std::size_t d = coef.size(); d-- > 0;) r = r * x + coef[d];
  return r;
}

void add_coef(std::vector<double>& coef, int degree, double value) {
  if (degree < 0) return;
  if (coef.size() <= static_cast<std::size_t>(degree)) coef.resize(degree + 1, 0.0);
  coef[degree] += value;
}

}  // namespace

// ---------------------------------------------------------------- Potential

Potential Potential::quadratic(double alpha) {
  if (!std::isfinite(alpha)) throw ConfigError("quadratic alpha must be finite");
  Potential p;
  p.kind_ = PotentialKind::kQuadratic;
  p.alpha_ = alpha;
  p.matrix_ = alpha * Mat3::Identity();
  p.terms_.clear();
  return p;
}

Potential Potential::anisotropic(const Mat3& a) {
  if (!a.allFinite()) throw ConfigError("anisotropy matrix must be finite");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConfigError("anisotropy matrix must be symmetric");
  }
  Potential p;
  p.kind_ = PotentialKind::kAnisotropicQuadratic;
  p.matrix_ = 0.5 * (a + a.transpose());
  p.alpha_ = 0.0;
  return p;
}

Potential Potential::polynomial(std::vector<Monomial> terms) {
  for (const auto& t : terms) {
    if (!std::isfinite(t.coefficient)) {
      throw ConfigError("polynomial coefficients must be finite");
    }
    for (int q : t.powers) {
      if (q < 0) throw ConfigError("monomial powers must be nonnegative");
    }
  }
  Potential p;
  p.kind_ = PotentialKind::kPolynomial;
  p.terms_ = std::move(terms);
  p.alpha_ = 0.0;
  p.matrix_ = Mat3::Zero();
  return p;
}

int Potential::degree() const noexcept {
  if (kind_ != PotentialKind::kPolynomial) return 2;
  int d = 0;
  for (const auto& t : terms_) {
    d = std::max(d, t.powers[0] + t.powers[1] + t.powers[2]);
  }
  return d;
}

PotentialEval Potential::eval(const Vec3& z) const {
  PotentialEval out;
  switch (kind_) {
    case PotentialKind::kQuadratic:
      out.value = 0.5 * alpha_ * z.squaredNorm();
      out.gradient = alpha_ * z;
      out.hessian = alpha_ * Mat3::Identity();
      return out;
    case PotentialKind::kAnisotropicQuadratic:
      out.gradient = matrix_ * z;
      out.value = 0.5 * z.dot(out.gradient);
      out.hessian = matrix_;
      return out;
    case PotentialKind::kPolynomial:
      break;
  }
  for (const auto& t : terms_) {
    const auto& p = t.powers;
    const double c = t.coefficient;
    out.value += c * ipow(z[0], p[0]) * ipow(z[1], p[1]) * ipow(z[2], p[2]);
    for (int i = 0; i < 3; ++i) {
      if (p[i] == 0) continue;
      double g = c * p[i];
      for (int j = 0; j < 3; ++j) g *= ipow(z[j], j == i ? p[j] - 1 : p[j]);
      out.gradient[i] += g;
      for (int k = 0; k < 3; ++k) {
        double h;
        if (k == i) {
          if (p[i] < 2) continue;
          h = c * p[i] * (p[i] - 1);
          for (int j = 0; j < 3; ++j) h *= ipow(z[j], j == i ? p[j] - 2 : p[j]);
        } else {
          if (p[k] == 0) continue;
          h = c * p[i] * p[k];
          for (int j = 0; j < 3; ++j) {
            h *= ipow(z[j], (j == i || j == k) ? p[j] - 1 : p[j]);
          }
        }
        out.hessian(i, k) += h;
      }
    }
  }
  return out;
}

std::pair<double, Vec3> Potential::value_gradient(const Vec3& z) const {
  switch (kind_) {
    case PotentialKind::kQuadratic:
      return {0.5 * alpha_ * z.squaredNorm(), alpha_ * z};
    case PotentialKind::kAnisotropicQuadratic: {
      Vec3 g = matrix_ * z;
      return {0.5 * z.dot(g), g};
    }
    case PotentialKind::kPolynomial:
      break;
  }
  double value = 0.0;
  Vec3 grad = Vec3::Zero();
  for (const auto& t : terms_) {
    const auto& p = t.powers;
    const double c = t.coefficient;
    const double a = ipow(z[0], p[0]), b = ipow(z[1], p[1]), d = ipow(z[2], p[2]);
    value += c * a * b * d;
    if (p[0] > 0) grad[0] += c * p[0] * ipow(z[0], p[0] - 1) * b * d;
    if (p[1] > 0) grad[1] += c * p[1] * a * ipow(z[1], p[1] - 1) * d;
    if (p[2] > 0) grad[2] += c * p[2] * a * b * ipow(z[2], p[2] - 1);
  }
  return {value, grad};
}

std::string Potential::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case PotentialKind::kQuadratic:
      os << "quadratic(alpha=" << alpha_ << ")";
      break;
    case PotentialKind::kAnisotropicQuadratic:
      os << "anisotropic-quadratic(|A|=" << operator_norm(matrix_) << ")";
      break;
    case PotentialKind::kPolynomial:
      os << "polynomial(" << terms_.size() << " terms, degree " << degree() << ")";
      break;
  }
  return os.str();
}

double operator_norm(const Mat3& m) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------- BoundFns

double BoundFns::lambda_max() const noexcept {
  if (mode_ == BoundMode::kAnalytic) return std::numeric_limits<double>::infinity();
  return grid_.back();
}

double BoundFns::interpolate(const std::vector<double>& table, double lambda) const {
  if (!(lambda > 0.0)) return table.front();
  if (lambda > grid_.back()) return std::numeric_limits<double>::infinity();
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), lambda);
  if (it == grid_.end()) return table.back();
  const auto hi = static_cast<std::size_t>(it - grid_.begin());
  const std::size_t lo = hi - 1;
  const double t = (lambda - grid_[lo]) / (grid_[hi] - grid_[lo]);
  return table[lo] + t * (table[hi] - table[lo]);
}

double BoundFns::majorant(int which, double lambda) const {
  const double l = std::max(lambda, 0.0);
  if (closed_ == Closed::kQuadratic) {
    switch (which) {
      case 0:
        return 0.5 * scale_ * l * l;
      case 1:
        return scale_ * l;
      default:
        return scale_;
    }
  }
  const auto& coef = which == 0 ? h_coef_ : which == 1 ? j_coef_ : i_coef_;
  return poly_eval(coef, l);
}

double BoundFns::H(double lambda) const {
  return mode_ == BoundMode::kAnalytic ? majorant(0, lambda) : interpolate(h_, lambda);
}

double BoundFns::J(double lambda) const {
  return mode_ == BoundMode::kAnalytic ? majorant(1, lambda) : interpolate(j_, lambda);
}

double BoundFns::I(double lambda) const {
  return mode_ == BoundMode::kAnalytic ? majorant(2, lambda) : interpolate(i_, lambda);
}

std::vector<Vec3> sphere_directions(int count) {
  std::vector<Vec3> dirs;
  dirs.reserve(count + 14);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double y = 1.0 - 2.0 * (i + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - y * y));
    const double phi = golden * i;
    dirs.emplace_back(r * std::cos(phi), y, r * std::sin(phi));
  }
  for (int a = 0; a < 3; ++a) {
    for (double s : {-1.0, 1.0}) {
      Vec3 e = Vec3::Zero();
      e[a] = s;
      dirs.push_back(e);
    }
  }
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      for (double sz : {-1.0, 1.0}) {
        dirs.push_back(Vec3(sx, sy, sz).normalized());
      }
    }
  }
  return dirs;
}

BoundFns bounds(const Potential& potential, BoundMode mode,
                const SamplingParams& sampling) {
  BoundFns b;
  b.mode_ = mode;
  if (mode == BoundMode::kAnalytic) {
    switch (potential.kind()) {
      case PotentialKind::kQuadratic:
        b.closed_ = BoundFns::Closed::kQuadratic;
        b.scale_ = std::fabs(potential.alpha());
        break;
      case PotentialKind::kAnisotropicQuadratic:
        b.closed_ = BoundFns::Closed::kQuadratic;
        b.scale_ = operator_norm(potential.matrix());
        break;
      case PotentialKind::kPolynomial:
        // |z_i| <= |z| per monomial; gradient via the l1 norm, Hessian via
        // the entrywise l1 norm, both dominating the Euclidean norms.
        b.closed_ = BoundFns::Closed::kPolynomialMajorant;
        for (const auto& t : potential.terms()) {
          const int d = t.powers[0] + t.powers[1] + t.powers[2];
          const double c = std::fabs(t.coefficient);
          add_coef(b.h_coef_, d, c);
          add_coef(b.j_coef_, d - 1, c * d);
          add_coef(b.i_coef_, d - 2, c * d * (d - 1));
        }
        if (b.h_coef_.empty()) b.h_coef_.push_back(0.0);
        if (b.j_coef_.empty()) b.j_coef_.push_back(0.0);
        if (b.i_coef_.empty()) b.i_coef_.push_back(0.0);
        break;
    }
    return b;
  }

  if (sampling.shells < 1 || sampling.directions < 1) {
    throw ConfigError("sampled bounds need at least one shell and one direction");
  }
  if (!(sampling.lambda_max > 0.0) || !std::isfinite(sampling.lambda_max)) {
    throw ConfigError("sampled bounds need a positive finite lambda_max");
  }
  if (!(sampling.safety >= 1.0) || !std::isfinite(sampling.safety)) {
    throw ConfigError("sampling safety factor must be >= 1");
  }

  const auto dirs = sphere_directions(sampling.directions);
  const int shells = sampling.shells;
  b.grid_.resize(shells + 1);
  b.h_.resize(shells + 1);
  b.j_.resize(shells + 1);
  b.i_.resize(shells + 1);

  const PotentialEval center = potential.eval(Vec3::Zero());
  double h = std::fabs(center.value);
  double j = center.gradient.norm();
  double i = operator_norm(center.hessian);
  b.grid_[0] = 0.0;
  b.h_[0] = h;
  b.j_[0] = j;
  b.i_[0] = i;
  for (int m = 1; m <= shells; ++m) {
    const double r = sampling.lambda_max * m / shells;
    double sh = 0.0, sj = 0.0, si = 0.0;
    for (const auto& dir : dirs) {
      const PotentialEval e = potential.eval(r * dir);
      sh = std::max(sh, std::fabs(e.value));
      sj = std::max(sj, e.gradient.norm());
      si = std::max(si, operator_norm(e.hessian));
    }
    h = std::max(h, sampling.safety * sh);
    j = std::max(j, sampling.safety * sj);
    i = std::max(i, sampling.safety * si);
    b.grid_[m] = r;
    b.h_[m] = h;
    b.j_[m] = j;
    b.i_[m] = i;
  }
  return b;
}

}  // namespace gllb
