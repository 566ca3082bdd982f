#include <doctest.h>

#include <cmath>
#include <random>

#include "gllb/errors.hpp"
#include "gllb/potential.hpp"

using namespace gllb;

namespace {

Potential quartic() {
  return Potential::polynomial(
      {{{4, 0, 0}, 0.25}, {{0, 2, 2}, 0.5}, {{1, 1, 1}, -1.0}, {{0, 0, 2}, 1.0}});
}

Potential anisotropic() {
  Mat3 a;
  a << 2.0, 0.5, 0.0, 0.5, -1.0, 0.25, 0.0, 0.25, 0.5;
  return Potential::anisotropic(a);
}

// Central differences of F and grad F.
void check_derivatives(const Potential& p, const Vec3& z) {
  const double h = 1e-5;
  const PotentialEval e = p.eval(z);
  for (int i = 0; i < 3; ++i) {
    Vec3 zp = z, zm = z;
    zp[i] += h;
    zm[i] -= h;
    const double dfi = (p.value(zp) - p.value(zm)) / (2 * h);
    CHECK(e.gradient[i] == doctest::Approx(dfi).epsilon(1e-7));
    const Vec3 dgi = (p.gradient(zp) - p.gradient(zm)) / (2 * h);
    for (int j = 0; j < 3; ++j) CHECK(e.hessian(j, i) == doctest::Approx(dgi[j]).epsilon(1e-7));
  }
}

// Monte Carlo lower estimate of sup over the ball of radius r.
struct BallSup {
  double h = 0, j = 0, i = 0;
};

BallSup ball_sup(const Potential& p, double r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0, 1);
  BallSup s;
  for (int k = 0; k < 20000; ++k) {
    Vec3 z(g(rng), g(rng), g(rng));
    z *= r * std::cbrt(u(rng)) / z.norm();
    if (k % 2 == 0) z *= r / z.norm();  // half the samples on the sphere
    const PotentialEval e = p.eval(z);
    s.h = std::max(s.h, std::fabs(e.value));
    s.j = std::max(s.j, e.gradient.norm());
    s.i = std::max(s.i, operator_norm(e.hessian));
  }
  return s;
}

}  // namespace

TEST_SUITE("potential") {

TEST_CASE("values of the three kinds") {
  const Vec3 z(1.0, -2.0, 0.5);
  CHECK(Potential::quadratic(3.0).value(z) == doctest::Approx(1.5 * z.squaredNorm()));
  const Potential a = anisotropic();
  CHECK(a.value(z) == doctest::Approx(0.5 * z.dot(a.matrix() * z)));
  CHECK(quartic().value(z) == doctest::Approx(0.25 + 0.5 * 4 * 0.25 + 1.0 + 0.25));
  CHECK(quartic().degree() == 4);
  CHECK(Potential().is_radial());
  CHECK_FALSE(a.is_radial());
}

TEST_CASE("gradient and Hessian agree with finite differences") {
  const Vec3 z(0.3, -0.7, 1.1);
  check_derivatives(Potential::quadratic(0.8), z);
  check_derivatives(anisotropic(), z);
  check_derivatives(quartic(), z);
  check_derivatives(Potential::polynomial({{{2, 3, 1}, 0.3}, {{0, 0, 0}, 2.0}}), z);
}

TEST_CASE("invalid potentials") {
  Mat3 a = Mat3::Identity();
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(Potential::anisotropic(a), ConfigError);
  CHECK_THROWS_AS(Potential::polynomial({{{-1, 0, 0}, 1.0}}), ConfigError);
  CHECK_THROWS_AS(Potential::quadratic(NAN), ConfigError);
}

TEST_CASE("operator norm is the largest absolute eigenvalue") {
  Mat3 m;
  m << 1, 0, 0, 0, -4, 0, 0, 0, 2;
  CHECK(operator_norm(m) == doctest::Approx(4.0));
  CHECK(operator_norm(anisotropic().matrix()) ==
        doctest::Approx(anisotropic().matrix().jacobiSvd().singularValues()[0]));
}

TEST_CASE("analytic bounds for quadratics are exact") {
  const BoundFns b = bounds(Potential::quadratic(-2.0), BoundMode::kAnalytic);
  CHECK(b.H(3.0) == doctest::Approx(9.0));
  CHECK(b.J(3.0) == doctest::Approx(6.0));
  CHECK(b.I(3.0) == doctest::Approx(2.0));
  CHECK(std::isinf(b.lambda_max()));
}

TEST_CASE("bounds dominate Monte Carlo ball suprema") {
  for (const Potential& p : {Potential::quadratic(1.0), anisotropic(), quartic()}) {
    for (BoundMode mode : {BoundMode::kAnalytic, BoundMode::kSampled}) {
      SamplingParams s;
      s.lambda_max = 2.0;
      const BoundFns b = bounds(p, mode, s);
      for (double r : {0.0, 0.37, 1.0, 1.9}) {
        CAPTURE(r);
        const BallSup mc = ball_sup(p, r, 5);
        CHECK(b.H(r) >= mc.h * (1 - 1e-12));
        CHECK(b.J(r) >= mc.j * (1 - 1e-12));
        CHECK(b.I(r) >= mc.i * (1 - 1e-12));
      }
    }
  }
}

TEST_CASE("sampled bounds are monotone, exact at the centre, infinite past the table") {
  SamplingParams s;
  s.lambda_max = 1.5;
  const Potential p = Potential::polynomial({{{0, 0, 0}, 2.0}, {{1, 0, 0}, 1.0}, {{0, 2, 0}, 1.0}});
  const BoundFns b = bounds(p, BoundMode::kSampled, s);
  CHECK(b.H(0) == doctest::Approx(2.0));
  CHECK(b.J(0) == doctest::Approx(1.0));
  double prev_h = -1, prev_j = -1, prev_i = -1;
  for (int k = 0; k <= 300; ++k) {
    const double r = 1.5 * k / 300;
    CHECK(b.H(r) >= prev_h);
    CHECK(b.J(r) >= prev_j);
    CHECK(b.I(r) >= prev_i);
    prev_h = b.H(r);
    prev_j = b.J(r);
    prev_i = b.I(r);
  }
  CHECK(std::isinf(b.J(1.6)));
}

TEST_CASE("sampling parameters are validated") {
  SamplingParams s;
  CHECK_THROWS_AS(bounds(quartic(), BoundMode::kSampled, s), ConfigError);  // lambda_max = 0
  s.lambda_max = 1.0;
  s.shells = 0;
  CHECK_THROWS_AS(bounds(quartic(), BoundMode::kSampled, s), ConfigError);
  s.shells = 8;
  s.safety = 0.5;
  CHECK_THROWS_AS(bounds(quartic(), BoundMode::kSampled, s), ConfigError);
}

TEST_CASE("sphere directions are unit vectors including axes") {
  const auto dirs = sphere_directions(100);
  CHECK(dirs.size() == 114);
  int axes = 0;
  for (const Vec3& d : dirs) {
    CHECK(d.norm() == doctest::Approx(1.0));
    if (std::fabs(std::fabs(d[2]) - 1.0) < 1e-15) ++axes;
  }
  CHECK(axes >= 2);
}

}
