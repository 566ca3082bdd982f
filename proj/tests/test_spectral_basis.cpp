#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gllb/errors.hpp"
#include "gllb/spectral_basis.hpp"
#include "oracles.hpp"

using namespace gllb;
using oracle::kPi;

namespace {

const BoxDomain& box(int dim) {
  static const BoxDomain d1({kPi}, {16});
  static const BoxDomain d2({2.0, 1.5}, {12, 8});
  static const BoxDomain d3({1.0, 2.0, 0.75}, {8, 6, 4});
  return dim == 1 ? d1 : dim == 2 ? d2 : d3;
}

std::vector<int> trunc_for(int dim) {
  if (dim == 1) return {8};
  if (dim == 2) return {6, 4};
  return {4, 3, 2};
}

}  // namespace

TEST_SUITE("spectral_basis") {

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(BoxDomain({}, {}), InputError);
  CHECK_THROWS_AS(BoxDomain({1.0}, {5}), InputError);
  CHECK_THROWS_AS(BoxDomain({1.0}, {2}), InputError);
  CHECK_THROWS_AS(BoxDomain({-1.0}, {8}), InputError);
  CHECK_THROWS_AS(BoxDomain({1, 1, 1, 1}, {4, 4, 4, 4}), InputError);
  CHECK_THROWS_AS(SpectralField(box(1), {9}), InputError);
  CHECK_THROWS_AS(SpectralField(box(1), {0}), InputError);
  CHECK_THROWS_AS(SpectralField(box(1), {4}, std::vector<double>(12, NAN)), InputError);
}

TEST_CASE("nodes, weights and eigenvalues") {
  const BoxDomain d({2.0, 3.0}, {4, 6});
  CHECK(d.node(0, 0) == doctest::Approx(0.25));
  CHECK(d.node(1, 5) == doctest::Approx(2.75));
  CHECK(d.quadrature_weight() == doctest::Approx(0.25));
  CHECK(d.volume() == doctest::Approx(6.0));
  CHECK(eigenvalue({{1, 2}}, d) == doctest::Approx(std::pow(kPi / 2, 2) + std::pow(2 * kPi / 3, 2)));
  CHECK_THROWS_AS(eigenvalue({{1}}, d), InputError);
  CHECK(basis_constant(0, 4.0) == doctest::Approx(0.5));
  CHECK(basis_constant(3, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("synthesis matches the direct cosine sum") {
  for (int dim = 1; dim <= 3; ++dim) {
    CAPTURE(dim);
    const auto f = oracle::random_field(box(dim), trunc_for(dim), 11 + dim);
    const GridField g = synthesize(f);
    const auto pts = oracle::nodes(box(dim));
    double worst = 0.0;
    for (int c = 0; c < kComponents; ++c) {
      for (std::size_t p = 0; p < pts.size(); ++p) {
        worst = std::max(worst, std::fabs(g.component(c)[p] - oracle::series(f, c, pts[p])));
      }
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("derivatives on a finer grid match the differentiated series") {
  for (int dim = 1; dim <= 3; ++dim) {
    const auto f = oracle::random_field(box(dim), trunc_for(dim), 40 + dim);
    const BoxDomain fine = box(dim).refined(2);
    const auto pts = oracle::nodes(fine);
    for (int axis = 0; axis < dim; ++axis) {
      for (int order = 1; order <= 2; ++order) {
        CAPTURE(dim);
        CAPTURE(axis);
        CAPTURE(order);
        std::vector<int> orders(dim, 0);
        orders[axis] = order;
        const GridField g = synthesize_on(f, fine, orders);
        double worst = 0.0, scale = 1.0;
        for (std::size_t p = 0; p < pts.size(); ++p) {
          const double ref = oracle::series(f, 1, pts[p], orders);
          scale = std::max(scale, std::fabs(ref));
          worst = std::max(worst, std::fabs(g.component(1)[p] - ref));
        }
        CHECK(worst < 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("analysis is the midpoint quadrature against the basis") {
  for (int dim = 1; dim <= 3; ++dim) {
    const BoxDomain& d = box(dim);
    GridField g(d);
    std::mt19937_64 rng(dim);
    std::uniform_real_distribution<double> u(-1, 1);
    for (double& v : g.values()) v = u(rng);
    const auto trunc = trunc_for(dim);
    const SpectralField a = analyze(g, trunc);
    const auto pts = oracle::nodes(d);
    double worst = 0.0;
    for (std::size_t m = 0; m < a.mode_count(); ++m) {
      const auto k = oracle::unflatten(m, trunc);
      double sum = 0.0;
      for (std::size_t p = 0; p < pts.size(); ++p) {
        double e = 1.0;
        for (int j = 0; j < dim; ++j) e *= oracle::basis_1d(k[j], d.length(j), pts[p][j]);
        sum += g.component(2)[p] * e;
      }
      worst = std::max(worst, std::fabs(sum * d.quadrature_weight() - a.component(2)[m]));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("analysis inverts synthesis for retained modes") {
  for (int dim = 1; dim <= 3; ++dim) {
    const auto f = oracle::random_field(box(dim), trunc_for(dim), 7);
    const auto back = analyze(synthesize(f), trunc_for(dim));
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
      CHECK(back.coeffs()[i] == doctest::Approx(f.coeffs()[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("norms agree with quadrature of the synthesized field") {
  const BoxDomain& d = box(2);
  const auto f = oracle::random_field(d, {6, 4}, 3);
  const SpectralNorms n = norms(f);
  const BoxDomain fine = d.refined(2);
  const GridField u = synthesize_on(f, fine);
  const GridField ux = synthesize_on(f, fine, std::vector<int>{1, 0});
  const GridField uy = synthesize_on(f, fine, std::vector<int>{0, 1});
  const GridField lap = synthesize(laplacian(f));
  double l2 = 0, h1 = 0;
  for (double v : u.values()) l2 += v * v;
  for (std::size_t i = 0; i < ux.values().size(); ++i) {
    h1 += ux.values()[i] * ux.values()[i] + uy.values()[i] * uy.values()[i];
  }
  double h2 = 0;
  for (double v : lap.values()) h2 += v * v;
  CHECK(n.l2sq == doctest::Approx(l2 * fine.quadrature_weight()).epsilon(1e-12));
  CHECK(n.h1sq == doctest::Approx(h1 * fine.quadrature_weight()).epsilon(1e-12));
  CHECK(n.h2sq == doctest::Approx(h2 * d.quadrature_weight()).epsilon(1e-12));
}

TEST_CASE("laplacian scales coefficients by -lambda") {
  const auto f = oracle::random_field(box(3), trunc_for(3), 5);
  const auto l = laplacian(f);
  const auto lam = eigenvalues(box(3), trunc_for(3));
  for (int c = 0; c < kComponents; ++c) {
    for (std::size_t m = 0; m < f.mode_count(); ++m) {
      CHECK(l.component(c)[m] == doctest::Approx(-lam[m] * f.component(c)[m]));
    }
  }
}

TEST_CASE("normal derivative vanishes on every face") {
  for (int dim = 1; dim <= 3; ++dim) {
    const auto f = oracle::random_field(box(dim), trunc_for(dim), 21, 0.0);
    CHECK(boundary_residual(f) <= 1e-12 * f.max_abs());
  }
  // the same check by brute force on a 1-D field
  const auto f = oracle::random_field(box(1), {8}, 22);
  CHECK(std::fabs(oracle::series(f, 0, {0.0}, {1})) < 1e-12);
  CHECK(std::fabs(oracle::series(f, 0, {kPi}, {1})) < 1e-12);
}

TEST_CASE("zero padding is an isometry and truncation drops modes") {
  const auto f = oracle::random_field(box(2), {6, 4}, 9);
  const BoxDomain big({2.0, 1.5}, {24, 16});
  const auto e = embed(f, big, {12, 8});
  const auto a = norms(f), b = norms(e);
  CHECK(a.l2sq == doctest::Approx(b.l2sq).epsilon(1e-15));
  CHECK(a.h1sq == doctest::Approx(b.h1sq).epsilon(1e-15));
  CHECK(a.h3sq == doctest::Approx(b.h3sq).epsilon(1e-15));
  CHECK(e.coeff(1, {{5, 3}}) == f.coeff(1, {{5, 3}}));
  CHECK(e.coeff(1, {{6, 3}}) == 0.0);
  const auto back = embed(e, box(2), {6, 4});
  CHECK(std::equal(back.coeffs().begin(), back.coeffs().end(), f.coeffs().begin()));
  const auto cut = embed(f, box(2), {2, 2});
  CHECK(norms(cut).l2sq < a.l2sq);
}

TEST_CASE("sup estimate is the largest Euclidean norm on the refined grid") {
  const auto f = oracle::random_field(box(1), {8}, 13);
  const BoxDomain fine = box(1).refined(4);
  double ref = 0.0;
  for (const auto& x : oracle::nodes(fine)) {
    double s = 0.0;
    for (int c = 0; c < kComponents; ++c) s += std::pow(oracle::series(f, c, x), 2);
    ref = std::max(ref, std::sqrt(s));
  }
  CHECK(sup_norm_estimate(f, 4) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("sorted modes follow eigenvalues") {
  const auto modes = sorted_modes(box(2), std::vector<int>{6, 4});
  REQUIRE(modes.size() == 24);
  CHECK(modes.front().eigenvalue == 0.0);
  for (std::size_t i = 1; i < modes.size(); ++i) {
    CHECK(modes[i].eigenvalue >= modes[i - 1].eigenvalue);
    CHECK(modes[i].eigenvalue == doctest::Approx(eigenvalue(modes[i].k, box(2))));
  }
}

TEST_CASE("exact trigonometry at half-integers") {
  CHECK(sin_pi(1.0) == 0.0);
  CHECK(sin_pi(-3.0) == 0.0);
  CHECK(cos_pi(0.5) == 0.0);
  CHECK(cos_pi(2.0) == 1.0);
  CHECK(sin_pi(0.5) == 1.0);
  CHECK(sin_pi(0.25) == doctest::Approx(std::sqrt(0.5)));
}

}
