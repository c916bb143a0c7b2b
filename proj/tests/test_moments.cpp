#include <cmath>
#include <complex>
#include <vector>

#include "aplab/moments.hpp"
#include "doctest.h"

using namespace aplab;
using namespace aplab::moments;
using contour::ClosedCurve;

namespace {

ClosedCurve circle(double radius = 1.0, cplx center = cplx(0, 0), int n = 256) {
  return ClosedCurve::sample(1, n, [&](double psi, std::span<cplx> out) {
    out[0] = center + std::polar(radius, psi);
  });
}

std::vector<cplx> on_curve(const ClosedCurve& c, const std::function<cplx(cplx)>& f) {
  std::vector<cplx> out(c.size());
  for (int j = 0; j < c.size(); ++j) out[j] = f(c.coord(0)[j]);
  return out;
}

}  // namespace

TEST_CASE("moments of holomorphic data vanish (Cauchy)") {
  ClosedCurve c = circle();
  auto rep = complex_moments(c, on_curve(c, [](cplx z) { return std::exp(z); }), 8);
  CHECK(rep.max_abs < 1e-12 * rep.scale);
  CHECK(rep.vanish);
}

TEST_CASE("moments of conj(z): k = 0 moment is 2 pi i") {
  // direct evaluation: integral of e^{-i psi} i e^{i psi} d psi = 2 pi i
  ClosedCurve c = circle();
  auto rep = complex_moments(c, on_curve(c, [](cplx z) { return std::conj(z); }), 6);
  CHECK(std::abs(rep.moments[0] - cplx(0, 2 * kPi)) < 1e-12);
  for (std::size_t k = 1; k < rep.moments.size(); ++k)
    CHECK(std::abs(rep.moments[k]) < 1e-12);
  CHECK(!rep.vanish);
}

TEST_CASE("|z| on circles of any radius has vanishing moments") {
  for (double t : {1.0, 1.4, 2.0}) {
    ClosedCurve c = circle(t);
    auto rep = complex_moments(c, on_curve(c, [](cplx z) { return std::abs(z); }), 8);
    CHECK(rep.vanish);
    CHECK(rep.max_abs < 1e-10 * rep.scale);
  }
}

TEST_CASE("monomial forms enumerate |alpha| <= k_max deterministically") {
  auto forms = monomial_forms(2, 2);
  // (1 + 2 + 3) alphas x 2 coordinates
  CHECK(forms.size() == 12);
  CHECK(forms[0].alpha == std::vector<int>{0, 0});
  CHECK(forms[0].dz_index == 0);
}

TEST_CASE("disc extension from boundary data") {
  const int n = 128;
  std::vector<cplx> f(n);

  SUBCASE("e^{i psi} extends to F(zeta) = zeta") {
    for (int j = 0; j < n; ++j) f[j] = std::polar(1.0, 2 * kPi * j / n);
    auto r = disc_extension(f);
    CHECK(r.extends);
    CHECK(std::abs(r.taylor[1] - 1.0) < 1e-12);
    CHECK(r.boundary_mismatch < 1e-10);
  }
  SUBCASE("e^{-i psi} does not extend; negative mass 1") {
    for (int j = 0; j < n; ++j) f[j] = std::polar(1.0, -2 * kPi * j / n);
    auto r = disc_extension(f);
    CHECK(!r.extends);
    CHECK(r.negative_mass == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("|z| on a circle of radius t extends as the constant t") {
    double t = 1.7;
    for (int j = 0; j < n; ++j) f[j] = t;
    auto r = disc_extension(f);
    CHECK(r.extends);
    CHECK(std::abs(r.taylor[0] - t) < 1e-12);
    for (std::size_t m = 1; m < r.taylor.size(); ++m) CHECK(std::abs(r.taylor[m]) < 1e-12);
  }
}

TEST_CASE("planar dbar residuals") {
  PlanarGrid g{41, 41, -1.0, -1.0, 0.05, 0.05};
  std::vector<cplx> f(41 * 41);

  SUBCASE("z^2 is holomorphic") {
    for (int j = 0; j < 41; ++j)
      for (int i = 0; i < 41; ++i) {
        cplx z = g.point(i, j);
        f[g.index(i, j)] = z * z;
      }
    auto field = dbar_residual_planar(g, f);
    CHECK(field.max_value < 1e-6);
  }
  SUBCASE("conj(z) has residual 1 everywhere") {
    for (int j = 0; j < 41; ++j)
      for (int i = 0; i < 41; ++i) f[g.index(i, j)] = std::conj(g.point(i, j));
    auto field = dbar_residual_planar(g, f);
    for (int j = 1; j < 40; ++j)
      for (int i = 1; i < 40; ++i)
        CHECK(field.values[g.index(i, j)] == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("|z| on an annulus: residual is |z/(2|z|)| = 1/2") {
    // Wirtinger derivative of |z| is conj(z)/(2|z|), modulus 1/2
    PlanarGrid ga{61, 61, -3.0, -3.0, 0.1, 0.1};
    std::vector<cplx> fa(61 * 61, cplx(0, 0));
    std::vector<std::uint8_t> mask(61 * 61, 0);
    for (int j = 0; j < 61; ++j)
      for (int i = 0; i < 61; ++i) {
        cplx z = ga.point(i, j);
        if (std::abs(z) >= 1.0 && std::abs(z) <= 3.0) {
          fa[ga.index(i, j)] = std::abs(z);
          mask[ga.index(i, j)] = 1;
        }
      }
    auto field = dbar_residual_planar(ga, fa, mask);
    int checked = 0;
    for (int j = 0; j < 61; ++j)
      for (int i = 0; i < 61; ++i)
        if (field.valid[ga.index(i, j)]) {
          CHECK(field.values[ga.index(i, j)] == doctest::Approx(0.5).epsilon(2e-3));
          ++checked;
        }
    CHECK(checked > 100);
  }
  SUBCASE("too-coarse grids are rejected") {
    PlanarGrid bad{4, 41, 0, 0, 0.1, 0.1};
    std::vector<cplx> fb(4 * 41);
    CHECK_THROWS_AS(dbar_residual_planar(bad, fb), Error);
  }
}

TEST_CASE("dbar residual of z-polynomials stays small, conj-polynomials bounded below") {
  PlanarGrid g{41, 41, -1.0, -1.0, 0.05, 0.05};
  // evaluator route with a fine independent step: polynomials in z stay
  // below 1e-6 regardless of degree
  auto holo = dbar_residual_planar(
      g, [](cplx z) { return z * z * z - 2.0 * z + 1.0; }, {}, 1e-4);
  CHECK(holo.max_value < 1e-6);
  auto expz = dbar_residual_planar(g, [](cplx z) { return std::exp(z); }, {}, 1e-4);
  CHECK(expz.max_value < 1e-6);

  std::vector<cplx> f(41 * 41);
  for (int j = 0; j < 41; ++j)
    for (int i = 0; i < 41; ++i) {
      cplx z = g.point(i, j);
      f[g.index(i, j)] = std::conj(z) * std::conj(z);  // dbar = 2 conj(z)
    }
  auto field = dbar_residual_planar(g, f);
  // analytic residual at z: |2 conj(z)|; central differences are exact on
  // quadratics, so compare pointwise
  for (int j = 1; j < 40; ++j)
    for (int i = 1; i < 40; ++i) {
      double expect = 2.0 * std::abs(g.point(i, j));
      CHECK(field.values[g.index(i, j)] == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("moment condition is equivalent to extension on circle scenarios") {
  ClosedCurve c = circle(1.3, cplx(0.2, 0.1));
  auto cases = std::vector<std::pair<std::function<cplx(cplx)>, bool>>{
      {[](cplx z) { return std::exp(z); }, true},
      {[](cplx z) { return std::conj(z); }, false},
      {[](cplx) { return cplx(2.5, 0); }, true},
      {[](cplx z) { return 1.0 / (z - cplx(5, 0)); }, true},
      {[](cplx z) { return std::abs(z); }, false},  // non-constant |z| off-center
  };
  for (const auto& [f, expect] : cases) {
    auto r = moments_equiv_extension(c, on_curve(c, f), 10);
    CHECK(r.agree);
    CHECK(r.moments.vanish == expect);
  }
}
