#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "aplab/argument.hpp"
#include "aplab/contour.hpp"
#include "doctest.h"

using namespace aplab;
using namespace aplab::argument;
using contour::ClosedCurve;

namespace {

std::vector<cplx> sample_boundary(int n, const std::function<cplx(cplx)>& f) {
  std::vector<cplx> out(n);
  for (int j = 0; j < n; ++j) out[j] = f(std::polar(1.0, 2.0 * kPi * j / n));
  return out;
}

ClosedCurve curve_from(const std::function<cplx(cplx)>& f, int n = 256) {
  return ClosedCurve::sample(1, n, [&](double psi, std::span<cplx> out) {
    out[0] = f(std::polar(1.0, psi));
  });
}

/// Independent root oracle: companion-matrix eigenvalues.
std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs[deg]) < 1e-14) --deg;
  if (deg < 1) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cplx> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(i);
  return roots;
}

cplx eval_poly(const std::vector<cplx>& coeffs, cplx z) {
  cplx acc(0, 0);
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
  return acc;
}

}  // namespace

TEST_CASE("winding numbers of circles") {
  ClosedCurve circle = curve_from([](cplx z) { return z; });
  CHECK(round_to_integer(winding_number(circle, cplx(0, 0))) == 1);
  CHECK(round_to_integer(winding_number(circle, cplx(2, 0))) == 0);

  ClosedCurve doubled = curve_from([](cplx z) { return z * z; });
  CHECK(round_to_integer(winding_number(doubled, cplx(0, 0))) == 2);

  CHECK_THROWS_AS(winding_number(circle, cplx(1, 0)), Error);
}

TEST_CASE("winding is homotopy invariant under small non-crossing perturbations") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    cplx b(0.2 * u(rng), 0.2 * u(rng));
    double eps = 0.1;  // curve stays at distance >= 0.5 from b
    cplx p1(0.05 * u(rng), 0.05 * u(rng)), p2(0.05 * u(rng), 0.05 * u(rng));
    ClosedCurve base = curve_from([&](cplx z) { return z + eps * z * z; });
    ClosedCurve pert = curve_from([&](cplx z) { return z + eps * z * z + p1 * z * z * z + p2; });
    CHECK(round_to_integer(winding_number(base, b)) ==
          round_to_integer(winding_number(pert, b)));
  }
}

TEST_CASE("zero counts of disc functions") {
  const int n = 256;
  SUBCASE("identity has one zero") {
    auto r = zero_count(sample_boundary(n, [](cplx z) { return z; }), cplx(0, 0));
    CHECK(r.count == doctest::Approx(1.0));
    CHECK(r.boundary.empty());
  }
  SUBCASE("zeta^3 - 0.5 has three zeros, all of modulus 0.5^(1/3) < 1") {
    // oracle: cube roots 0.5^{1/3} e^{2 pi i k/3}
    double mod = std::pow(0.5, 1.0 / 3.0);
    CHECK(mod < 1.0);
    auto r = zero_count(sample_boundary(n, [](cplx z) { return z * z * z - 0.5; }),
                        cplx(0, 0));
    CHECK(r.count == doctest::Approx(3.0));
  }
  SUBCASE("boundary zero counts with factor 1/2") {
    auto r = zero_count(sample_boundary(n, [](cplx z) { return z - 1.0; }), cplx(0, 0));
    CHECK(r.count == doctest::Approx(0.5));
    REQUIRE(r.boundary.size() == 1);
    CHECK(std::abs(r.boundary[0].location - cplx(1, 0)) < 1e-9);
    CHECK(r.boundary[0].multiplicity == 1);
  }
  SUBCASE("double boundary zero") {
    auto r = zero_count(
        sample_boundary(n, [](cplx z) { return (z - 1.0) * (z - 1.0) * 0.5; }),
        cplx(0, 0));
    CHECK(r.count == doctest::Approx(1.0));
    REQUIRE(r.boundary.size() == 1);
    CHECK(r.boundary[0].multiplicity == 2);
  }
  SUBCASE("mixed interior and boundary zeros") {
    auto r = zero_count(
        sample_boundary(n, [](cplx z) { return (z - 1.0) * (z - 0.3) * (z + cplx(0, 0.4)); }),
        cplx(0, 0));
    CHECK(r.count == doctest::Approx(2.5));
    CHECK(r.interior == 2);
  }
  SUBCASE("two boundary zeros") {
    auto r = zero_count(
        sample_boundary(n, [](cplx z) { return (z - 1.0) * (z - 0.3) * (z + cplx(0, 1)); }),
        cplx(0, 0));
    CHECK(r.count == doctest::Approx(2.0));
    CHECK(r.interior == 1);
    CHECK(r.boundary.size() == 2);
  }
  SUBCASE("degenerate input is reported") {
    std::vector<cplx> zeros(n, cplx(0, 0));
    CHECK_THROWS_AS(zero_count(zeros, cplx(0, 0)), Error);
  }
}

TEST_CASE("argument principle: zero_count equals winding of the image curve") {
  std::mt19937 rng(20240809);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> degd(1, 5);
  int done = 0;
  while (done < 8) {
    int deg = degd(rng);
    std::vector<cplx> coeffs(deg + 1);
    for (auto& c : coeffs) c = cplx(u(rng), u(rng));
    if (std::abs(coeffs[deg]) < 0.2) continue;

    cplx b(2.0 * u(rng), 2.0 * u(rng));
    std::vector<cplx> shifted = coeffs;
    shifted[0] -= b;
    auto roots = poly_roots(shifted);
    bool clear = true;
    int inside = 0;
    for (const auto& r : roots) {
      double m = std::abs(r);
      if (m > 0.9 && m < 1.1) clear = false;
      if (m < 1.0) ++inside;
    }
    if (!clear) continue;

    auto phi = [&](cplx z) { return eval_poly(coeffs, z); };
    auto zc = zero_count(sample_boundary(256, phi), b);
    int w = round_to_integer(winding_number(curve_from(phi, 256), b));
    CHECK(zc.count == doctest::Approx(static_cast<double>(w)));
    CHECK(static_cast<int>(zc.count) == inside);  // companion-matrix oracle
    ++done;
  }
}

TEST_CASE("linking numbers with polynomial varieties") {
  // gamma = (e^{i psi}, 0) in C^2
  ClosedCurve gamma = ClosedCurve::sample(2, 256, [](double psi, std::span<cplx> out) {
    out[0] = std::polar(1.0, psi);
    out[1] = cplx(0, 0);
  });

  SUBCASE("P = z1 reduces to the winding number") {
    MultiPoly P{2, {{cplx(1, 0), {1, 0}}}};
    CHECK(round_to_integer(linking_number(gamma, P)) == 1);
  }
  SUBCASE("P = z1 - 2: variety misses the disc") {
    MultiPoly P{2, {{cplx(1, 0), {1, 0}}, {cplx(-2, 0), {0, 0}}}};
    CHECK(round_to_integer(linking_number(gamma, P)) == 0);
  }
  SUBCASE("P = z1^2 - 0.25: two intersection points at zeta = +/- 0.5") {
    MultiPoly P{2, {{cplx(1, 0), {2, 0}}, {cplx(-0.25, 0), {0, 0}}}};
    CHECK(round_to_integer(linking_number(gamma, P)) == 2);
  }
  SUBCASE("P vanishing on the curve is an error") {
    MultiPoly P{2, {{cplx(1, 0), {2, 0}}, {cplx(-1.0, 0), {0, 0}}}};
    CHECK_THROWS_AS(linking_number(gamma, P), Error);
  }
}

TEST_CASE("linking equals the weighted zero count of P on the disc family") {
  // gamma = Phi(S^1) for holomorphic Phi; cross-check on polynomial fixtures
  auto phi = [](cplx z) { return cplx(0.4, 0) + 0.5 * z + 0.2 * z * z; };
  ClosedCurve gamma = ClosedCurve::sample(2, 256, [&](double psi, std::span<cplx> out) {
    cplx z = std::polar(1.0, psi);
    out[0] = phi(z);
    out[1] = z * 0.1;
  });
  // P(z1, z2) = z1 - 0.5: count zeros of phi(zeta) - 0.5 on the closed disc
  MultiPoly P{2, {{cplx(1, 0), {1, 0}}, {cplx(-0.5, 0), {0, 0}}}};
  double link = linking_number(gamma, P);
  auto zc = zero_count(sample_boundary(256, phi), cplx(0.5, 0));
  CHECK(link == doctest::Approx(zc.count).epsilon(1e-8));
}

TEST_CASE("curve degrees") {
  auto samples = sample_boundary(64, [](cplx z) { return z * z; });
  CHECK(curve_degree(samples) == 2);
  auto rev = sample_boundary(64, [](cplx z) { return std::conj(z); });
  CHECK(curve_degree(rev) == -1);
  std::vector<cplx> constant(64, cplx(1.5, 0));
  CHECK(curve_degree(constant) == 0);
  CHECK_THROWS_AS(curve_degree(constant, cplx(1.5, 0)), Error);
}

TEST_CASE("locate_zeros finds locations and multiplicities") {
  const int n = 256;
  SUBCASE("zeta^2: one double zero at the origin") {
    auto f = DiscFunction::from_boundary(sample_boundary(n, [](cplx z) { return z * z; }));
    auto zl = locate_zeros(f);
    REQUIRE(zl.zeros.size() == 1);
    CHECK(zl.zeros[0].multiplicity == 2);
    CHECK(std::abs(zl.zeros[0].location) < 1e-6);
  }
  SUBCASE("zeta^3 - 0.5: explicit cube roots") {
    auto f = DiscFunction::from_boundary(
        sample_boundary(n, [](cplx z) { return z * z * z - 0.5; }));
    auto zl = locate_zeros(f);
    REQUIRE(zl.zeros.size() == 3);
    double mod = std::pow(0.5, 1.0 / 3.0);
    std::vector<cplx> expected = {std::polar(mod, 0.0), std::polar(mod, 2 * kPi / 3),
                                  std::polar(mod, -2 * kPi / 3)};
    for (const auto& e : expected) {
      bool found = false;
      for (const auto& z : zl.zeros)
        if (std::abs(z.location - e) < 1e-9 && z.multiplicity == 1) found = true;
      CHECK(found);
    }
  }
  SUBCASE("(zeta - 0.3)(zeta + 0.4i)") {
    auto f = DiscFunction::from_boundary(sample_boundary(
        n, [](cplx z) { return (z - 0.3) * (z + cplx(0, 0.4)); }));
    auto zl = locate_zeros(f);
    REQUIRE(zl.zeros.size() == 2);
    for (const auto& z : zl.zeros) {
      CHECK(z.multiplicity == 1);
      bool ok = std::abs(z.location - cplx(0.3, 0)) < 1e-9 ||
                std::abs(z.location - cplx(0, -0.4)) < 1e-9;
      CHECK(ok);
    }
  }
  SUBCASE("multiplicities sum to the weighted-free zero count") {
    auto samples = sample_boundary(
        n, [](cplx z) { return (z - 0.5) * (z - 0.5) * (z + 0.2) * (z - cplx(0, 0.7)); });
    auto f = DiscFunction::from_boundary(samples);
    auto zl = locate_zeros(f);
    auto zc = zero_count(samples, cplx(0, 0));
    CHECK(zl.total_multiplicity() == static_cast<int>(zc.count));
  }
}

TEST_CASE("principal-value logarithmic residue") {
  const int n = 256;
  SUBCASE("J = 2 i zeta^2 gives I = 4") {
    // derivation: on the boundary J/conj(J) = -e^{4 i psi}, so I = 4
    auto r = log_residue_pv(sample_boundary(n, [](cplx z) { return cplx(0, 2) * z * z; }));
    CHECK(r.value == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(r.pv_windows.empty());
  }
  SUBCASE("J = zeta gives I = 2") {
    auto r = log_residue_pv(sample_boundary(n, [](cplx z) { return z; }));
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("nonvanishing J gives I = 0") {
    auto r = log_residue_pv(sample_boundary(n, [](cplx z) { return 2.0 + z; }));
    CHECK(std::abs(r.value) < 1e-8);
  }
  SUBCASE("boundary zero: J = zeta - 1 gives I = 1") {
    auto r = log_residue_pv(sample_boundary(n, [](cplx z) { return z - 1.0; }));
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(!r.pv_windows.empty());
  }
  SUBCASE("double boundary zero: J = (zeta - 1)^2 gives I = 2") {
    auto r = log_residue_pv(
        sample_boundary(n, [](cplx z) { return (z - 1.0) * (z - 1.0); }));
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-6));
  }
}

TEST_CASE("log_residue_pv equals twice the weighted zero count") {
  const int n = 256;
  auto fixtures = std::vector<std::function<cplx(cplx)>>{
      [](cplx z) { return z * z * z - 0.5; },
      [](cplx z) { return (z - 1.0) * (z - 0.3); },
      [](cplx z) { return cplx(0, 2) * z * z; },
      [](cplx z) { return 1.5 + z * z; },
  };
  for (const auto& f : fixtures) {
    auto samples = sample_boundary(n, f);
    auto I = log_residue_pv(samples);
    auto zc = zero_count(samples, cplx(0, 0));
    CHECK(I.value == doctest::Approx(2.0 * zc.count).epsilon(1e-6));
  }
}
