#include <cmath>
#include <complex>
#include <vector>

#include "aplab/contour.hpp"
#include "aplab/fft.hpp"
#include "doctest.h"

using namespace aplab;
using contour::ClosedCurve;

namespace {

ClosedCurve unit_circle(int n) {
  return ClosedCurve::sample(1, n, [](double psi, std::span<cplx> out) {
    out[0] = std::polar(1.0, psi);
  });
}

}  // namespace

TEST_CASE("sample_curve stores equispaced samples") {
  ClosedCurve c = unit_circle(64);
  CHECK(c.dim() == 1);
  CHECK(c.size() == 64);
  for (int j = 0; j < 64; ++j)
    CHECK(std::abs(c.coord(0)[j] - std::polar(1.0, 2 * kPi * j / 64)) < 1e-15);
}

TEST_CASE("sample_curve rejects bad sample counts") {
  auto f = [](double, std::span<cplx> out) { out[0] = cplx(1, 0); };
  CHECK_THROWS_AS(ClosedCurve::sample(1, 48, f), Error);
  CHECK_THROWS_AS(ClosedCurve::sample(1, 8, f), Error);
}

TEST_CASE("constant curve fails the regularity check") {
  auto f = [](double, std::span<cplx> out) {
    out[0] = cplx(1, 0);
    out[1] = cplx(0, 0);
  };
  CHECK_THROWS_AS(ClosedCurve::sample(2, 16, f, /*require_regular=*/true), Error);
  CHECK_NOTHROW(ClosedCurve::sample(2, 16, f));
}

TEST_CASE("ellipse attains max modulus 2 at psi = 0") {
  ClosedCurve c = ClosedCurve::sample(1, 128, [](double psi, std::span<cplx> out) {
    out[0] = cplx(2.0 * std::cos(psi), std::sin(psi));
  });
  double maxmod = 0.0;
  int argmax = -1;
  for (int j = 0; j < 128; ++j) {
    double m = std::abs(c.coord(0)[j]);
    if (m > maxmod) { maxmod = m; argmax = j; }
  }
  CHECK(maxmod == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(argmax == 0);
}

TEST_CASE("spectral derivative of the circle") {
  ClosedCurve d = unit_circle(64).spectral_derivative();
  for (int j = 0; j < 64; ++j) {
    cplx expect = cplx(0, 1) * std::polar(1.0, d.angle(j));
    CHECK(std::abs(d.coord(0)[j] - expect) < 1e-12);
  }
}

TEST_CASE("spectral derivative of a constant curve vanishes") {
  ClosedCurve c = ClosedCurve::sample(1, 32, [](double, std::span<cplx> out) {
    out[0] = cplx(3, -2);
  });
  ClosedCurve d = c.spectral_derivative();
  for (const auto& z : d.coord(0)) CHECK(std::abs(z) < 1e-13);
}

TEST_CASE("spectral derivative of e^{2 i psi} against the analytic derivative") {
  ClosedCurve c = ClosedCurve::sample(1, 64, [](double psi, std::span<cplx> out) {
    out[0] = std::polar(1.0, 2.0 * psi);
  });
  ClosedCurve d = c.spectral_derivative();
  double maxerr = 0.0;
  for (int j = 0; j < 64; ++j) {
    cplx expect = cplx(0, 2) * std::polar(1.0, 2.0 * d.angle(j));
    maxerr = std::max(maxerr, std::abs(d.coord(0)[j] - expect));
  }
  CHECK(maxerr < 1e-12);
}

TEST_CASE("contour integrals on the unit circle") {
  ClosedCurve c = unit_circle(64);
  ClosedCurve d = c.spectral_derivative();
  const auto& z = c.coord(0);
  const auto& dz = d.coord(0);
  std::vector<cplx> integrand(64);

  SUBCASE("integral of z dz vanishes") {
    for (int j = 0; j < 64; ++j) integrand[j] = z[j] * dz[j];
    CHECK(std::abs(contour::contour_integral(c, integrand)) < 1e-12);
  }
  SUBCASE("integral of dz/z is 2 pi i") {
    for (int j = 0; j < 64; ++j) integrand[j] = dz[j] / z[j];
    CHECK(std::abs(contour::contour_integral(c, integrand) - cplx(0, 2 * kPi)) < 1e-12);
  }
  SUBCASE("integral of conj(z) dz is 2 pi i") {
    // direct evaluation: integral of e^{-i psi} * i e^{i psi} d psi = 2 pi i
    for (int j = 0; j < 64; ++j) integrand[j] = std::conj(z[j]) * dz[j];
    CHECK(std::abs(contour::contour_integral(c, integrand) - cplx(0, 2 * kPi)) < 1e-12);
  }
  SUBCASE("sample-count mismatch is rejected") {
    std::vector<cplx> wrong(32);
    CHECK_THROWS_AS(contour::contour_integral(c, wrong), Error);
  }
}

TEST_CASE("fourier coefficients of basic waves") {
  const int n = 64;
  SUBCASE("e^{i psi} puts all mass on c_1") {
    auto fd = contour::fourier_coefficients(unit_circle(n));
    CHECK(std::abs(fd.coeff(0, 1) - 1.0) < 1e-12);
    for (int m = -n / 2; m < n / 2; ++m)
      if (m != 1) CHECK(std::abs(fd.coeff(0, m)) < 1e-12);
  }
  SUBCASE("e^{-i psi} puts all mass on c_{-1}") {
    ClosedCurve c = ClosedCurve::sample(1, n, [](double psi, std::span<cplx> out) {
      out[0] = std::polar(1.0, -psi);
    });
    auto fd = contour::fourier_coefficients(c);
    CHECK(std::abs(fd.coeff(0, -1) - 1.0) < 1e-12);
    CHECK(std::abs(fd.coeff(0, 1)) < 1e-12);
  }
  SUBCASE("cos psi splits evenly between c_1 and c_{-1}") {
    ClosedCurve c = ClosedCurve::sample(1, n, [](double psi, std::span<cplx> out) {
      out[0] = std::cos(psi);
    });
    auto fd = contour::fourier_coefficients(c);
    CHECK(std::abs(fd.coeff(0, 1) - 0.5) < 1e-12);
    CHECK(std::abs(fd.coeff(0, -1) - 0.5) < 1e-12);
  }
}

TEST_CASE("fourier round trip reproduces the samples") {
  ClosedCurve c = ClosedCurve::sample(1, 128, [](double psi, std::span<cplx> out) {
    out[0] = std::exp(std::polar(1.0, psi)) + 0.3 * std::polar(1.0, -3.0 * psi);
  });
  auto fd = contour::fourier_coefficients(c);
  auto back = fd.inverse(0);
  double scale = 0.0, err = 0.0;
  for (int j = 0; j < 128; ++j) {
    scale = std::max(scale, std::abs(c.coord(0)[j]));
    err = std::max(err, std::abs(back[j] - c.coord(0)[j]));
  }
  CHECK(err < 1e-12 * scale);
}

TEST_CASE("doubling N changes smooth contour integrals below 1e-10") {
  auto make_integrand = [](int n) {
    ClosedCurve c = ClosedCurve::sample(1, n, [](double psi, std::span<cplx> out) {
      out[0] = std::polar(1.0, psi) + 0.25 * std::polar(1.0, 2.0 * psi);
    });
    ClosedCurve d = c.spectral_derivative();
    std::vector<cplx> v(n);
    for (int j = 0; j < n; ++j)
      v[j] = std::exp(c.coord(0)[j]) * std::conj(c.coord(0)[j]) * d.coord(0)[j];
    return v;
  };
  cplx a = contour::periodic_integral(make_integrand(128));
  cplx b = contour::periodic_integral(make_integrand(256));
  CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("contour integral is invariant under sample-phase rotation") {
  const int n = 128;
  auto integrand_at_offset = [&](int off) {
    std::vector<cplx> v(n);
    for (int j = 0; j < n; ++j) {
      double psi = 2.0 * kPi * (j + off) / n;
      cplx z = std::polar(1.0, psi);
      v[j] = std::exp(z) * std::conj(z) * cplx(0, 1) * z;
    }
    return v;
  };
  cplx a = contour::periodic_integral(integrand_at_offset(0));
  cplx b = contour::periodic_integral(integrand_at_offset(17));
  CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("integral of an exact derivative over a cycle vanishes") {
  ClosedCurve c = ClosedCurve::sample(1, 64, [](double psi, std::span<cplx> out) {
    out[0] = std::exp(std::polar(1.0, psi)) + std::polar(0.5, -2.0 * psi);
  });
  ClosedCurve d = c.spectral_derivative();
  CHECK(std::abs(contour::periodic_integral(d.coord(0))) < 1e-10);
}
