#include <cmath>
#include <random>
#include <vector>

#include "aplab/cr.hpp"
#include "aplab/linalg.hpp"
#include "aplab/moments.hpp"
#include "doctest.h"

using namespace aplab;
using namespace aplab::cr;

namespace {

// graph of f over a rectangle in C, chart coordinates (x, y)
ManifoldPatch planar_graph(const std::function<cplx(cplx)>& f, int grid = 17) {
  ChartSpec spec;
  spec.ranges = {{-1.0, 1.0}, {-1.0, 1.0}};
  spec.periodic = {false, false};
  spec.grid = {grid, grid};
  return ManifoldPatch::chart(2, spec, [f](std::span<const double> u, std::span<cplx> out) {
    cplx z(u[0], u[1]);
    out[0] = z;
    out[1] = f(z);
  });
}

ManifoldPatch annulus_graph(const std::function<cplx(cplx)>& f) {
  ChartSpec spec;
  spec.ranges = {{1.0, 3.0}, {0.0, 2.0 * kPi}};
  spec.periodic = {false, true};
  spec.grid = {17, 64};
  return ManifoldPatch::chart(2, spec, [f](std::span<const double> u, std::span<cplx> out) {
    cplx z = std::polar(u[0], u[1]);
    out[0] = z;
    out[1] = f(z);
  });
}

const double kH = 1e-5;
const double kTau = 1e-7;

}  // namespace

TEST_CASE("tangent frames of graphs") {
  SUBCASE("graph of z spans {(1,1),(i,i)}") {
    auto p = planar_graph([](cplx z) { return z; });
    int idx = p.num_points() / 2;
    Eigen::MatrixXcd fr = p.frame_columns(idx, kH);
    CHECK(std::abs(fr(0, 0) - cplx(1, 0)) < 1e-9);
    CHECK(std::abs(fr(1, 0) - cplx(1, 0)) < 1e-9);
    CHECK(std::abs(fr(0, 1) - cplx(0, 1)) < 1e-9);
    CHECK(std::abs(fr(1, 1) - cplx(0, 1)) < 1e-9);
  }
  SUBCASE("graph of conj(z) spans {(1,1),(i,-i)}") {
    auto p = planar_graph([](cplx z) { return std::conj(z); });
    int idx = p.num_points() / 2;
    Eigen::MatrixXcd fr = p.frame_columns(idx, kH);
    CHECK(std::abs(fr(1, 1) - cplx(0, -1)) < 1e-9);
  }
}

TEST_CASE("sphere S^3 in C^2: frame and CR dimension") {
  auto m = manifold::ParamManifold::sphere3(8, 8, 8);
  auto p = ManifoldPatch::on_manifold(2, m, [](std::span<const cplx> t, std::span<cplx> out) {
    out[0] = t[0];
    out[1] = t[1];
  });
  // find the lattice point closest to (1, 0)
  int best = 0;
  double bd = 1e9;
  for (int i = 0; i < p.num_points(); ++i) {
    auto z = p.embed_point(i);
    double d = std::abs(z[0] - 1.0) + std::abs(z[1]);
    if (d < bd) { bd = d; best = i; }
  }
  Eigen::MatrixXcd fr = p.tangent_frame(best, kH);
  // oracle: at (1,0), the kernel of d(|z1|^2+|z2|^2) is spanned by
  // (i,0),(0,1),(0,i); complex rank is 2, so c = 3 - 2 = 1
  CHECK(linalg::rank_with_tol(fr, kTau) == 2);
  CHECK(cr_dimension(fr, kTau) == 1);

  auto field = classify(p, kTau, kH);
  CHECK(field.constant_c);
  CHECK(field.c_min == 1);
  for (int i = 0; i < p.num_points(); ++i)
    CHECK(field.cls[i] == PointClass::MaximallyComplex);
  CHECK(field.bound_violations == 0);
}

TEST_CASE("cr_dimension on explicit frames") {
  Eigen::MatrixXcd complex_line(2, 2);
  complex_line << cplx(1, 0), cplx(0, 1), cplx(1, 0), cplx(0, 1);
  CHECK(cr_dimension(complex_line, kTau) == 1);

  Eigen::MatrixXcd totally_real(2, 2);
  totally_real << cplx(1, 0), cplx(0, 1), cplx(1, 0), cplx(0, -1);
  // 2x2 determinant -i - i = -2i != 0, complex rank 2
  CHECK(cr_dimension(totally_real, kTau) == 0);
}

TEST_CASE("c is invariant under real-linear changes of frame basis") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto p = planar_graph([](cplx z) { return z * z; });
  int idx = p.num_points() / 2 + 3;
  Eigen::MatrixXcd fr = p.frame_columns(idx, kH);
  int c0 = cr_dimension(fr, kTau);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd a(2, 2);
    a << u(rng), u(rng), u(rng), u(rng);
    if (std::abs(a.determinant()) < 0.1) continue;
    Eigen::MatrixXcd fr2 = fr * a.cast<cplx>();
    CHECK(cr_dimension(fr2, kTau) == c0);
  }
}

TEST_CASE("classification of the fixture manifolds") {
  SUBCASE("graph of |z| over the annulus is totally real") {
    auto field = classify(annulus_graph([](cplx z) { return std::abs(z); }), kTau, kH);
    CHECK(field.classified > 0);
    CHECK(field.constant_c);
    CHECK(field.c_min == 0);
    for (std::size_t i = 0; i < field.c.size(); ++i)
      if (field.c[i] >= 0) CHECK(field.cls[i] == PointClass::TotallyReal);
  }
  SUBCASE("graph of z over the annulus is a complex curve") {
    auto field = classify(annulus_graph([](cplx z) { return z; }), kTau, kH);
    CHECK(field.constant_c);
    CHECK(field.c_min == 1);
    for (std::size_t i = 0; i < field.c.size(); ++i)
      if (field.c[i] >= 0) CHECK(field.cls[i] == PointClass::Complex);
  }
  SUBCASE("graph of |z1|^2 over S^3: totally real except the circle z1 = 0") {
    auto m = manifold::ParamManifold::sphere3(4, 4, 16);
    auto p = ManifoldPatch::on_manifold(
        3, m, [](std::span<const cplx> t, std::span<cplx> out) {
          out[0] = t[0];
          out[1] = t[1];
          out[2] = std::norm(t[0]);
        });
    auto field = classify(p, kTau, kH);
    CHECK(!field.constant_c);
    CHECK(field.c_min == 0);
    CHECK(field.c_max == 1);
    for (int i = 0; i < p.num_points(); ++i) {
      auto z = p.embed_point(i);
      if (std::abs(z[0]) < 1e-9)
        CHECK(field.c[i] == 1);  // the named circle
      else
        CHECK(field.c[i] == 0);
    }
  }
  SUBCASE("graph of z1 over S^3 is maximally complex") {
    auto m = manifold::ParamManifold::sphere3(4, 4, 16);
    auto p = ManifoldPatch::on_manifold(
        3, m, [](std::span<const cplx> t, std::span<cplx> out) {
          out[0] = t[0];
          out[1] = t[1];
          out[2] = t[0];
        });
    auto field = classify(p, kTau, kH);
    CHECK(field.constant_c);
    CHECK(field.c_min == 1);
    for (int i = 0; i < p.num_points(); ++i)
      CHECK(field.cls[i] == PointClass::MaximallyComplex);
  }
}

TEST_CASE("CR dimension bounds hold on every fixture") {
  auto patches = std::vector<ManifoldPatch>{
      planar_graph([](cplx z) { return std::exp(z); }),
      annulus_graph([](cplx z) { return std::abs(z); }),
      annulus_graph([](cplx z) { return z; }),
  };
  for (const auto& p : patches) {
    auto field = classify(p, kTau, kH);
    CHECK(field.bound_violations == 0);
  }
}

TEST_CASE("graph lifts") {
  SUBCASE("lift by zero preserves the c-field") {
    auto base = annulus_graph([](cplx z) { return std::abs(z); });
    auto lift = base.graph_lift([](std::span<const cplx>) { return cplx(0, 0); });
    auto fb = classify(base, kTau, kH);
    auto fl = classify(lift, kTau, kH);
    CHECK(fb.c == fl.c);
  }
  SUBCASE("graph of holomorphic f has c = 1 everywhere") {
    std::vector<std::function<cplx(cplx)>> fns = {
        [](cplx z) { return z * z; }, [](cplx z) { return std::exp(z); }};
    for (const auto& f : fns) {
      auto field = classify(planar_graph(f), kTau, kH);
      CHECK(field.constant_c);
      CHECK(field.c_min == 1);
    }
  }
  SUBCASE("graph of conj(z) has c = 0 everywhere") {
    auto field = classify(planar_graph([](cplx z) { return std::conj(z); }), kTau, kH);
    CHECK(field.constant_c);
    CHECK(field.c_min == 0);
  }
}

TEST_CASE("tangential CR residual distinguishes CR from non-CR data on S^3") {
  auto m = manifold::ParamManifold::sphere3(6, 6, 8);
  auto p = ManifoldPatch::on_manifold(2, m, [](std::span<const cplx> t, std::span<cplx> out) {
    out[0] = t[0];
    out[1] = t[1];
  });
  auto holo = moments::dbar_residual_tangential(
      p, [](std::span<const cplx> z) { return z[0] * z[1]; }, kTau, kH);
  CHECK(holo.max_value < 1e-6);

  auto anti = moments::dbar_residual_tangential(
      p, [](std::span<const cplx> z) { return std::conj(z[0]); }, kTau, kH);
  CHECK(anti.max_value > 0.1);
}

TEST_CASE("verdict_from_rank cross-checks the direct field") {
  auto field = classify(planar_graph([](cplx z) { return z * z; }), kTau, kH);
  auto good = verdict_from_rank(true, true, field);
  CHECK(good.applicable);
  CHECK(good.consistent);

  auto tr = classify(planar_graph([](cplx z) { return std::conj(z); }), kTau, kH);
  auto bad = verdict_from_rank(true, true, tr);
  CHECK(!bad.consistent);

  auto na = verdict_from_rank(false, false, tr);
  CHECK(!na.applicable);
  CHECK(na.consistent);
}
