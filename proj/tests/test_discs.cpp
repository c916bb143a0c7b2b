#include <cmath>
#include <vector>

#include "aplab/discs.hpp"
#include "aplab/linalg.hpp"
#include "doctest.h"

using namespace aplab;
using namespace aplab::discs;
using manifold::ParamManifold;

namespace {

// graph-of-constants family over shrinking discs (annulus graph of |z|)
DiscFamily example1(int m = 128, int nb = 256) {
  return DiscFamily::build(
      [](cplx zeta, std::span<const cplx> t, std::span<cplx> out) {
        double r = 2.0 + t[0].real();
        out[0] = r * zeta;
        out[1] = r;
      },
      ParamManifold::circle(m), 2, 2, {nb, 8});
}

// discs inscribed in the annulus, on the complex curve {(z, z)}
DiscFamily example2(int m = 128, int nb = 256) {
  return DiscFamily::build(
      [](cplx zeta, std::span<const cplx> t, std::span<cplx> out) {
        out[0] = zeta + 2.0 * t[0];
        out[1] = zeta + 2.0 * t[0];
      },
      ParamManifold::circle(m), 2, 2, {nb, 8});
}

// Hopf-style discs through the sphere, graph of |z1|^2
DiscFamily example3(int p = 2, int e = 16, int nb = 64) {
  return DiscFamily::build(
      [](cplx zeta, std::span<const cplx> t, std::span<cplx> out) {
        out[0] = t[0] * zeta;
        out[1] = t[1] * zeta;
        out[2] = std::norm(t[0]);
      },
      ParamManifold::sphere3(p, p, e), 3, 3, {nb, 4});
}

DiscFamily model_family(int m = 64, int nb = 64) {
  return DiscFamily::build(
      [](cplx, std::span<const cplx> t, std::span<cplx> out) {
        out[0] = 0.5 * t[0];
        out[1] = t[0];
      },
      ParamManifold::circle(m), 2, 1, {nb, 4});
}

}  // namespace

TEST_CASE("build validates holomorphy and dimensions") {
  CHECK_NOTHROW(example1());
  CHECK_NOTHROW(example2(32, 64));
  CHECK_NOTHROW(example3());

  // anti-holomorphic fiber data is rejected
  CHECK_THROWS_AS(DiscFamily::build(
                      [](cplx zeta, std::span<const cplx>, std::span<cplx> out) {
                        out[0] = std::conj(zeta);
                        out[1] = zeta;
                      },
                      ParamManifold::circle(16), 2, 2, {64, 4}),
                  Error);
  // 2n >= k + 2 is enforced
  CHECK_THROWS_AS(DiscFamily::build(
                      [](cplx zeta, std::span<const cplx>, std::span<cplx> out) {
                        out[0] = zeta;
                      },
                      ParamManifold::circle(16), 1, 2, {64, 4}),
                  Error);
  // declared d must be k or k+1
  CHECK_THROWS_AS(DiscFamily::build(
                      [](cplx zeta, std::span<const cplx>, std::span<cplx> out) {
                        out[0] = zeta;
                        out[1] = zeta;
                      },
                      ParamManifold::circle(16), 2, 3, {64, 4}),
                  Error);
}

TEST_CASE("partials match the hand-computed columns") {
  SUBCASE("example 2: columns (1,1) and 2ie^{i theta}(1,1)") {
    auto f = example2(32, 64);
    const auto& g = f.zeta_grid();
    for (int ti : {0, 5, 17}) {
      auto fb = f.fiber(ti);
      cplx t = fb.t[0];
      for (int zi : {0, 3, g.index(8, 11)}) {
        CHECK(std::abs(fb.dzeta[0][zi] - 1.0) < 1e-9);
        CHECK(std::abs(fb.dzeta[1][zi] - 1.0) < 1e-9);
        cplx expect = 2.0 * cplx(0, 1) * t;
        CHECK(std::abs(fb.tfield[0][0][zi] - expect) < 1e-8);
        CHECK(std::abs(fb.tfield[0][1][zi] - expect) < 1e-8);
      }
    }
  }
  SUBCASE("example 1 at theta = pi/2, zeta = 1: columns (2,0) and (-1,-1)") {
    auto f = example1(128, 64);
    const auto& g = f.zeta_grid();
    int ti = 32;  // theta = 2 pi 32/128 = pi/2
    auto fb = f.fiber(ti);
    int zi = g.index(g.rings, 0);  // zeta = 1
    CHECK(std::abs(fb.dzeta[0][zi] - 2.0) < 1e-9);
    CHECK(std::abs(fb.dzeta[1][zi]) < 1e-9);
    CHECK(std::abs(fb.tfield[0][0][zi] - cplx(-1, 0)) < 1e-8);
    CHECK(std::abs(fb.tfield[0][1][zi] - cplx(-1, 0)) < 1e-8);
  }
  SUBCASE("constant-in-zeta family has zero first column") {
    auto f = model_family();
    auto fb = f.fiber(7);
    CHECK(fb.max_dzeta_abs < 1e-12);
  }
}

TEST_CASE("regularity checks") {
  SUBCASE("example 2 passes with the annulus edges as locus") {
    auto f = example2(64, 128);
    auto edge = [](cplx zeta, std::span<const cplx> t) {
      double r = std::abs(zeta + 2.0 * t[0]);
      return std::abs(r - 1.0) < 1e-6 || std::abs(r - 3.0) < 1e-6;
    };
    auto rep = regularity_check(f, 1e-7, edge);
    CHECK(rep.t_rank_ok);
    CHECK(rep.boundary_rank_ok);
    CHECK(rep.pass);
    CHECK(rep.boundary_deficient > 0);  // the edge preimages are rank d-1
  }
  SUBCASE("a family ignoring t fails condition 1") {
    auto f = DiscFamily::build(
        [](cplx zeta, std::span<const cplx>, std::span<cplx> out) {
          out[0] = zeta;
          out[1] = cplx(0, 0);
        },
        ParamManifold::circle(32), 2, 1, {64, 4});
    auto rep = regularity_check(f, 1e-7);
    CHECK(!rep.t_rank_ok);
    CHECK(!rep.pass);
  }
  SUBCASE("example 3 fails condition 1 at zeta = 0") {
    auto rep = regularity_check(example3(), 1e-7);
    CHECK(!rep.t_rank_ok);
  }
}

TEST_CASE("rank fields") {
  SUBCASE("example 2 collapses to rank 1 with sigma2/sigma1 < 1e-10") {
    auto rf = rank_field(example2(64, 128), 1e-7);
    CHECK(rf.max_rank == 1);
    for (double r : rf.ratio2) CHECK(r < 1e-10);
  }
  SUBCASE("example 1 has rank 2 on a dense subset") {
    auto rf = rank_field(example1(128, 128), 1e-7);
    CHECK(rf.max_rank == 2);
    CHECK(rf.fraction_ratio2_above(1e-2) > 0.5);
  }
  SUBCASE("example 3 does not collapse") {
    auto rf = rank_field(example3(), 1e-7);
    CHECK(rf.max_rank == 3);
    CHECK(rf.fraction_ratio2_above(1e-2) > 0.5);
  }
  SUBCASE("constant family has rank 0") {
    auto f = DiscFamily::build(
        [](cplx, std::span<const cplx>, std::span<cplx> out) {
          out[0] = cplx(1, 0);
          out[1] = cplx(0, 0);
        },
        ParamManifold::circle(16), 2, 1, {64, 4});
    auto rf = rank_field(f, 1e-7);
    CHECK(rf.max_rank == 0);
  }
  SUBCASE("rank never exceeds min(k+1, n); dpsi column is redundant") {
    auto f = example3();
    auto rf = rank_field(f, 1e-7);
    for (int r : rf.rank) CHECK(r <= std::min(f.param_dim() + 1, f.ambient_dim()));

    // appending the dpsi column never changes the rank (CR collinearity)
    const auto& g = f.zeta_grid();
    for (int ti : {0, 13, 40}) {
      auto fb = f.fiber(ti);
      for (int zi : {0, 5, g.index(2, 9), g.index(4, 30)}) {
        Eigen::MatrixXcd base(3, 4), ext(3, 5);
        for (int i = 0; i < 3; ++i) {
          base(i, 0) = fb.dzeta[i][zi];
          ext(i, 0) = fb.dzeta[i][zi];
          for (int j = 0; j < 3; ++j) {
            base(i, j + 1) = fb.tfield[j][i][zi];
            ext(i, j + 1) = fb.tfield[j][i][zi];
          }
          ext(i, 4) = fb.dpsi(i, zi, g);
        }
        CHECK(linalg::rank_with_tol(base, 1e-7) == linalg::rank_with_tol(ext, 1e-7));
      }
    }
  }
}

TEST_CASE("jacobian fields") {
  SUBCASE("example 1: J = -i zeta (2+cos theta) sin theta") {
    auto f = example1(128, 128);
    auto jf = jacobian_field(f, {0, 1}, {0});
    const auto& g = jf.zgrid;
    for (int ti : {9, 32, 77}) {
      double theta = 2.0 * kPi * ti / 128;
      for (int zi : {0, g.index(4, 7), g.index(8, 100)}) {
        cplx zeta = g.point(zi);
        cplx expect = -cplx(0, 1) * zeta * (2.0 + std::cos(theta)) * std::sin(theta);
        CHECK(std::abs(jf.value(ti, zi) - expect) < 1e-7);
      }
    }
    CHECK(!jf.identically_zero);
    CHECK(jf.max_center_abs < 1e-10);
    CHECK(jf.max_neg_mass < 1e-9);
  }
  SUBCASE("example 2: J vanishes identically for any selection") {
    auto f = example2(32, 64);
    for (auto fields : {std::vector<int>{0}}) {
      auto jf = jacobian_field(f, {0, 1}, fields);
      CHECK(jf.identically_zero);
    }
    auto jauto = jacobian_field(f);
    CHECK(jauto.identically_zero);
  }
  SUBCASE("automatic selection on example 3 avoids the collinear field") {
    auto f = example3();
    auto jf = jacobian_field(f);
    CHECK(!jf.identically_zero);
    CHECK(jf.max_center_abs < 1e-10);
    CHECK(jf.max_neg_mass < 1e-9);
  }
  SUBCASE("J(0, t) vanishes for every admissible selection on example 1") {
    auto f = example1(32, 64);
    for (std::vector<int> rows : {std::vector<int>{0, 1}}) {
      auto jf = jacobian_field(f, rows, {0});
      CHECK(jf.max_center_abs < 1e-10);
    }
  }
  SUBCASE("d > n has no coordinate minor") {
    auto f = DiscFamily::build(
        [](cplx zeta, std::span<const cplx> t, std::span<cplx> out) {
          out[0] = zeta + t[0];
          out[1] = t[1];
        },
        ParamManifold::torus(8, 8), 2, 3, {64, 4});
    CHECK_THROWS_AS(jacobian_field(f), Error);
  }
}

TEST_CASE("fiber ratio test") {
  SUBCASE("example 1 coincidence pairs agree; perturbed control trips") {
    auto f = example1(128, 256);
    auto jf = jacobian_field(f, {0, 1}, {0});
    auto rep = fiber_ratio_test(f, jf);
    CHECK(!rep.vacuous);
    CHECK(rep.pairs > 100);
    CHECK(rep.max_violation < 1e-6);

    auto control = fiber_ratio_test(f, jf, 1e-6, 1e-3, /*perturb_control=*/true);
    CHECK(control.max_violation > 1e-2);
  }
  SUBCASE("injective boundary family is vacuous") {
    auto f = DiscFamily::build(
        [](cplx zeta, std::span<const cplx> t, std::span<cplx> out) {
          out[0] = zeta;
          out[1] = t[0];
        },
        ParamManifold::circle(64), 2, 2, {128, 4});
    auto jf = jacobian_field(f);
    auto rep = fiber_ratio_test(f, jf);
    CHECK(rep.vacuous);
  }
}

TEST_CASE("zero tracking") {
  SUBCASE("example 1: single chain at 0, two singular fibers") {
    auto f = example1(128, 128);
    auto jf = jacobian_field(f, {0, 1}, {0});
    auto rep = track_zeros(f, jf);
    CHECK(rep.singular_fibers == 2);  // theta = 0 and pi
    CHECK(rep.conserved);
    REQUIRE(rep.chains.size() == 1);
    CHECK(rep.chains[0].multiplicity == 1);
    for (const auto& [ti, loc] : rep.chains[0].path) CHECK(std::abs(loc) < 1e-6);
  }
  SUBCASE("J = zeta^2 - t/2: two chains exchanging sheets (monodromy)") {
    // hand-built Jacobian field over a trivial family carrier
    auto f = example2(64, 128);
    JacobianField jf;
    jf.zgrid = f.zeta_grid();
    jf.num_t = 64;
    jf.eta_rows = {0, 1};
    jf.field_indices = {0};
    jf.values.resize(static_cast<std::size_t>(jf.num_t) * jf.zgrid.num_points());
    jf.fiber_neg_mass.assign(jf.num_t, 0.0);
    jf.fiber_max_abs.assign(jf.num_t, 0.0);
    for (int ti = 0; ti < jf.num_t; ++ti) {
      cplx t = std::polar(1.0, 2.0 * kPi * ti / 64);
      for (int zi = 0; zi < jf.zgrid.num_points(); ++zi) {
        cplx zeta = jf.zgrid.point(zi);
        cplx v = zeta * zeta - 0.5 * t;
        jf.values[static_cast<std::size_t>(ti) * jf.zgrid.num_points() + zi] = v;
        jf.global_max_abs = std::max(jf.global_max_abs, std::abs(v));
      }
      for (const auto& v : jf.boundary_of(ti))
        jf.fiber_max_abs[ti] = std::max(jf.fiber_max_abs[ti], std::abs(v));
    }
    auto rep = track_zeros(f, jf);
    CHECK(rep.singular_fibers == 0);
    CHECK(rep.conserved);
    REQUIRE(rep.chains.size() == 2);
    REQUIRE(rep.monodromy.size() == 2);
    CHECK(rep.monodromy[0] == 1);  // branch exchange after a full loop
    CHECK(rep.monodromy[1] == 0);
    // oracle: zeros are +/- sqrt(t/2), modulus 1/sqrt(2)
    for (const auto& chain : rep.chains)
      for (const auto& [ti, loc] : chain.path)
        CHECK(std::abs(std::abs(loc) - 1.0 / std::sqrt(2.0)) < 1e-6);
  }
  SUBCASE("J = zeta^2: one chain of multiplicity 2") {
    auto f = example2(32, 64);
    JacobianField jf;
    jf.zgrid = f.zeta_grid();
    jf.num_t = 32;
    jf.eta_rows = {0, 1};
    jf.field_indices = {0};
    jf.values.resize(static_cast<std::size_t>(jf.num_t) * jf.zgrid.num_points());
    jf.fiber_neg_mass.assign(jf.num_t, 0.0);
    jf.fiber_max_abs.assign(jf.num_t, 1.0);
    for (int ti = 0; ti < jf.num_t; ++ti)
      for (int zi = 0; zi < jf.zgrid.num_points(); ++zi) {
        cplx zeta = jf.zgrid.point(zi);
        jf.values[static_cast<std::size_t>(ti) * jf.zgrid.num_points() + zi] =
            zeta * zeta;
      }
    jf.global_max_abs = 1.0;
    auto rep = track_zeros(f, jf);
    CHECK(rep.conserved);
    REQUIRE(rep.chains.size() == 1);
    CHECK(rep.chains[0].multiplicity == 2);
  }
}

TEST_CASE("degeneracy branches") {
  SUBCASE("example 3 drops dimension") {
    auto res = degeneracy_check(example3());
    CHECK(res.branch == DegeneracyBranch::DimensionDrop);
    CHECK(res.boundary_rank_max == 3);
  }
  SUBCASE("example 1 has Brouwer degree zero") {
    auto res = degeneracy_check(example1(64, 64));
    CHECK(res.branch == DegeneracyBranch::ZeroDegree);
    CHECK(res.degree_computed);
    CHECK(res.degree == 0);
  }
  SUBCASE("torus-like identity family has degree 1") {
    auto f = DiscFamily::build(
        [](cplx zeta, std::span<const cplx> t, std::span<cplx> out) {
          out[0] = zeta;
          out[1] = t[0];
        },
        ParamManifold::circle(64), 2, 2, {128, 4});
    auto res = degeneracy_check(f);
    CHECK(res.branch == DegeneracyBranch::NotDegenerate);
    CHECK(res.degree == 1);
  }
}

TEST_CASE("orbit nontriviality via the planar surrogate") {
  SUBCASE("concentric circles surround 0: orbit trivial") {
    auto f = DiscFamily::build(
        [](cplx zeta, std::span<const cplx> t, std::span<cplx> out) {
          double r = 1.5 + 0.5 * t[0].real();
          out[0] = r * zeta;
          out[1] = r;
        },
        ParamManifold::circle(64), 2, 2, {128, 4});
    OrbitSpec spec;
    spec.mode = OrbitSpec::Mode::Planar;
    spec.projection = 0;
    auto res = orbit_nontriviality(f, spec);
    CHECK(res.common_point_found);
    CHECK(std::abs(res.common_point) < 0.1);  // most central witness, near 0
    CHECK(!res.nontrivial);
  }
  SUBCASE("translating unit circles have no common point: orbit nontrivial") {
    auto f = DiscFamily::build(
        [](cplx zeta, std::span<const cplx> t, std::span<cplx> out) {
          out[0] = 1.5 * t[0].real() + zeta;
          out[1] = cplx(0, 0);
        },
        ParamManifold::circle(64), 2, 2, {128, 4});
    OrbitSpec spec;
    spec.mode = OrbitSpec::Mode::Planar;
    spec.projection = 0;
    auto res = orbit_nontriviality(f, spec);
    CHECK(!res.common_point_found);
    CHECK(res.nontrivial);
  }
  SUBCASE("example 2 projected discs have no common point") {
    OrbitSpec spec;
    spec.mode = OrbitSpec::Mode::Planar;
    spec.projection = 0;
    auto res = orbit_nontriviality(example2(64, 128), spec);
    CHECK(!res.common_point_found);
    CHECK(res.nontrivial);
  }
}

TEST_CASE("theorem verdicts on the paper fixtures") {
  SUBCASE("example 2: hypotheses hold and the rank collapses") {
    VerdictOptions opts;
    opts.orbit.mode = OrbitSpec::Mode::Planar;
    opts.orbit.projection = 0;
    opts.edge_locus = [](cplx zeta, std::span<const cplx> t) {
      double r = std::abs(zeta + 2.0 * t[0]);
      return std::abs(r - 1.0) < 1e-6 || std::abs(r - 3.0) < 1e-6;
    };
    auto v = parametric_ap_verdict(example2(64, 128), opts);
    CHECK(v.hypotheses_hold);
    CHECK(v.rank.max_rank == 1);
    CHECK(v.outcome == TheoremOutcome::TheoremPass);
  }
  SUBCASE("example 1: orbit hypothesis fails, rank does not collapse") {
    VerdictOptions opts;
    opts.orbit.mode = OrbitSpec::Mode::Planar;
    opts.orbit.projection = 0;
    opts.edge_locus = [](cplx, std::span<const cplx> t) {
      return std::abs(t[0].imag()) < 1e-6;
    };
    auto v = parametric_ap_verdict(example1(64, 128), opts);
    CHECK(!v.hypotheses_hold);
    CHECK(std::find(v.violated.begin(), v.violated.end(), "orbit") != v.violated.end());
    CHECK(v.rank.max_rank == 2);
    CHECK(v.outcome == TheoremOutcome::CounterexampleConfirmed);
  }
  SUBCASE("model family: collapse detected through fiber constancy") {
    VerdictOptions opts;
    opts.orbit.mode = OrbitSpec::Mode::Declared;
    opts.orbit.declared_nontrivial = true;
    auto v = parametric_ap_verdict(model_family(), opts);
    CHECK(v.hypotheses_hold);
    CHECK(v.fiber_curves_trivial);
    CHECK(v.fiberwise_constant);
    CHECK(v.max_dzeta < 1e-9);
    CHECK(v.outcome == TheoremOutcome::TheoremPass);
  }
}
