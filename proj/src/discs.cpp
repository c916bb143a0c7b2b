#include "aplab/discs.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "aplab/fft.hpp"
#include "aplab/linalg.hpp"

namespace aplab::discs {

namespace {

std::vector<std::vector<cplx>> boundary_taylor(const FamilyEvaluator& phi, int n,
                                               int nb, std::span<const cplx> t,
                                               std::vector<std::vector<cplx>>* samples_out) {
  std::vector<std::vector<cplx>> samples(n, std::vector<cplx>(nb));
  std::vector<cplx> out(n);
  for (int j = 0; j < nb; ++j) {
    phi(std::polar(1.0, 2.0 * kPi * j / nb), t, out);
    for (int i = 0; i < n; ++i) samples[i][j] = out[i];
  }
  std::vector<std::vector<cplx>> tay(n);
  for (int i = 0; i < n; ++i) tay[i] = dft_coefficients(samples[i]);
  if (samples_out) *samples_out = std::move(samples);
  return tay;
}

/// Relative negative Fourier mass of one coefficient set (DFT layout).
double neg_mass_of(const std::vector<cplx>& tay) {
  const int nb = static_cast<int>(tay.size());
  double total = 0.0, neg = 0.0;
  for (int k = 0; k < nb; ++k) {
    total += std::norm(tay[k]);
    if (k >= nb / 2) neg += std::norm(tay[k]);
  }
  return std::sqrt(neg) / std::max(std::sqrt(total), 1e-300);
}

/// Values of a coefficient set over the zeta grid (scaled inverse FFT per ring).
std::vector<cplx> eval_on_grid(const std::vector<cplx>& tay, const ZetaGrid& g) {
  std::vector<cplx> vals(g.num_points());
  vals[0] = tay[0];
  std::vector<cplx> scaled(g.boundary);
  for (int ring = 1; ring <= g.rings; ++ring) {
    double r = g.radius(ring);
    double rm = 1.0;
    for (int m = 0; m < g.boundary; ++m) {
      scaled[m] = tay[m] * rm;
      rm *= r;
    }
    std::vector<cplx> smp = dft_samples(scaled);
    for (int a = 0; a < g.boundary; ++a) vals[g.index(ring, a)] = smp[a];
  }
  return vals;
}

std::vector<cplx> derivative_coeffs(const std::vector<cplx>& tay) {
  std::vector<cplx> d(tay.size(), cplx(0, 0));
  for (std::size_t m = 1; m < tay.size(); ++m)
    d[m - 1] = tay[m] * static_cast<double>(m);
  return d;
}

}  // namespace

DiscFamily DiscFamily::build(FamilyEvaluator phi, manifold::ParamManifold m,
                             int ambient_dim, int declared_d, FamilyGridSpec grid,
                             double holo_tol, double h_t) {
  if (!is_pow2(grid.boundary) || grid.boundary < 16)
    throw Error(ErrorCode::InvalidArgument,
                "family boundary grid must be a power of two >= 16");
  if (grid.rings < 2)
    throw Error(ErrorCode::InvalidArgument, "family needs at least 2 rings");
  const int k = m.dim();
  if (2 * ambient_dim < k + 2)
    throw Error(ErrorCode::InvalidArgument,
                "target space too small: need 2n >= k + 2");
  if (declared_d != k && declared_d != k + 1)
    throw Error(ErrorCode::InvalidArgument,
                "declared image dimension must be k or k + 1");

  DiscFamily f;
  f.phi_ = std::move(phi);
  f.m_ = std::move(m);
  f.n_ = ambient_dim;
  f.d_ = declared_d;
  f.zgrid_ = ZetaGrid{grid.rings, grid.boundary};
  f.h_t_ = h_t;

  // holomorphy invariant: per fiber, per coordinate, the boundary data has
  // (relative) negative Fourier mass below tolerance
  double scale = 0.0, worst = 0.0;
  for (int ti = 0; ti < f.m_.num_points(); ++ti) {
    auto t = f.m_.point_at(ti);
    std::vector<std::vector<cplx>> samples;
    auto tay = boundary_taylor(f.phi_, f.n_, grid.boundary, t, &samples);
    for (int i = 0; i < f.n_; ++i) {
      worst = std::max(worst, neg_mass_of(tay[i]));
      for (const auto& z : samples[i]) scale = std::max(scale, std::abs(z));
    }
  }
  f.scale_ = std::max(scale, 1e-300);
  f.max_neg_mass_ = worst;
  if (worst > holo_tol)
    throw Error(ErrorCode::NumericalError,
                "family is not holomorphic per fiber: relative negative "
                "Fourier mass " + std::to_string(worst));
  return f;
}

std::vector<cplx> DiscFamily::eval(cplx zeta, std::span<const cplx> t) const {
  std::vector<cplx> out(n_);
  phi_(zeta, t, out);
  return out;
}

DiscFamily::Fiber DiscFamily::fiber(int t_idx) const {
  Fiber fb;
  fb.t = m_.point_at(t_idx);
  const int nb = zgrid_.boundary;
  const int k = m_.dim();

  auto tay = boundary_taylor(phi_, n_, nb, fb.t, nullptr);
  fb.phi.resize(n_);
  fb.dzeta.resize(n_);
  for (int i = 0; i < n_; ++i) {
    fb.phi[i] = eval_on_grid(tay[i], zgrid_);
    fb.dzeta[i] = eval_on_grid(derivative_coeffs(tay[i]), zgrid_);
  }

  fb.tfield.resize(k);
  for (int j = 0; j < k; ++j) {
    auto tp = m_.flow(fb.t, j, h_t_);
    auto tm = m_.flow(fb.t, j, -h_t_);
    auto tayp = boundary_taylor(phi_, n_, nb, tp, nullptr);
    auto taym = boundary_taylor(phi_, n_, nb, tm, nullptr);
    fb.tfield[j].resize(n_);
    for (int i = 0; i < n_; ++i) {
      std::vector<cplx> diff(nb);
      for (int mcoef = 0; mcoef < nb; ++mcoef)
        diff[mcoef] = (tayp[i][mcoef] - taym[i][mcoef]) / (2.0 * h_t_);
      fb.tfield[j][i] = eval_on_grid(diff, zgrid_);
    }
  }

  for (int i = 0; i < n_; ++i)
    for (const auto& z : fb.dzeta[i]) fb.max_dzeta_abs = std::max(fb.max_dzeta_abs, std::abs(z));

  // boundary curve diameter (2 * max deviation from the mean point)
  double dev = 0.0;
  for (int i = 0; i < n_; ++i) {
    cplx mean(0, 0);
    for (int a = 0; a < nb; ++a) mean += fb.phi[i][zgrid_.index(zgrid_.rings, a)];
    mean /= static_cast<double>(nb);
    for (int a = 0; a < nb; ++a)
      dev = std::max(dev, std::abs(fb.phi[i][zgrid_.index(zgrid_.rings, a)] - mean));
  }
  fb.boundary_diameter = 2.0 * dev;
  return fb;
}

RegularityReport regularity_check(const DiscFamily& f, double tau,
                                  const LocusPredicate& edge_locus,
                                  const InteriorPredicate& omega_interior) {
  RegularityReport rep;
  const auto& g = f.zeta_grid();
  const int k = f.param_dim();
  const int n = f.ambient_dim();
  const int d = f.declared_d();
  rep.strip_checked = (n == 1 && k == 1);
  rep.strip_min_imratio = std::numeric_limits<double>::infinity();

  for (int ti = 0; ti < f.param().num_points(); ++ti) {
    auto fb = f.fiber(ti);
    // condition 1: real rank of the t-differential equals k everywhere
    if (k > 0) {
      Eigen::MatrixXd mt(2 * n, k);
      for (int zi = 0; zi < g.num_points(); ++zi) {
        for (int j = 0; j < k; ++j)
          for (int i = 0; i < n; ++i) {
            mt(2 * i, j) = fb.tfield[j][i][zi].real();
            mt(2 * i + 1, j) = fb.tfield[j][i][zi].imag();
          }
        if (linalg::rank_with_tol_real(mt, tau) < k) ++rep.t_rank_offenders;
      }
    }
    // condition 2: boundary differential rank d off the edge locus
    Eigen::MatrixXd mb(2 * n, k + 1);
    for (int a = 0; a < g.boundary; ++a) {
      int zi = g.index(g.rings, a);
      for (int i = 0; i < n; ++i) {
        cplx dpsi = fb.dpsi(i, zi, g);
        mb(2 * i, 0) = dpsi.real();
        mb(2 * i + 1, 0) = dpsi.imag();
        for (int j = 0; j < k; ++j) {
          mb(2 * i, j + 1) = fb.tfield[j][i][zi].real();
          mb(2 * i + 1, j + 1) = fb.tfield[j][i][zi].imag();
        }
      }
      int rank = linalg::rank_with_tol_real(mb, tau);
      if (rank < d) {
        ++rep.boundary_deficient;
        bool on_edge = edge_locus && edge_locus(g.point(zi), fb.t);
        if (!on_edge) ++rep.boundary_offenders;
      }
      if (rep.strip_checked) {
        cplx dpsi = fb.dpsi(0, zi, g);
        cplx tvel = fb.tfield[0][0][zi];
        if (std::abs(dpsi) > 1e-12 * f.scale()) {
          double im = std::abs((tvel / dpsi).imag());
          cplx point = fb.phi[0][zi];
          bool interior = !omega_interior || omega_interior(point);
          if (interior) {
            rep.strip_min_imratio = std::min(rep.strip_min_imratio, im);
            if (im < 1e-9) ++rep.strip_offenders;
          }
        }
      }
    }
  }
  rep.t_rank_ok = (rep.t_rank_offenders == 0);
  rep.boundary_rank_ok = (rep.boundary_offenders == 0);
  rep.pass = rep.t_rank_ok && rep.boundary_rank_ok;
  if (!std::isfinite(rep.strip_min_imratio)) rep.strip_min_imratio = 0.0;
  return rep;
}

double RankField::fraction_ratio2_above(double threshold) const {
  if (rank.empty()) return 0.0;
  std::size_t hits = 0;
  for (double r : ratio2)
    if (r > threshold) ++hits;
  return static_cast<double>(hits) / static_cast<double>(ratio2.size());
}

RankField rank_field(const DiscFamily& f, double tau) {
  RankField field;
  field.zgrid = f.zeta_grid();
  field.num_t = f.param().num_points();
  field.tau = tau;
  const int n = f.ambient_dim();
  const int k = f.param_dim();
  field.rank.reserve(static_cast<std::size_t>(field.num_t) * field.zgrid.num_points());
  field.ratio2.reserve(field.rank.capacity());

  Eigen::MatrixXcd cols(n, k + 1);
  for (int ti = 0; ti < field.num_t; ++ti) {
    auto fb = f.fiber(ti);
    for (int zi = 0; zi < field.zgrid.num_points(); ++zi) {
      for (int i = 0; i < n; ++i) {
        cols(i, 0) = fb.dzeta[i][zi];
        for (int j = 0; j < k; ++j) cols(i, j + 1) = fb.tfield[j][i][zi];
      }
      Eigen::VectorXd sv = linalg::singular_values(cols);
      int rank = 0;
      double top = sv.size() > 0 ? sv(0) : 0.0;
      for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tau * top) ++rank;
      field.rank.push_back(rank);
      field.ratio2.push_back(sv.size() > 1 && top > 0.0 ? sv(1) / top : 0.0);
      field.max_rank = std::max(field.max_rank, rank);
    }
  }
  return field;
}

std::vector<cplx> JacobianField::boundary_of(int t_idx) const {
  std::vector<cplx> b(zgrid.boundary);
  for (int a = 0; a < zgrid.boundary; ++a)
    b[a] = value(t_idx, zgrid.index(zgrid.rings, a));
  return b;
}

namespace {

void combinations(int n, int r, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(r);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == r) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i <= n - (r - depth); ++i) {
      cur[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  if (r >= 0 && r <= n) rec(0, 0);
}

cplx jacobian_at(const DiscFamily::Fiber& fb, const ZetaGrid& g, int zi,
                 const std::vector<int>& rows, const std::vector<int>& fields) {
  const int d = static_cast<int>(rows.size());
  Eigen::MatrixXcd m(d, d);
  for (int r = 0; r < d; ++r) {
    m(r, 0) = fb.dpsi(rows[r], zi, g);
    for (int c = 1; c < d; ++c) m(r, c) = fb.tfield[fields[c - 1]][rows[r]][zi];
  }
  return m.determinant();
}

}  // namespace

JacobianField jacobian_field(const DiscFamily& f, std::vector<int> eta_rows,
                             std::vector<int> field_indices) {
  const int n = f.ambient_dim();
  const int k = f.param_dim();
  const int d = f.declared_d();
  if (d > n)
    throw Error(ErrorCode::InvalidArgument,
                "jacobian_field needs a coordinate d x d minor (d <= n)");

  if (eta_rows.empty() || field_indices.empty()) {
    // probe a coarse sub-grid and keep the selection maximizing |J|
    std::vector<std::vector<int>> row_sets, field_sets;
    if (eta_rows.empty()) combinations(n, d, row_sets);
    else row_sets.push_back(eta_rows);
    if (field_indices.empty()) combinations(k, d - 1, field_sets);
    else field_sets.push_back(field_indices);
    if (row_sets.empty() || field_sets.empty())
      throw Error(ErrorCode::InvalidArgument, "no admissible minor selection");

    const int nt = f.param().num_points();
    std::vector<int> probe_t;
    int stride_t = std::max(1, nt / 8);
    for (int ti = 0; ti < nt; ti += stride_t) probe_t.push_back(ti);
    const auto& g = f.zeta_grid();
    std::vector<int> probe_z;
    int stride_a = std::max(1, g.boundary / 16);
    for (int a = 0; a < g.boundary; a += stride_a)
      probe_z.push_back(g.index(g.rings, a));

    double best = -1.0;
    std::vector<int> best_rows = row_sets[0], best_fields = field_sets[0];
    for (int ti : probe_t) {
      auto fb = f.fiber(ti);
      for (const auto& rows : row_sets)
        for (const auto& fields : field_sets) {
          double local = 0.0;
          for (int zi : probe_z)
            local = std::max(local, std::abs(jacobian_at(fb, g, zi, rows, fields)));
          // lexicographic tie-break: strict improvement required
          if (local > best * (1.0 + 1e-12)) {
            best = local;
            best_rows = rows;
            best_fields = fields;
          }
        }
    }
    eta_rows = best_rows;
    field_indices = best_fields;
  }
  if (static_cast<int>(eta_rows.size()) != d ||
      static_cast<int>(field_indices.size()) != d - 1)
    throw Error(ErrorCode::InvalidArgument, "invalid minor selection");

  JacobianField jf;
  jf.zgrid = f.zeta_grid();
  jf.num_t = f.param().num_points();
  jf.eta_rows = eta_rows;
  jf.field_indices = field_indices;
  jf.values.resize(static_cast<std::size_t>(jf.num_t) * jf.zgrid.num_points());
  jf.fiber_neg_mass.resize(jf.num_t);
  jf.fiber_max_abs.resize(jf.num_t);

  double col_scale = 0.0;
  for (int ti = 0; ti < jf.num_t; ++ti) {
    auto fb = f.fiber(ti);
    for (int zi = 0; zi < jf.zgrid.num_points(); ++zi) {
      cplx v = jacobian_at(fb, jf.zgrid, zi, eta_rows, field_indices);
      jf.values[static_cast<std::size_t>(ti) * jf.zgrid.num_points() + zi] = v;
      jf.global_max_abs = std::max(jf.global_max_abs, std::abs(v));
    }
    jf.max_center_abs = std::max(jf.max_center_abs, std::abs(jf.value(ti, 0)));

    std::vector<cplx> b = jf.boundary_of(ti);
    double bmax = 0.0;
    for (const auto& v : b) bmax = std::max(bmax, std::abs(v));
    jf.fiber_max_abs[ti] = bmax;
    jf.fiber_neg_mass[ti] = neg_mass_of(dft_coefficients(b));
    jf.max_neg_mass = std::max(jf.max_neg_mass, jf.fiber_neg_mass[ti]);

    // scale of the column-norm product, for the identically-zero call
    double prod = 1.0;
    int zi = jf.zgrid.index(jf.zgrid.rings, 0);
    for (int c = 0; c < d; ++c) {
      double nr = 0.0;
      for (int r : eta_rows) {
        cplx v = (c == 0) ? fb.dpsi(r, zi, jf.zgrid)
                          : fb.tfield[field_indices[c - 1]][r][zi];
        nr += std::norm(v);
      }
      prod *= std::sqrt(nr);
    }
    col_scale = std::max(col_scale, prod);
  }
  jf.identically_zero = jf.global_max_abs <= 1e-10 * std::max(col_scale, 1e-300);
  // neg mass of an identically-zero fiber is noise; report 0 there
  if (jf.identically_zero) {
    std::fill(jf.fiber_neg_mass.begin(), jf.fiber_neg_mass.end(), 0.0);
    jf.max_neg_mass = 0.0;
  }
  return jf;
}

FiberRatioReport fiber_ratio_test(const DiscFamily& f, const JacobianField& jf,
                                  double coincidence_rel, double j_floor_rel,
                                  bool perturb_control) {
  if (jf.identically_zero)
    throw Error(ErrorCode::InvalidArgument,
                "fiber_ratio_test: J vanishes identically");
  FiberRatioReport rep;
  const auto& g = f.zeta_grid();
  const int nt = f.param().num_points();
  const int nb = g.boundary;
  const double tol = coincidence_rel * f.scale();
  rep.coincidence_tol = tol;
  const double j_floor = j_floor_rel * jf.global_max_abs;

  struct Pt {
    std::vector<double> key;
    std::vector<cplx> phi;
    std::vector<cplx> t;
    cplx ratio;
    double psi;
  };
  std::vector<Pt> pts;
  pts.reserve(static_cast<std::size_t>(nt) * nb);
  for (int ti = 0; ti < nt; ++ti) {
    auto fb = f.fiber(ti);
    for (int a = 0; a < nb; ++a) {
      int zi = g.index(g.rings, a);
      cplx J = jf.value(ti, zi);
      if (std::abs(J) <= j_floor) continue;
      if (perturb_control) {
        // breaks sigma-constancy on pairs differing in either the parameter
        // (odd Im t term) or the disc angle (cos psi term)
        double gpsi = std::cos(2.0 * kPi * a / nb);
        double gt = fb.t.empty() ? 0.0 : fb.t[0].imag();
        J *= std::polar(1.0, gt + gpsi);
      }
      Pt p;
      p.phi.reserve(f.ambient_dim());
      for (int i = 0; i < f.ambient_dim(); ++i) p.phi.push_back(fb.phi[i][zi]);
      p.t = fb.t;
      p.ratio = J / std::conj(J);
      p.psi = 2.0 * kPi * a / nb;
      pts.push_back(std::move(p));
    }
  }

  // parameter-space separation below which a pair is a trivial neighbor
  double param_step = 2.0 * kPi;
  for (int gsz : f.param().grid) param_step = std::min(param_step, 2.0 * kPi / gsz);
  param_step = std::min(param_step, 2.0 * kPi / nb);
  const double sep = 3.0 * param_step;

  auto pair_separation = [&](const Pt& a, const Pt& b) {
    double s = std::abs(std::remainder(a.psi - b.psi, 2.0 * kPi));
    for (std::size_t i = 0; i < a.t.size(); ++i) s += std::abs(a.t[i] - b.t[i]);
    return s;
  };

  // two shifted quantizations catch coincidences straddling bucket borders
  for (int shift = 0; shift < 2; ++shift) {
    double off = shift * 0.5 * tol;
    std::vector<std::pair<std::vector<long long>, int>> keys;
    keys.reserve(pts.size());
    for (std::size_t p = 0; p < pts.size(); ++p) {
      std::vector<long long> key;
      key.reserve(2 * pts[p].phi.size());
      for (const auto& z : pts[p].phi) {
        key.push_back(static_cast<long long>(std::floor((z.real() + off) / tol)));
        key.push_back(static_cast<long long>(std::floor((z.imag() + off) / tol)));
      }
      keys.emplace_back(std::move(key), static_cast<int>(p));
    }
    std::sort(keys.begin(), keys.end());
    std::size_t run_start = 0;
    for (std::size_t i = 1; i <= keys.size(); ++i) {
      if (i == keys.size() || keys[i].first != keys[run_start].first) {
        std::size_t run_len = i - run_start;
        if (run_len > 1) {
          std::size_t cap = std::min<std::size_t>(run_len, 64);
          for (std::size_t a = run_start; a < run_start + cap; ++a)
            for (std::size_t b = a + 1; b < run_start + cap; ++b) {
              const Pt& pa = pts[keys[a].second];
              const Pt& pb = pts[keys[b].second];
              double dist = 0.0;
              for (std::size_t ci = 0; ci < pa.phi.size(); ++ci)
                dist = std::max(dist, std::abs(pa.phi[ci] - pb.phi[ci]));
              if (dist >= tol) continue;
              if (pair_separation(pa, pb) <= sep) continue;
              ++rep.pairs;
              rep.max_violation =
                  std::max(rep.max_violation, std::abs(pa.ratio - pb.ratio));
            }
        }
        run_start = i;
      }
    }
  }
  rep.vacuous = (rep.pairs == 0);
  return rep;
}

TrackReport track_zeros(const DiscFamily& f, const JacobianField& jf) {
  TrackReport rep;
  const int nt = jf.num_t;
  rep.fibers.resize(nt);

  for (int ti = 0; ti < nt; ++ti) {
    std::vector<cplx> b = jf.boundary_of(ti);
    if (jf.fiber_max_abs[ti] <= 1e-10 * std::max(jf.global_max_abs, 1e-300)) {
      rep.fibers[ti].singular = true;
      ++rep.singular_fibers;
      continue;
    }
    auto fdisc = argument::DiscFunction::from_boundary(b, 1e-6);
    auto zl = argument::locate_zeros(fdisc);
    auto zc = argument::zero_count(b, cplx(0, 0));
    int boundary_mult = 0;
    for (const auto& z : zc.boundary) boundary_mult += z.multiplicity;
    if (zl.total_multiplicity() != zc.interior + boundary_mult) rep.conserved = false;
    rep.fibers[ti].zeros = zl.zeros;
  }

  // chain stitching across the parameter circle (k = 1), skipping singular
  // fibers; multiplicities of merging chains add at branch points
  if (f.param().kind == manifold::Kind::Circle) {
    std::vector<int> live;
    for (int ti = 0; ti < nt; ++ti)
      if (!rep.fibers[ti].singular) live.push_back(ti);
    if (!live.empty()) {
      for (const auto& z : rep.fibers[live[0]].zeros) {
        ZeroChain c;
        c.multiplicity = z.multiplicity;
        c.path.emplace_back(live[0], z.location);
        rep.chains.push_back(std::move(c));
      }
      for (std::size_t s = 1; s < live.size(); ++s) {
        int ti = live[s];
        const auto& zs = rep.fibers[ti].zeros;
        std::vector<int> claimed(zs.size(), 0);
        for (auto& chain : rep.chains) {
          const cplx tail = chain.path.back().second;
          int bestz = -1;
          double bd = std::numeric_limits<double>::infinity();
          for (std::size_t zi = 0; zi < zs.size(); ++zi) {
            double dd = std::abs(zs[zi].location - tail);
            if (dd < bd) {
              bd = dd;
              bestz = static_cast<int>(zi);
            }
          }
          if (bestz >= 0) {
            if (claimed[bestz]) ++rep.branch_events;  // chains merged here
            claimed[bestz] = 1;
            chain.path.emplace_back(ti, zs[bestz].location);
            if (zs[bestz].multiplicity != chain.multiplicity) ++rep.branch_events;
          }
        }
        for (std::size_t zi = 0; zi < zs.size(); ++zi)
          if (!claimed[zi]) {
            ZeroChain c;
            c.multiplicity = zs[zi].multiplicity;
            c.path.emplace_back(ti, zs[zi].location);
            rep.chains.push_back(std::move(c));
            ++rep.branch_events;
          }
      }
      // monodromy: continue each chain across the wrap-around and find the
      // seed it lands on
      rep.monodromy.assign(rep.chains.size(), -1);
      for (std::size_t c = 0; c < rep.chains.size(); ++c) {
        const cplx tail = rep.chains[c].path.back().second;
        const auto& zs = rep.fibers[live[0]].zeros;
        int best = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t zi = 0; zi < zs.size(); ++zi) {
          double dd = std::abs(zs[zi].location - tail);
          if (dd < bd) {
            bd = dd;
            best = static_cast<int>(zi);
          }
        }
        // seeds were created in zero order at live[0]
        if (best >= 0 && static_cast<std::size_t>(best) < rep.chains.size())
          rep.monodromy[c] = best;
      }
    }
  }
  return rep;
}

const char* to_string(DegeneracyBranch b) {
  switch (b) {
    case DegeneracyBranch::DimensionDrop: return "dimension-drop";
    case DegeneracyBranch::ZeroDegree: return "zero-degree";
    case DegeneracyBranch::NotDegenerate: return "not-degenerate";
    case DegeneracyBranch::Unknown: return "unknown";
  }
  return "?";
}

namespace {

/// Signed preimage counting for boundary maps with d = k + 1 = 2 (circle
/// parameter). Returns nullopt when no probe yields a clean regular value.
std::optional<int> brouwer_degree_2d(const DiscFamily& f) {
  const int n = f.ambient_dim();
  const double h = 1e-6;

  auto eval_at = [&](double psi, double theta) {
    std::vector<cplx> t = {std::polar(1.0, theta)};
    return f.eval(std::polar(1.0, psi), t);
  };
  auto jac_at = [&](double psi, double theta) {
    Eigen::MatrixXd J(2 * n, 2);
    auto pp = eval_at(psi + h, theta), pm = eval_at(psi - h, theta);
    auto tp = eval_at(psi, theta + h), tm = eval_at(psi, theta - h);
    for (int i = 0; i < n; ++i) {
      J(2 * i, 0) = (pp[i] - pm[i]).real() / (2 * h);
      J(2 * i + 1, 0) = (pp[i] - pm[i]).imag() / (2 * h);
      J(2 * i, 1) = (tp[i] - tm[i]).real() / (2 * h);
      J(2 * i + 1, 1) = (tp[i] - tm[i]).imag() / (2 * h);
    }
    return J;
  };

  const double probes[][2] = {{0.37, 1.21}, {2.11, 0.73}, {1.03, 2.63},
                              {4.21, 3.31}, {5.11, 0.41}, {2.71, 5.03}};
  const int grid_psi = 96, grid_theta = 96;

  std::optional<int> agreed;
  for (const auto& probe : probes) {
    auto b = eval_at(probe[0], probe[1]);
    Eigen::MatrixXd J0 = jac_at(probe[0], probe[1]);
    Eigen::VectorXd sv = linalg::singular_values_real(J0);
    if (sv(1) < 1e-6 * sv(0)) continue;  // probe is near a fold
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(J0);
    Eigen::MatrixXd B =
        qr.householderQ() * Eigen::MatrixXd::Identity(2 * n, 2);
    // orient the target plane by the map itself at the probe preimage
    if ((B.transpose() * J0).determinant() < 0) B.col(1) = -B.col(1);

    double scale = 0.0;
    std::vector<std::vector<double>> res(grid_psi, std::vector<double>(grid_theta));
    for (int ip = 0; ip < grid_psi; ++ip)
      for (int it = 0; it < grid_theta; ++it) {
        auto v = eval_at(2.0 * kPi * ip / grid_psi, 2.0 * kPi * it / grid_theta);
        double r = 0.0;
        for (int i = 0; i < n; ++i) r += std::norm(v[i] - b[i]);
        res[ip][it] = std::sqrt(r);
        scale = std::max(scale, res[ip][it]);
      }

    // polish every local minimum of the residual
    std::vector<std::pair<double, double>> found;
    bool probe_ok = true;
    int deg = 0;
    for (int ip = 0; ip < grid_psi && probe_ok; ++ip)
      for (int it = 0; it < grid_theta && probe_ok; ++it) {
        bool ismin = true;
        for (int dp = -1; dp <= 1 && ismin; ++dp)
          for (int dt = -1; dt <= 1; ++dt) {
            if (dp == 0 && dt == 0) continue;
            if (res[(ip + dp + grid_psi) % grid_psi][(it + dt + grid_theta) % grid_theta] <
                res[ip][it]) {
              ismin = false;
              break;
            }
          }
        if (!ismin || res[ip][it] > 0.3 * scale) continue;

        double psi = 2.0 * kPi * ip / grid_psi, theta = 2.0 * kPi * it / grid_theta;
        bool converged = false;
        for (int iter = 0; iter < 60; ++iter) {
          auto v = eval_at(psi, theta);
          Eigen::VectorXd r(2 * n);
          for (int i = 0; i < n; ++i) {
            r(2 * i) = (v[i] - b[i]).real();
            r(2 * i + 1) = (v[i] - b[i]).imag();
          }
          if (r.norm() < 1e-10 * std::max(scale, 1.0)) {
            converged = true;
            break;
          }
          Eigen::MatrixXd J = jac_at(psi, theta);
          Eigen::Vector2d step =
              (J.transpose() * J).ldlt().solve(J.transpose() * r);
          if (!step.allFinite()) break;
          psi -= step(0);
          theta -= step(1);
          if (step.norm() < 1e-13) {
            auto v2 = eval_at(psi, theta);
            double rr = 0.0;
            for (int i = 0; i < n; ++i) rr += std::norm(v2[i] - b[i]);
            converged = std::sqrt(rr) < 1e-9 * std::max(scale, 1.0);
            break;
          }
        }
        if (!converged) continue;
        psi = std::fmod(std::fmod(psi, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi);
        theta = std::fmod(std::fmod(theta, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi);
        bool dup = false;
        for (const auto& q : found) {
          double dpsi = std::abs(std::remainder(q.first - psi, 2.0 * kPi));
          double dth = std::abs(std::remainder(q.second - theta, 2.0 * kPi));
          if (dpsi + dth < 1e-4) {
            dup = true;
            break;
          }
        }
        if (dup) continue;
        found.emplace_back(psi, theta);

        Eigen::MatrixXd Ju = jac_at(psi, theta);
        double det2 = (B.transpose() * Ju).determinant();
        double ref = Ju.colwise().norm().prod();
        if (std::abs(det2) < 1e-8 * std::max(ref, 1e-300)) {
          probe_ok = false;  // preimage sits on a fold: value not regular
          break;
        }
        deg += (det2 > 0) ? 1 : -1;
      }
    if (!probe_ok) continue;
    if (agreed && *agreed != deg) return std::nullopt;  // inconsistent probes
    if (agreed) return deg;
    agreed = deg;
  }
  return std::nullopt;
}

}  // namespace

DegeneracyResult degeneracy_check(const DiscFamily& f) {
  DegeneracyResult res;
  const auto& g = f.zeta_grid();
  const int n = f.ambient_dim();
  const int k = f.param_dim();
  const int d = f.declared_d();

  Eigen::MatrixXd mb(2 * n, k + 1);
  for (int ti = 0; ti < f.param().num_points(); ++ti) {
    auto fb = f.fiber(ti);
    for (int a = 0; a < g.boundary; ++a) {
      int zi = g.index(g.rings, a);
      for (int i = 0; i < n; ++i) {
        cplx dpsi = fb.dpsi(i, zi, g);
        mb(2 * i, 0) = dpsi.real();
        mb(2 * i + 1, 0) = dpsi.imag();
        for (int j = 0; j < k; ++j) {
          mb(2 * i, j + 1) = fb.tfield[j][i][zi].real();
          mb(2 * i + 1, j + 1) = fb.tfield[j][i][zi].imag();
        }
      }
      res.boundary_rank_max =
          std::max(res.boundary_rank_max, linalg::rank_with_tol_real(mb, 1e-7));
    }
  }

  if (d < k + 1) {
    if (res.boundary_rank_max == d) {
      res.branch = DegeneracyBranch::DimensionDrop;
    } else {
      res.branch = DegeneracyBranch::Unknown;
      res.note = "declared d = " + std::to_string(d) +
                 " does not match sampled boundary rank " +
                 std::to_string(res.boundary_rank_max);
    }
    return res;
  }

  if (d == 2 && k == 1) {
    auto deg = brouwer_degree_2d(f);
    if (deg) {
      res.degree_computed = true;
      res.degree = *deg;
      res.branch = (*deg == 0) ? DegeneracyBranch::ZeroDegree
                               : DegeneracyBranch::NotDegenerate;
    } else {
      res.branch = DegeneracyBranch::Unknown;
      res.note = "no probe yielded a clean regular value for the degree";
    }
    return res;
  }

  res.branch = DegeneracyBranch::Unknown;
  res.note = "degree computation unsupported for d = k + 1 > 2";
  return res;
}

OrbitResult orbit_nontriviality(const DiscFamily& f, const OrbitSpec& spec) {
  OrbitResult res;
  if (spec.mode == OrbitSpec::Mode::Declared) {
    res.mode = "declared";
    res.nontrivial = spec.declared_nontrivial;
    return res;
  }
  res.mode = "planar";
  if (spec.projection < 0 || spec.projection >= f.ambient_dim())
    throw Error(ErrorCode::InvalidArgument, "orbit projection out of range");

  const auto& g = f.zeta_grid();
  const int nt = f.param().num_points();
  std::vector<std::vector<cplx>> curves(nt);
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  double min_curve_dim = 1e300;
  for (int ti = 0; ti < nt; ++ti) {
    auto fb = f.fiber(ti);
    auto& c = curves[ti];
    c.resize(g.boundary);
    double cxmin = 1e300, cxmax = -1e300, cymin = 1e300, cymax = -1e300;
    for (int a = 0; a < g.boundary; ++a) {
      c[a] = fb.phi[spec.projection][g.index(g.rings, a)];
      cxmin = std::min(cxmin, c[a].real());
      cxmax = std::max(cxmax, c[a].real());
      cymin = std::min(cymin, c[a].imag());
      cymax = std::max(cymax, c[a].imag());
    }
    xmin = std::min(xmin, cxmin);
    xmax = std::max(xmax, cxmax);
    ymin = std::min(ymin, cymin);
    ymax = std::max(ymax, cymax);
    min_curve_dim = std::min(min_curve_dim, std::min(cxmax - cxmin, cymax - cymin));
  }
  double padx = 0.01 * (xmax - xmin + 1e-12), pady = 0.01 * (ymax - ymin + 1e-12);
  xmin -= padx;
  xmax += padx;
  ymin -= pady;
  ymax += pady;
  const double cw = (xmax - xmin) / spec.search_nx;
  const double ch = (ymax - ymin) / spec.search_ny;

  // collect every surrounded candidate and report the most central one
  std::vector<cplx> passing;
  for (int iy = 0; iy < spec.search_ny; ++iy)
    for (int ix = 0; ix < spec.search_nx; ++ix) {
      cplx b(xmin + (ix + 0.5) * cw, ymin + (iy + 0.5) * ch);
      bool ok = true;
      for (int ti = 0; ti < nt; ++ti)
        if (argument::winding_crossings(curves[ti], b) < 1) {
          ok = false;
          break;
        }
      if (ok) passing.push_back(b);
    }
  if (!passing.empty()) {
    res.common_point_found = true;
    cplx centroid(0, 0);
    for (const auto& b : passing) centroid += b;
    centroid /= static_cast<double>(passing.size());
    res.common_point = passing[0];
    for (const auto& b : passing)
      if (std::abs(b - centroid) < std::abs(res.common_point - centroid))
        res.common_point = b;
  }
  if (!res.common_point_found && std::max(cw, ch) > 0.25 * min_curve_dim)
    res.inconclusive = true;
  res.nontrivial = !res.common_point_found && !res.inconclusive;
  return res;
}

const char* to_string(TheoremOutcome o) {
  switch (o) {
    case TheoremOutcome::TheoremPass: return "theorem-pass";
    case TheoremOutcome::TheoremFail: return "theorem-implication-failure";
    case TheoremOutcome::CounterexampleConfirmed: return "counterexample-confirmed";
    case TheoremOutcome::HypothesisFailConclusionHolds:
      return "hypothesis-fails-conclusion-holds";
    case TheoremOutcome::Unknown: return "unknown";
  }
  return "?";
}

TheoremVerdict parametric_ap_verdict(const DiscFamily& f, const VerdictOptions& opts) {
  TheoremVerdict v;
  v.d = f.declared_d();
  v.regularity = regularity_check(f, opts.tau_rank, opts.edge_locus, opts.omega_interior);
  v.rank = rank_field(f, opts.tau_rank);
  v.degeneracy = degeneracy_check(f);
  v.orbit = orbit_nontriviality(f, opts.orbit);

  double max_dzeta = 0.0, max_diam = 0.0;
  for (int ti = 0; ti < f.param().num_points(); ++ti) {
    auto fb = f.fiber(ti);
    max_dzeta = std::max(max_dzeta, fb.max_dzeta_abs);
    max_diam = std::max(max_diam, fb.boundary_diameter);
  }
  v.max_dzeta = max_dzeta;
  v.fiber_curves_trivial = max_diam < 1e-6 * f.scale();
  v.fiberwise_constant = max_dzeta < 1e-9 * f.scale();

  bool hyp_reg = v.regularity.pass;
  bool degen_known = v.degeneracy.branch != DegeneracyBranch::Unknown;
  bool hyp_degen = v.degeneracy.branch == DegeneracyBranch::DimensionDrop ||
                   v.degeneracy.branch == DegeneracyBranch::ZeroDegree;
  bool orbit_known = !v.orbit.inconclusive;
  bool hyp_orbit = v.orbit.nontrivial;

  if (!hyp_reg) v.violated.push_back("regularity");
  if (degen_known && !hyp_degen) v.violated.push_back("degeneracy");
  if (orbit_known && !hyp_orbit) v.violated.push_back("orbit");

  // d = 1 families are the classical fiberwise argument principle: the
  // conclusion is constancy in zeta (the rank form needs d > 1)
  v.conclusion_holds = (v.d == 1) ? v.fiberwise_constant : (v.rank.max_rank < v.d);

  v.hypotheses_hold = hyp_reg && hyp_degen && hyp_orbit && degen_known && orbit_known;
  if (!degen_known || !orbit_known) {
    v.outcome = TheoremOutcome::Unknown;
  } else if (v.hypotheses_hold) {
    v.outcome = v.conclusion_holds ? TheoremOutcome::TheoremPass
                                   : TheoremOutcome::TheoremFail;
  } else {
    v.outcome = v.conclusion_holds ? TheoremOutcome::HypothesisFailConclusionHolds
                                   : TheoremOutcome::CounterexampleConfirmed;
  }
  return v;
}

}  // namespace aplab::discs
