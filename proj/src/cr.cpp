#include "aplab/cr.hpp"

#include <algorithm>
#include <cmath>

#include "aplab/linalg.hpp"

namespace aplab::cr {

ManifoldPatch ManifoldPatch::chart(int ambient_dim, ChartSpec spec, ChartEmbed embed) {
  ManifoldPatch p;
  p.chart_flavor_ = true;
  p.n_ = ambient_dim;
  p.d_ = static_cast<int>(spec.grid.size());
  if (p.d_ < 1 || spec.ranges.size() != spec.grid.size() ||
      spec.periodic.size() != spec.grid.size())
    throw Error(ErrorCode::InvalidArgument, "inconsistent chart specification");
  for (int g : spec.grid)
    if (g < 3)
      throw Error(ErrorCode::InvalidArgument, "chart axis needs at least 3 samples");
  p.chart_ = std::move(spec);
  p.chart_embed_ = std::move(embed);

  double s = 0.0;
  std::vector<cplx> z(p.n_);
  for (int idx = 0; idx < p.num_points(); ++idx) {
    auto u = p.chart_point(idx);
    p.chart_embed_(u, z);
    for (const auto& w : z) s = std::max(s, std::abs(w));
  }
  p.scale_ = std::max(s, 1e-12);
  return p;
}

ManifoldPatch ManifoldPatch::on_manifold(int ambient_dim, manifold::ParamManifold m,
                                         ManifoldEmbed embed) {
  ManifoldPatch p;
  p.chart_flavor_ = false;
  p.n_ = ambient_dim;
  p.d_ = m.dim();
  if (p.d_ < 1)
    throw Error(ErrorCode::InvalidArgument, "patch on a point manifold");
  p.mani_ = std::move(m);
  p.mani_embed_ = std::move(embed);

  double s = 0.0;
  std::vector<cplx> z(p.n_);
  for (int idx = 0; idx < p.num_points(); ++idx) {
    auto t = p.mani_.point_at(idx);
    p.mani_embed_(t, z);
    for (const auto& w : z) s = std::max(s, std::abs(w));
  }
  p.scale_ = std::max(s, 1e-12);
  return p;
}

int ManifoldPatch::num_points() const {
  if (!chart_flavor_) return mani_.num_points();
  int n = 1;
  for (int g : chart_.grid) n *= g;
  return n;
}

std::vector<int> ManifoldPatch::grid_sizes() const {
  return chart_flavor_ ? chart_.grid : mani_.grid;
}

std::vector<int> ManifoldPatch::multi_index(int idx) const {
  if (!chart_flavor_) return mani_.multi_index(idx);
  std::vector<int> mi(chart_.grid.size());
  for (std::size_t a = chart_.grid.size(); a-- > 0;) {
    mi[a] = idx % chart_.grid[a];
    idx /= chart_.grid[a];
  }
  return mi;
}

bool ManifoldPatch::interior(int idx) const {
  if (!chart_flavor_) return true;
  auto mi = multi_index(idx);
  for (std::size_t a = 0; a < mi.size(); ++a) {
    if (chart_.periodic[a]) continue;
    if (mi[a] == 0 || mi[a] == chart_.grid[a] - 1) return false;
  }
  return true;
}

std::vector<double> ManifoldPatch::chart_point(int idx) const {
  if (!chart_flavor_)
    throw Error(ErrorCode::InvalidArgument, "chart_point on a manifold patch");
  auto mi = multi_index(idx);
  std::vector<double> u(mi.size());
  for (std::size_t a = 0; a < mi.size(); ++a) {
    double lo = chart_.ranges[a][0], hi = chart_.ranges[a][1];
    int g = chart_.grid[a];
    // periodic axes exclude the duplicate endpoint
    double step = chart_.periodic[a] ? (hi - lo) / g : (hi - lo) / (g - 1);
    u[a] = lo + step * mi[a];
  }
  return u;
}

std::vector<cplx> ManifoldPatch::embed_point(int idx) const {
  std::vector<cplx> z(n_);
  if (chart_flavor_) {
    auto u = chart_point(idx);
    chart_embed_(u, z);
  } else {
    auto t = mani_.point_at(idx);
    mani_embed_(t, z);
  }
  return z;
}

Eigen::MatrixXcd ManifoldPatch::raw_frame(int idx, double h) const {
  Eigen::MatrixXcd cols(n_, d_);
  std::vector<cplx> zp(n_), zm(n_);
  if (chart_flavor_) {
    auto u = chart_point(idx);
    for (int a = 0; a < d_; ++a) {
      auto up = u, um = u;
      up[a] += h;
      um[a] -= h;
      chart_embed_(up, zp);
      chart_embed_(um, zm);
      for (int i = 0; i < n_; ++i) cols(i, a) = (zp[i] - zm[i]) / (2.0 * h);
    }
  } else {
    auto t = mani_.point_at(idx);
    for (int a = 0; a < d_; ++a) {
      auto tp = mani_.flow(t, a, h);
      auto tm = mani_.flow(t, a, -h);
      mani_embed_(tp, zp);
      mani_embed_(tm, zm);
      for (int i = 0; i < n_; ++i) cols(i, a) = (zp[i] - zm[i]) / (2.0 * h);
    }
  }
  return cols;
}

namespace {

/// Modified Gram-Schmidt over R on complex columns viewed as vectors in R^{2n}.
Eigen::MatrixXcd orthonormalize_real(const Eigen::MatrixXcd& cols) {
  auto re_dot = [](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return (a.conjugate().cwiseProduct(b)).sum().real();
  };
  Eigen::MatrixXcd q = cols;
  const int d = static_cast<int>(cols.cols());
  double scale = 1e-300;
  for (int a = 0; a < d; ++a)
    scale = std::max(scale, std::sqrt(re_dot(q.col(a), q.col(a))));
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < a; ++b) {
      double proj = re_dot(q.col(b), q.col(a));
      q.col(a) -= proj * q.col(b);
    }
    double nrm = std::sqrt(re_dot(q.col(a), q.col(a)));
    if (nrm < 1e-8 * scale)
      throw Error(ErrorCode::NumericalError,
                  "tangent frame is rank deficient (immersion failure)");
    q.col(a) /= nrm;
  }
  return q;
}

}  // namespace

Eigen::MatrixXcd ManifoldPatch::tangent_frame(int idx, double h) const {
  return orthonormalize_real(raw_frame(idx, h));
}

Eigen::MatrixXcd ManifoldPatch::frame_columns(int idx, double h) const {
  return raw_frame(idx, h);
}

Eigen::VectorXcd ManifoldPatch::directional_derivatives(const AmbientScalar& f,
                                                        int idx, double h) const {
  Eigen::VectorXcd g(d_);
  std::vector<cplx> zp(n_), zm(n_);
  if (chart_flavor_) {
    auto u = chart_point(idx);
    for (int a = 0; a < d_; ++a) {
      auto up = u, um = u;
      up[a] += h;
      um[a] -= h;
      chart_embed_(up, zp);
      chart_embed_(um, zm);
      g(a) = (f(zp) - f(zm)) / (2.0 * h);
    }
  } else {
    auto t = mani_.point_at(idx);
    for (int a = 0; a < d_; ++a) {
      auto tp = mani_.flow(t, a, h);
      auto tm = mani_.flow(t, a, -h);
      mani_embed_(tp, zp);
      mani_embed_(tm, zm);
      g(a) = (f(zp) - f(zm)) / (2.0 * h);
    }
  }
  return g;
}

ManifoldPatch ManifoldPatch::graph_lift(AmbientScalar f) const {
  ManifoldPatch lift = *this;
  lift.n_ = n_ + 1;
  const int base_n = n_;
  if (chart_flavor_) {
    ChartEmbed base = chart_embed_;
    lift.chart_embed_ = [base, f, base_n](std::span<const double> u,
                                          std::span<cplx> out) {
      std::vector<cplx> z(base_n);
      base(u, z);
      for (int i = 0; i < base_n; ++i) out[i] = z[i];
      out[base_n] = f(z);
    };
  } else {
    ManifoldEmbed base = mani_embed_;
    lift.mani_embed_ = [base, f, base_n](std::span<const cplx> t,
                                         std::span<cplx> out) {
      std::vector<cplx> z(base_n);
      base(t, z);
      for (int i = 0; i < base_n; ++i) out[i] = z[i];
      out[base_n] = f(z);
    };
  }
  double s = 0.0;
  std::vector<cplx> z(lift.n_);
  for (int idx = 0; idx < lift.num_points(); ++idx) {
    auto p = lift.embed_point(idx);
    for (const auto& w : p) s = std::max(s, std::abs(w));
  }
  lift.scale_ = std::max(s, 1e-12);
  return lift;
}

int cr_dimension(const Eigen::MatrixXcd& frame, double tau) {
  return static_cast<int>(frame.cols()) - linalg::rank_with_tol(frame, tau);
}

const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::TotallyReal: return "totally-real";
    case PointClass::Generic: return "generic";
    case PointClass::Complex: return "complex";
    case PointClass::MaximallyComplex: return "maximally-complex";
    case PointClass::CR: return "cr";
  }
  return "?";
}

PointClass classify_point(int c, int d, int n) {
  if (d % 2 == 0 && c == d / 2) return PointClass::Complex;
  if (d % 2 == 1 && d > 1 && c == (d - 1) / 2) return PointClass::MaximallyComplex;
  if (c == 0) return PointClass::TotallyReal;
  if (c == std::max(0, d - n)) return PointClass::Generic;
  return PointClass::CR;
}

CRField classify(const ManifoldPatch& p, double tau, double h) {
  CRField field;
  const int np = p.num_points();
  const int d = p.dim(), n = p.ambient_dim();
  field.c.assign(np, -1);
  field.cls.assign(np, PointClass::CR);
  field.sigma_ratio.assign(np, 0.0);

  int cmin = d + 1, cmax = -1;
  for (int idx = 0; idx < np; ++idx) {
    if (!p.interior(idx)) continue;
    Eigen::MatrixXcd frame = p.tangent_frame(idx, h);
    Eigen::VectorXd sv = linalg::singular_values(frame);
    int rank = 0;
    double top = sv.size() > 0 ? sv(0) : 0.0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > tau * top) ++rank;
    int c = d - rank;
    field.c[idx] = c;
    field.cls[idx] = classify_point(c, d, n);
    if (rank < sv.size() && top > 0.0) field.sigma_ratio[idx] = sv(rank) / top;
    ++field.classified;
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
    if (c < std::max(0, d - n) || c > d / 2) ++field.bound_violations;
  }
  if (field.classified > 0) {
    field.c_min = cmin;
    field.c_max = cmax;
    field.constant_c = (cmin == cmax);
  }
  return field;
}

CRVerdict verdict_from_rank(bool hypotheses_hold, bool rank_collapsed,
                            const CRField& direct_field) {
  CRVerdict v;
  v.applicable = hypotheses_hold && rank_collapsed;
  v.direct_positive = direct_field.classified > 0 && direct_field.c_min >= 1;
  if (v.applicable) {
    v.asserted_positive = true;
    v.consistent = v.direct_positive;
    v.text = v.consistent
                 ? "positive CR dimension asserted and confirmed by direct sampling"
                 : "rank collapse asserts c >= 1 but the sampled c-field disagrees";
  } else {
    v.asserted_positive = false;
    v.consistent = true;
    v.text = hypotheses_hold ? "hypotheses hold but rank did not collapse"
                             : "hypotheses do not hold; no assertion";
  }
  return v;
}

}  // namespace aplab::cr
