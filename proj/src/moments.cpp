#include "aplab/moments.hpp"

#include <algorithm>
#include <cmath>

#include "aplab/fft.hpp"
#include "aplab/linalg.hpp"

namespace aplab::moments {

namespace {

void append_alphas(int n, int total, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = total; a >= 0; --a) {
    cur.push_back(a);
    append_alphas(n, total - a, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<MonomialForm> monomial_forms(int n, int k_max) {
  std::vector<MonomialForm> forms;
  for (int total = 0; total <= k_max; ++total) {
    std::vector<std::vector<int>> alphas;
    std::vector<int> cur;
    append_alphas(n, total, cur, alphas);
    for (const auto& alpha : alphas)
      for (int j = 0; j < n; ++j) forms.push_back({alpha, j});
  }
  return forms;
}

MomentReport complex_moments(const contour::ClosedCurve& c, std::span<const cplx> f,
                             const std::vector<MonomialForm>& forms, double tau_m) {
  const int n = c.size();
  if (static_cast<int>(f.size()) != n)
    throw Error(ErrorCode::InvalidArgument,
                "function samples do not match the curve sample count");
  contour::ClosedCurve dc = c.spectral_derivative();

  MomentReport rep;
  rep.forms = forms;
  rep.tau = tau_m;
  rep.moments.reserve(forms.size());
  double scale = 0.0;

  std::vector<cplx> integrand(n);
  for (const auto& form : forms) {
    if (static_cast<int>(form.alpha.size()) != c.dim() || form.dz_index < 0 ||
        form.dz_index >= c.dim())
      throw Error(ErrorCode::InvalidArgument, "monomial form does not fit the curve");
    for (int j = 0; j < n; ++j) {
      cplx mono(1.0, 0.0);
      for (int i = 0; i < c.dim(); ++i)
        for (int p = 0; p < form.alpha[i]; ++p) mono *= c.coord(i)[j];
      integrand[j] = f[j] * mono * dc.coord(form.dz_index)[j];
      scale = std::max(scale, std::abs(integrand[j]));
    }
    rep.moments.push_back(contour::periodic_integral(integrand));
  }

  rep.scale = std::max(scale, 1e-300);
  for (const auto& m : rep.moments) rep.max_abs = std::max(rep.max_abs, std::abs(m));
  rep.vanish = rep.max_abs < tau_m * rep.scale;
  return rep;
}

MomentReport complex_moments(const contour::ClosedCurve& c, std::span<const cplx> f,
                             int k_max, double tau_m) {
  if (c.dim() != 1)
    throw Error(ErrorCode::InvalidArgument,
                "k_max form of complex_moments expects a planar curve");
  std::vector<MonomialForm> forms;
  for (int k = 0; k <= k_max; ++k) forms.push_back({{k}, 0});
  return complex_moments(c, f, forms, tau_m);
}

ExtensionResult disc_extension(std::span<const cplx> f_on_boundary, double tau_e) {
  const int n = static_cast<int>(f_on_boundary.size());
  if (!is_pow2(n) || n < 16)
    throw Error(ErrorCode::InvalidArgument,
                "disc_extension needs a power-of-two sample count >= 16");
  std::vector<cplx> g = dft_coefficients(f_on_boundary);

  ExtensionResult res;
  double neg = 0.0, total = 0.0;
  for (int k = 0; k < n; ++k) {
    total += std::norm(g[k]);
    if (k >= n / 2) neg += std::norm(g[k]);
  }
  res.negative_mass = std::sqrt(neg);
  res.total_mass = std::sqrt(total);
  res.extends = res.negative_mass < tau_e * std::max(res.total_mass, 1.0);

  res.taylor.assign(g.begin(), g.begin() + n / 2);
  // boundary values of the reconstructed extension vs the data
  std::vector<cplx> coef(n, cplx(0, 0));
  std::copy(res.taylor.begin(), res.taylor.end(), coef.begin());
  std::vector<cplx> back = dft_samples(coef);
  for (int j = 0; j < n; ++j)
    res.boundary_mismatch =
        std::max(res.boundary_mismatch, std::abs(back[j] - f_on_boundary[j]));
  return res;
}

PlanarField dbar_residual_planar(const PlanarGrid& grid, std::span<const cplx> f,
                                 std::span<const std::uint8_t> mask) {
  const int nx = grid.nx, ny = grid.ny;
  if (nx < 5 || ny < 5)
    throw Error(ErrorCode::InvalidArgument,
                "dbar grid too coarse: need at least 5 points per direction");
  if (static_cast<int>(f.size()) != nx * ny)
    throw Error(ErrorCode::InvalidArgument, "dbar samples do not match the grid");
  if (!mask.empty() && mask.size() != f.size())
    throw Error(ErrorCode::InvalidArgument, "dbar mask does not match the grid");

  auto present = [&](int i, int j) {
    if (i < 0 || i >= nx || j < 0 || j >= ny) return false;
    return mask.empty() || mask[grid.index(i, j)] != 0;
  };

  PlanarField field;
  field.grid = grid;
  field.values.assign(f.size(), 0.0);
  field.valid.assign(f.size(), 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!present(i, j) || !present(i - 1, j) || !present(i + 1, j) ||
          !present(i, j - 1) || !present(i, j + 1))
        continue;
      cplx fx = (f[grid.index(i + 1, j)] - f[grid.index(i - 1, j)]) / (2.0 * grid.hx);
      cplx fy = (f[grid.index(i, j + 1)] - f[grid.index(i, j - 1)]) / (2.0 * grid.hy);
      double r = 0.5 * std::abs(fx + cplx(0, 1) * fy);
      int idx = grid.index(i, j);
      field.values[idx] = r;
      field.valid[idx] = 1;
      field.max_value = std::max(field.max_value, r);
    }
  return field;
}

double dbar_residual_point(const std::function<cplx(cplx)>& f, cplx z, double h) {
  cplx fx = (f(z + h) - f(z - h)) / (2.0 * h);
  cplx fy = (f(z + cplx(0, h)) - f(z - cplx(0, h))) / (2.0 * h);
  return 0.5 * std::abs(fx + cplx(0, 1) * fy);
}

PlanarField dbar_residual_planar(const PlanarGrid& grid,
                                 const std::function<cplx(cplx)>& f,
                                 std::span<const std::uint8_t> mask, double h) {
  if (grid.nx < 5 || grid.ny < 5)
    throw Error(ErrorCode::InvalidArgument,
                "dbar grid too coarse: need at least 5 points per direction");
  if (!mask.empty() && static_cast<int>(mask.size()) != grid.nx * grid.ny)
    throw Error(ErrorCode::InvalidArgument, "dbar mask does not match the grid");
  PlanarField field;
  field.grid = grid;
  field.values.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0.0);
  field.valid.assign(field.values.size(), 0);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      int idx = grid.index(i, j);
      if (!mask.empty() && !mask[idx]) continue;
      double r = dbar_residual_point(f, grid.point(i, j), h);
      field.values[idx] = r;
      field.valid[idx] = 1;
      field.max_value = std::max(field.max_value, r);
    }
  return field;
}

PatchField dbar_residual_tangential(const cr::ManifoldPatch& patch,
                                    const cr::AmbientScalar& f, double tau,
                                    double h) {
  PatchField field;
  const int np = patch.num_points();
  field.values.assign(np, 0.0);
  field.valid.assign(np, 0);
  for (int idx = 0; idx < np; ++idx) {
    if (!patch.interior(idx)) continue;
    // kernel of the raw differential matches the raw directional derivatives
    Eigen::MatrixXcd frame = patch.frame_columns(idx, h);
    Eigen::MatrixXcd kernel = linalg::kernel_basis(frame, tau);
    if (kernel.cols() == 0) continue;  // no complex tangent directions here

    Eigen::VectorXcd g = patch.directional_derivatives(f, idx, h);
    double r = 0.0;
    for (int kcol = 0; kcol < kernel.cols(); ++kcol)
      r = std::max(r, std::abs((kernel.col(kcol).transpose() * g)(0)));
    field.values[idx] = r;
    field.valid[idx] = 1;
    field.max_value = std::max(field.max_value, r);
  }
  return field;
}

EquivalenceResult moments_equiv_extension(const contour::ClosedCurve& c,
                                          std::span<const cplx> f, int k_max,
                                          double tau_m, double tau_e) {
  EquivalenceResult res;
  res.moments = complex_moments(c, f, k_max, tau_m);
  res.extension = disc_extension(f, tau_e);
  res.agree = (res.moments.vanish == res.extension.extends);
  return res;
}

}  // namespace aplab::moments
