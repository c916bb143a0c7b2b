#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "aplab/common.hpp"
#include "aplab/contour.hpp"
#include "aplab/cr.hpp"

namespace aplab::moments {

/// Monomial 1-form z^alpha dz_j in C^n.
struct MonomialForm {
  std::vector<int> alpha;
  int dz_index = 0;
};

/// All monomial forms with |alpha| <= k_max, deterministic order.
std::vector<MonomialForm> monomial_forms(int n, int k_max);

struct MomentReport {
  std::vector<cplx> moments;
  std::vector<MonomialForm> forms;
  double max_abs = 0.0;
  double scale = 1.0;  // largest integrand magnitude over all forms
  double tau = 1e-8;
  bool vanish = false;
};

/// Moments integral over gamma of f * z^alpha dz_j for the given forms.
MomentReport complex_moments(const contour::ClosedCurve& c, std::span<const cplx> f,
                             const std::vector<MonomialForm>& forms,
                             double tau_m = 1e-8);

/// Planar convenience: forms z^k dz, k = 0..k_max.
MomentReport complex_moments(const contour::ClosedCurve& c, std::span<const cplx> f,
                             int k_max, double tau_m = 1e-8);

struct ExtensionResult {
  std::vector<cplx> taylor;     // Taylor coefficients of F_D on the unit disc
  double negative_mass = 0.0;   // l2 norm of the m < 0 Fourier coefficients
  double total_mass = 0.0;
  bool extends = false;
  double boundary_mismatch = 0.0;  // max |F_D(e^{i psi_j}) - f_j|
};

/// One-variable holomorphic extension through the disc's own parametrization:
/// f composed with Phi_t(e^{i psi}) extends iff its negative Fourier
/// coefficients vanish below tau_e (relative to the total mass).
ExtensionResult disc_extension(std::span<const cplx> f_on_boundary,
                               double tau_e = 1e-8);

struct PlanarGrid {
  int nx = 0, ny = 0;
  double x0 = 0.0, y0 = 0.0, hx = 0.0, hy = 0.0;
  cplx point(int i, int j) const { return {x0 + i * hx, y0 + j * hy}; }
  int index(int i, int j) const { return j * nx + i; }
};

struct PlanarField {
  PlanarGrid grid;
  std::vector<double> values;       // residual per grid point (0 where invalid)
  std::vector<std::uint8_t> valid;  // 1 where the residual is defined
  double max_value = 0.0;
};

/// |df/dzbar| by second-order central differences at grid points whose four
/// neighbors carry data. mask (optional) marks grid points where f is defined.
PlanarField dbar_residual_planar(const PlanarGrid& grid, std::span<const cplx> f,
                                 std::span<const std::uint8_t> mask = {});

/// |df/dzbar| at one point from an evaluator, central differences with an
/// independent step h (not tied to any field grid).
double dbar_residual_point(const std::function<cplx(cplx)>& f, cplx z, double h);

/// Evaluator-based residual field over the masked grid points.
PlanarField dbar_residual_planar(const PlanarGrid& grid,
                                 const std::function<cplx(cplx)>& f,
                                 std::span<const std::uint8_t> mask, double h);

struct PatchField {
  std::vector<double> values;
  std::vector<std::uint8_t> valid;
  double max_value = 0.0;
};

/// Tangential CR residual: max |W f| over a kernel basis of the complex
/// tangent directions at each patch point (the n x d frame's complex kernel,
/// dimension = CR dimension). Zero kernel => point not constrained (valid=0).
PatchField dbar_residual_tangential(const cr::ManifoldPatch& patch,
                                    const cr::AmbientScalar& f, double tau,
                                    double h);

struct EquivalenceResult {
  MomentReport moments;
  ExtensionResult extension;
  bool agree = false;
};

/// Moment condition vs holomorphic extension on one disc boundary.
EquivalenceResult moments_equiv_extension(const contour::ClosedCurve& c,
                                          std::span<const cplx> f, int k_max,
                                          double tau_m = 1e-8, double tau_e = 1e-8);

}  // namespace aplab::moments
