#pragma once

#include <optional>
#include <span>
#include <vector>

#include "aplab/common.hpp"
#include "aplab/contour.hpp"

namespace aplab::argument {

/// Boundary samples of a function holomorphic on the closed unit disc,
/// together with the Taylor coefficients recovered from them. Provides an
/// evaluator valid on the closed disc (and, for resolved data, slightly
/// beyond, since the truncated series is a polynomial).
class DiscFunction {
public:
  static DiscFunction from_boundary(std::vector<cplx> samples,
                                    double holomorphy_tol = 1e-7);
  static DiscFunction from_taylor(std::vector<cplx> coefficients, int num_samples);

  int size() const { return static_cast<int>(boundary_.size()); }
  const std::vector<cplx>& boundary() const { return boundary_; }
  const std::vector<cplx>& taylor() const { return taylor_; }
  double negative_mass() const { return negative_mass_; }
  double scale() const { return scale_; }

  cplx eval(cplx zeta) const;
  cplx deriv(cplx zeta) const;

  /// Boundary samples on the circle of the given radius (2*factor upsampling
  /// available through num). num must be a power of two.
  std::vector<cplx> circle_samples(double radius, int num) const;

private:
  std::vector<cplx> boundary_;
  std::vector<cplx> taylor_;   // c_0 .. c_{N-1}
  double negative_mass_ = 0.0; // relative to total mass
  double scale_ = 0.0;         // max boundary modulus
};

/// Winding number of a closed planar curve about b via the logarithmic
/// residue quadrature (1/2*pi*i) * contour-integral of gamma'/(gamma - b).
/// Requires min distance from b to the samples > 1e-9 * curve scale.
double winding_number(const contour::ClosedCurve& c, cplx b);

/// Winding number by summation of principal-branch argument increments of
/// samples - b. Exact for sampled curves whose turning per step is < pi.
/// Independent route from the quadrature above.
double winding_arg_sum(std::span<const cplx> samples, cplx b);

/// Integer winding via crossing counting on the sample polygon. Robust for
/// grid searches; b must not lie on a polygon edge.
int winding_crossings(std::span<const cplx> samples, cplx b);

/// Validated rounding: |w - round(w)| must be below tol.
int round_to_integer(double w, double tol = 1e-8);

struct Zero {
  cplx location;
  int multiplicity = 1;
  bool on_boundary = false;
};

struct ZeroList {
  std::vector<Zero> zeros;
  double weighted_count() const;
  int total_multiplicity() const;
};

struct ZeroCountResult {
  double count = 0.0;          // interior + boundary/2
  int interior = 0;
  std::vector<Zero> boundary;  // detected boundary zeros
};

/// Weighted number of zeros of phi - b on the closed disc, boundary zeros
/// counted with factor 1/2. phi is holomorphic on the closed disc
/// (caller-asserted), given by samples on |zeta| = 1.
ZeroCountResult zero_count(std::span<const cplx> phi_boundary, cplx b);

/// Zero localization by recursive quadrisection with per-cell winding
/// counts, refined to cell diameter below cell_tol, then polished by
/// multiplicity-aware Newton iteration.
ZeroList locate_zeros(const DiscFunction& phi, cplx center = cplx(0, 0),
                      double radius = 1.0, double cell_tol = 1e-6);

/// Sparse polynomial in n complex variables.
struct MultiPoly {
  struct Term {
    cplx coefficient;
    std::vector<int> powers;  // one exponent per variable
  };
  int num_vars = 0;
  std::vector<Term> terms;

  cplx eval(std::span<const cplx> z) const;
};

/// Linking number of a closed curve in C^n with the variety P^{-1}(0),
/// computed as the logarithmic residue (1/2*pi*i) * integral of d(P.gamma)/(P.gamma).
double linking_number(const contour::ClosedCurve& c, const MultiPoly& P);

/// Topological degree of a sampled closed-curve map about a reference point.
int curve_degree(std::span<const cplx> image_samples, cplx reference = cplx(0, 0));

struct ResidueValue {
  double value = 0.0;
  /// Excluded angular windows (center angle, half width) per extrapolation level.
  std::vector<std::pair<double, double>> pv_windows;
};

/// Principal-value logarithmic residue I = (1/2*pi*i) * integral of
/// d(J/conj(J)) / (J/conj(J)) over the unit circle, with symmetric angular
/// windows excluded around isolated boundary zeros of J and window width
/// extrapolated to 0. Contract: I = 2 * weighted zero count of J on the
/// closed disc.
ResidueValue log_residue_pv(std::span<const cplx> j_boundary);

/// Boundary zeros of a disc function (location snapped to the unit circle),
/// with multiplicities from small-circle winding counts.
std::vector<Zero> detect_boundary_zeros(const DiscFunction& f);

}  // namespace aplab::argument
