#pragma once

#include <functional>
#include <span>
#include <vector>

#include "aplab/common.hpp"

namespace aplab::contour {

/// Smooth closed curve in C^n stored as N equispaced samples per coordinate,
/// psi_j = 2*pi*j/N, treated as 2*pi-periodic. N is a power of two, N >= 16.
class ClosedCurve {
public:
  /// coords[i][j] = coordinate i at angle psi_j. All coordinates share N.
  explicit ClosedCurve(std::vector<std::vector<cplx>> coords);

  /// Samples a curve given as a callable psi -> point in C^n.
  /// With require_regular, rejects curves whose discrete derivative vanishes.
  static ClosedCurve sample(
      int ambient_dim, int num_samples,
      const std::function<void(double psi, std::span<cplx> out)>& f,
      bool require_regular = false);

  int dim() const { return static_cast<int>(coords_.size()); }
  int size() const { return num_samples_; }
  double angle(int j) const { return 2.0 * kPi * j / num_samples_; }

  const std::vector<cplx>& coord(int i) const { return coords_.at(i); }
  std::vector<cplx> point(int j) const;

  /// Largest sample deviation from the centroid, over all coordinates.
  /// Used to scale "distance to the curve" style tolerances.
  double scale() const { return scale_; }

  /// d(gamma)/d(psi) by differentiating the truncated Fourier series.
  ClosedCurve spectral_derivative() const;

private:
  std::vector<std::vector<cplx>> coords_;
  int num_samples_ = 0;
  double scale_ = 0.0;
};

/// Discrete Fourier data with the convention
/// samples_j = sum_m c_m e^{i m psi_j}, m = -N/2 .. N/2-1.
struct FourierData {
  int num_samples = 0;
  /// coefficients[i][m + N/2] = c_m for coordinate i.
  std::vector<std::vector<cplx>> coefficients;

  cplx coeff(int coordinate, int m) const;
  std::vector<cplx> inverse(int coordinate) const;

  /// l2 norm of the m < 0 coefficients of one coordinate.
  double negative_mass(int coordinate) const;
};

FourierData fourier_coefficients(const ClosedCurve& c);
FourierData fourier_coefficients(std::span<const cplx> scalar_samples);

/// Periodic trapezoid rule, (2*pi/N) * sum of the integrand samples.
/// Spectrally accurate for smooth integrands. The integrand must already
/// contain any dz/dpsi factor.
cplx contour_integral(const ClosedCurve& c, std::span<const cplx> integrand);

/// Same quadrature without a curve to validate against.
cplx periodic_integral(std::span<const cplx> integrand);

/// Spectral d/dpsi of scalar boundary samples.
std::vector<cplx> spectral_derivative(std::span<const cplx> samples);

}  // namespace aplab::contour
