#include "aplab/contour.hpp"

#include <algorithm>
#include <cmath>

#include "aplab/fft.hpp"

namespace aplab::contour {

namespace {

void check_sample_count(int n) {
  if (n < 16 || !is_pow2(n))
    throw Error(ErrorCode::InvalidArgument,
                "curve sample count must be a power of two >= 16, got " +
                    std::to_string(n));
}

}  // namespace

ClosedCurve::ClosedCurve(std::vector<std::vector<cplx>> coords)
    : coords_(std::move(coords)) {
  if (coords_.empty())
    throw Error(ErrorCode::InvalidArgument, "curve needs at least one coordinate");
  num_samples_ = static_cast<int>(coords_[0].size());
  check_sample_count(num_samples_);
  for (const auto& c : coords_)
    if (static_cast<int>(c.size()) != num_samples_)
      throw Error(ErrorCode::InvalidArgument, "curve coordinates disagree on sample count");

  scale_ = 0.0;
  for (const auto& c : coords_) {
    cplx mean(0.0, 0.0);
    for (const auto& z : c) mean += z;
    mean /= static_cast<double>(num_samples_);
    for (const auto& z : c) scale_ = std::max(scale_, std::abs(z - mean));
  }
}

ClosedCurve ClosedCurve::sample(
    int ambient_dim, int num_samples,
    const std::function<void(double psi, std::span<cplx> out)>& f,
    bool require_regular) {
  check_sample_count(num_samples);
  if (ambient_dim < 1)
    throw Error(ErrorCode::InvalidArgument, "ambient dimension must be positive");

  std::vector<std::vector<cplx>> coords(ambient_dim, std::vector<cplx>(num_samples));
  std::vector<cplx> pt(ambient_dim);
  for (int j = 0; j < num_samples; ++j) {
    f(2.0 * kPi * j / num_samples, pt);
    for (int i = 0; i < ambient_dim; ++i) coords[i][j] = pt[i];
  }
  ClosedCurve curve(std::move(coords));

  if (require_regular) {
    ClosedCurve d = curve.spectral_derivative();
    double dscale = 0.0;
    for (int i = 0; i < ambient_dim; ++i)
      for (const auto& z : d.coord(i)) dscale = std::max(dscale, std::abs(z));
    for (int j = 0; j < num_samples; ++j) {
      double speed = 0.0;
      for (int i = 0; i < ambient_dim; ++i) speed += std::norm(d.coord(i)[j]);
      speed = std::sqrt(speed);
      if (speed <= 1e-9 * std::max(dscale, 1e-300))
        throw Error(ErrorCode::NumericalError,
                    "curve is not regular: derivative vanishes near psi = " +
                        std::to_string(curve.angle(j)));
    }
  }
  return curve;
}

std::vector<cplx> ClosedCurve::point(int j) const {
  std::vector<cplx> pt(dim());
  for (int i = 0; i < dim(); ++i) pt[i] = coords_[i][j];
  return pt;
}

std::vector<cplx> spectral_derivative(std::span<const cplx> samples) {
  const int n = static_cast<int>(samples.size());
  check_sample_count(n);
  std::vector<cplx> c(samples.begin(), samples.end());
  fft_pow2(c, -1);
  // c[k] corresponds to frequency k for k < N/2, k - N for k >= N/2.
  // Multiply by i*m; the Nyquist mode m = -N/2 is dropped (it is at
  // roundoff level for resolved smooth data).
  for (int k = 0; k < n; ++k) {
    int m = (k < n / 2) ? k : k - n;
    if (m == -n / 2)
      c[k] = 0.0;
    else
      c[k] *= cplx(0.0, static_cast<double>(m));
  }
  fft_pow2(c, +1);
  return c;
}

ClosedCurve ClosedCurve::spectral_derivative() const {
  std::vector<std::vector<cplx>> dcoords(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i)
    dcoords[i] = contour::spectral_derivative(coords_[i]);
  return ClosedCurve(std::move(dcoords));
}

cplx FourierData::coeff(int coordinate, int m) const {
  const auto& c = coefficients.at(coordinate);
  int idx = m + num_samples / 2;
  if (idx < 0 || idx >= num_samples)
    throw Error(ErrorCode::InvalidArgument, "fourier mode out of range");
  return c[idx];
}

std::vector<cplx> FourierData::inverse(int coordinate) const {
  const auto& c = coefficients.at(coordinate);
  const int n = num_samples;
  // Reorder back to DFT layout: frequency m lives at k = m mod N.
  std::vector<cplx> g(n);
  for (int idx = 0; idx < n; ++idx) {
    int m = idx - n / 2;
    g[(m + n) % n] = c[idx];
  }
  return dft_samples(g);
}

double FourierData::negative_mass(int coordinate) const {
  const auto& c = coefficients.at(coordinate);
  double s = 0.0;
  for (int idx = 0; idx < num_samples / 2; ++idx) s += std::norm(c[idx]);
  return std::sqrt(s);
}

FourierData fourier_coefficients(std::span<const cplx> scalar_samples) {
  const int n = static_cast<int>(scalar_samples.size());
  check_sample_count(n);
  std::vector<cplx> g = dft_coefficients(scalar_samples);
  FourierData out;
  out.num_samples = n;
  out.coefficients.resize(1);
  auto& c = out.coefficients[0];
  c.resize(n);
  for (int k = 0; k < n; ++k) {
    int m = (k < n / 2) ? k : k - n;
    c[m + n / 2] = g[k];
  }
  return out;
}

FourierData fourier_coefficients(const ClosedCurve& curve) {
  FourierData out;
  out.num_samples = curve.size();
  out.coefficients.resize(curve.dim());
  for (int i = 0; i < curve.dim(); ++i)
    out.coefficients[i] = fourier_coefficients(curve.coord(i)).coefficients[0];
  return out;
}

cplx periodic_integral(std::span<const cplx> integrand) {
  cplx s(0.0, 0.0);
  for (const auto& v : integrand) s += v;
  return s * (2.0 * kPi / static_cast<double>(integrand.size()));
}

cplx contour_integral(const ClosedCurve& c, std::span<const cplx> integrand) {
  if (static_cast<int>(integrand.size()) != c.size())
    throw Error(ErrorCode::InvalidArgument,
                "integrand sample count " + std::to_string(integrand.size()) +
                    " does not match curve sample count " + std::to_string(c.size()));
  return periodic_integral(integrand);
}

}  // namespace aplab::contour
