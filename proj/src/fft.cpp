#include "aplab/fft.hpp"

#include <cmath>

namespace aplab {

void fft_pow2(std::span<cplx> data, int sign) {
  const std::size_t n = data.size();
  if (!is_pow2(static_cast<int>(n)))
    throw Error(ErrorCode::InvalidArgument, "fft: size must be a power of two");

  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * kPi / static_cast<double>(len);
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        cplx u = data[i + j];
        cplx v = data[i + j + len / 2] * w;
        data[i + j] = u + v;
        data[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }

  if (sign > 0) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& x : data) x *= inv;
  }
}

std::vector<cplx> dft_coefficients(std::span<const cplx> samples) {
  std::vector<cplx> out(samples.begin(), samples.end());
  fft_pow2(out, -1);
  const double inv = 1.0 / static_cast<double>(out.size());
  for (auto& c : out) c *= inv;
  return out;
}

std::vector<cplx> dft_samples(std::span<const cplx> coefficients) {
  std::vector<cplx> out(coefficients.begin(), coefficients.end());
  fft_pow2(out, +1);
  const double n = static_cast<double>(out.size());
  for (auto& x : out) x *= n;  // undo the inverse-transform scaling
  return out;
}

}  // namespace aplab
