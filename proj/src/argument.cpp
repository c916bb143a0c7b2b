#include "aplab/argument.hpp"

#include <algorithm>
#include <cmath>

#include "aplab/fft.hpp"

namespace aplab::argument {

namespace {

constexpr double kOnBoundaryRadialTol = 1e-7;
constexpr double kCleanBoundaryFloor = 1e-7;  // min |g| / max |g| above which no
                                              // boundary zeros are suspected

double max_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

double min_abs(std::span<const cplx> v) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& z : v) m = std::min(m, std::abs(z));
  return m;
}

}  // namespace

DiscFunction DiscFunction::from_boundary(std::vector<cplx> samples,
                                         double holomorphy_tol) {
  const int n = static_cast<int>(samples.size());
  if (!is_pow2(n) || n < 16)
    throw Error(ErrorCode::InvalidArgument,
                "disc function needs a power-of-two sample count >= 16");
  DiscFunction f;
  f.boundary_ = std::move(samples);
  f.scale_ = max_abs(f.boundary_);

  std::vector<cplx> g = dft_coefficients(f.boundary_);
  double total = 0.0, neg = 0.0;
  for (int k = 0; k < n; ++k) {
    total += std::norm(g[k]);
    if (k >= n / 2) neg += std::norm(g[k]);  // modes m = k - N < 0
  }
  total = std::sqrt(total);
  neg = std::sqrt(neg);
  f.negative_mass_ = neg / std::max(total, 1e-300);
  if (f.negative_mass_ > holomorphy_tol)
    throw Error(ErrorCode::NumericalError,
                "boundary samples are not holomorphic disc data: relative "
                "negative Fourier mass " +
                    std::to_string(f.negative_mass_));
  f.taylor_ = std::move(g);
  // Truncate the recovered series at the roundoff floor. The dropped tail is
  // pure noise and would otherwise dominate evaluations outside |zeta| ~ 1.
  double cmax = 0.0;
  for (const auto& c : f.taylor_) cmax = std::max(cmax, std::abs(c));
  std::size_t keep = 1;
  for (std::size_t m = 0; m < f.taylor_.size(); ++m)
    if (std::abs(f.taylor_[m]) > 1e-14 * cmax) keep = m + 1;
  f.taylor_.resize(keep);
  return f;
}

DiscFunction DiscFunction::from_taylor(std::vector<cplx> coefficients,
                                       int num_samples) {
  if (!is_pow2(num_samples) || num_samples < 16)
    throw Error(ErrorCode::InvalidArgument,
                "disc function needs a power-of-two sample count >= 16");
  if (static_cast<int>(coefficients.size()) > num_samples)
    throw Error(ErrorCode::InvalidArgument,
                "from_taylor: more coefficients than samples");
  DiscFunction f;
  f.taylor_ = std::move(coefficients);
  f.taylor_.resize(num_samples, cplx(0.0, 0.0));
  std::vector<cplx> c = f.taylor_;
  f.boundary_ = dft_samples(c);
  f.scale_ = max_abs(f.boundary_);
  f.negative_mass_ = 0.0;
  return f;
}

cplx DiscFunction::eval(cplx zeta) const {
  cplx acc(0.0, 0.0);
  for (std::size_t k = taylor_.size(); k-- > 0;) acc = acc * zeta + taylor_[k];
  return acc;
}

cplx DiscFunction::deriv(cplx zeta) const {
  cplx acc(0.0, 0.0);
  for (std::size_t k = taylor_.size(); k-- > 1;)
    acc = acc * zeta + taylor_[k] * static_cast<double>(k);
  return acc;
}

std::vector<cplx> DiscFunction::circle_samples(double radius, int num) const {
  if (!is_pow2(num) || num < static_cast<int>(taylor_.size()))
    throw Error(ErrorCode::InvalidArgument,
                "circle_samples: num must be a power of two >= the Taylor length");
  std::vector<cplx> g(num, cplx(0.0, 0.0));
  double rm = 1.0;
  for (std::size_t m = 0; m < taylor_.size(); ++m) {
    g[m] = taylor_[m] * rm;
    rm *= radius;
  }
  return dft_samples(g);
}

double winding_number(const contour::ClosedCurve& c, cplx b) {
  if (c.dim() != 1)
    throw Error(ErrorCode::InvalidArgument, "winding_number expects a planar curve");
  const auto& z = c.coord(0);
  double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
  for (const auto& p : z) {
    dmin = std::min(dmin, std::abs(p - b));
    dmax = std::max(dmax, std::abs(p - b));
  }
  if (dmin <= 1e-9 * std::max({c.scale(), dmax, 1e-300}))
    throw Error(ErrorCode::NumericalError,
                "winding_number: point is too close to the curve");

  std::vector<cplx> dz = contour::spectral_derivative(z);
  std::vector<cplx> integrand(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) integrand[j] = dz[j] / (z[j] - b);
  cplx w = contour::periodic_integral(integrand) / cplx(0.0, 2.0 * kPi);
  return w.real();
}

double winding_arg_sum(std::span<const cplx> samples, cplx b) {
  const std::size_t n = samples.size();
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cplx a = samples[j] - b;
    cplx c = samples[(j + 1) % n] - b;
    total += std::arg(c / a);
  }
  return total / (2.0 * kPi);
}

int winding_crossings(std::span<const cplx> samples, cplx b) {
  const std::size_t n = samples.size();
  auto is_left = [](const cplx& p1, const cplx& p2, const cplx& q) {
    return (p2.real() - p1.real()) * (q.imag() - p1.imag()) -
           (q.real() - p1.real()) * (p2.imag() - p1.imag());
  };
  int wn = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const cplx& p1 = samples[j];
    const cplx& p2 = samples[(j + 1) % n];
    if (p1.imag() <= b.imag()) {
      if (p2.imag() > b.imag() && is_left(p1, p2, b) > 0.0) ++wn;
    } else if (p2.imag() <= b.imag() && is_left(p1, p2, b) < 0.0) {
      --wn;
    }
  }
  return wn;
}

int round_to_integer(double w, double tol) {
  double r = std::round(w);
  if (std::abs(w - r) > tol)
    throw Error(ErrorCode::NumericalError,
                "value " + std::to_string(w) + " is not within " +
                    std::to_string(tol) + " of an integer");
  return static_cast<int>(r);
}

double ZeroList::weighted_count() const {
  double s = 0.0;
  for (const auto& z : zeros) s += z.on_boundary ? 0.5 * z.multiplicity : z.multiplicity;
  return s;
}

int ZeroList::total_multiplicity() const {
  int s = 0;
  for (const auto& z : zeros) s += z.multiplicity;
  return s;
}

namespace {

/// Winding of f around 0 on the circle |zeta - center| = rho, by argument
/// summation over num samples of the Taylor evaluator.
double small_circle_winding(const DiscFunction& f, cplx center, double rho, int num) {
  double total = 0.0;
  cplx prev = f.eval(center + cplx(rho, 0.0));
  cplx first = prev;
  for (int j = 1; j <= num; ++j) {
    double a = 2.0 * kPi * j / num;
    cplx cur = (j == num) ? first : f.eval(center + rho * cplx(std::cos(a), std::sin(a)));
    total += std::arg(cur / prev);
    prev = cur;
  }
  return total / (2.0 * kPi);
}

struct RingZero {
  cplx location;
  int multiplicity;
  bool on_boundary;
};

/// Newton polish from a starting point; returns the refined location or
/// nullopt if the iteration does not settle near the start.
std::optional<cplx> newton_polish(const DiscFunction& f, cplx start,
                                  double capture_radius) {
  const double value_floor = 1e-13 * std::max(f.scale(), 1e-300);
  cplx z = start;
  for (int it = 0; it < 80; ++it) {
    cplx fz = f.eval(z);
    if (std::abs(fz) < value_floor) break;  // at a zero to machine precision
    cplx dz = f.deriv(z);
    if (std::abs(dz) < 1e-300) break;
    cplx step = fz / dz;
    z -= step;
    if (std::abs(z - start) > capture_radius) return std::nullopt;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  if (std::abs(f.eval(z)) > 1e-9 * std::max(f.scale(), 1e-300)) return std::nullopt;
  return z;
}

/// All zeros in the annulus [1 - 2e-2, 1 + 1e-9], found by scanning |f| on a
/// refined boundary grid and polishing. Multiplicities by small-circle winding.
std::vector<RingZero> detect_ring_zeros(const DiscFunction& f) {
  const int ns = std::max(2048, 8 * f.size());
  std::vector<cplx> vals = f.circle_samples(1.0, ns);

  // derivative magnitude on the same grid, for the candidate threshold
  DiscFunction fd = DiscFunction::from_taylor(
      [&] {
        std::vector<cplx> d(f.taylor().size());
        for (std::size_t m = 1; m < f.taylor().size(); ++m)
          d[m - 1] = f.taylor()[m] * static_cast<double>(m);
        return d;
      }(),
      f.size());
  std::vector<cplx> dvals = fd.circle_samples(1.0, ns);

  const double h = 2.0 * kPi / ns;
  const double scale = std::max(f.scale(), 1e-300);
  std::vector<cplx> candidates;
  for (int j = 0; j < ns; ++j) {
    double a0 = std::abs(vals[(j + ns - 1) % ns]);
    double a1 = std::abs(vals[j]);
    double a2 = std::abs(vals[(j + 1) % ns]);
    if (a1 <= a0 && a1 <= a2 &&
        a1 < std::max(5.0 * h * std::abs(dvals[j]), 1e-12 * scale)) {
      double psi = 2.0 * kPi * j / ns;
      candidates.emplace_back(std::cos(psi), std::sin(psi));
    }
  }

  std::vector<cplx> polished;
  for (const auto& c : candidates) {
    auto z = newton_polish(f, c, 0.1);
    if (!z) continue;
    bool dup = false;
    for (const auto& p : polished)
      if (std::abs(p - *z) < 1e-6) { dup = true; break; }
    if (!dup) polished.push_back(*z);
  }

  std::vector<RingZero> out;
  for (const auto& z : polished) {
    double r = std::abs(z);
    if (r > 1.0 + 1e-9 || r < 1.0 - 2e-2) continue;
    RingZero rz;
    rz.on_boundary = std::abs(r - 1.0) <= kOnBoundaryRadialTol;
    rz.location = rz.on_boundary ? z / r : z;
    double rho = 1e-3;
    for (const auto& other : polished)
      if (std::abs(other - z) > 1e-12)
        rho = std::min(rho, std::abs(other - z) / 3.0);
    double w = small_circle_winding(f, rz.location, rho, 256);
    rz.multiplicity = round_to_integer(w, 1e-6);
    if (rz.multiplicity > 0) out.push_back(rz);
  }
  std::sort(out.begin(), out.end(), [](const RingZero& a, const RingZero& b) {
    return std::arg(a.location) < std::arg(b.location);
  });
  return out;
}

}  // namespace

std::vector<Zero> detect_boundary_zeros(const DiscFunction& f) {
  std::vector<Zero> out;
  for (const auto& rz : detect_ring_zeros(f))
    if (rz.on_boundary) out.push_back({rz.location, rz.multiplicity, true});
  return out;
}

ZeroCountResult zero_count(std::span<const cplx> phi_boundary, cplx b) {
  std::vector<cplx> g(phi_boundary.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = phi_boundary[j] - b;

  const double scale = max_abs(g);
  const double data_scale = std::max({max_abs(phi_boundary), std::abs(b), 1.0});
  if (scale <= 1e-13 * data_scale)
    throw Error(ErrorCode::NumericalError,
                "zero_count: phi - b vanishes along the whole boundary "
                "(non-isolated boundary zeros)");

  ZeroCountResult res;
  if (min_abs(g) > kCleanBoundaryFloor * scale) {
    res.interior = round_to_integer(winding_arg_sum(g, cplx(0.0, 0.0)), 1e-8);
    res.count = res.interior;
    return res;
  }

  // Boundary-adjacent zeros: recover the Taylor evaluator, detect ring zeros,
  // and count the remaining interior zeros on shrunken circles.
  DiscFunction f = DiscFunction::from_boundary(std::move(g), 1e-6);
  std::vector<RingZero> ring = detect_ring_zeros(f);

  const double deltas[] = {1e-2, 5e-3, 2.5e-3};
  int core = -1, prev = -1;
  double delta_used = deltas[0];
  for (double delta : deltas) {
    double r = 1.0 - delta;
    bool clear = true;  // require the circle to stay away from detected zeros
    for (const auto& rz : ring)
      if (std::abs(std::abs(rz.location) - r) < 5e-4) clear = false;
    if (!clear) continue;
    std::vector<cplx> s = f.circle_samples(r, std::max(1024, 4 * f.size()));
    int w = round_to_integer(winding_arg_sum(s, cplx(0.0, 0.0)), 1e-6);
    if (prev >= 0 && w < prev)
      throw Error(ErrorCode::NumericalError,
                  "zero_count: shrunken-contour counts are not monotone");
    prev = w;
    core = w;
    delta_used = delta;
  }
  if (core < 0)
    throw Error(ErrorCode::NumericalError,
                "zero_count: no admissible shrunken contour (zero cluster near "
                "the boundary?)");

  res.interior = core;
  for (const auto& rz : ring) {
    if (rz.on_boundary) {
      res.boundary.push_back({rz.location, rz.multiplicity, true});
    } else if (std::abs(rz.location) >= 1.0 - delta_used) {
      // interior zero inside the thin annulus missed by the shrunken contour
      res.interior += rz.multiplicity;
    }
  }
  double half = 0.0;
  for (const auto& z : res.boundary) half += 0.5 * z.multiplicity;
  res.count = res.interior + half;
  return res;
}

double linking_number(const contour::ClosedCurve& c, const MultiPoly& P) {
  if (P.num_vars != c.dim())
    throw Error(ErrorCode::InvalidArgument,
                "polynomial variable count does not match curve dimension");
  const int n = c.size();
  std::vector<cplx> h(n);
  std::vector<cplx> pt(c.dim());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < c.dim(); ++i) pt[i] = c.coord(i)[j];
    h[j] = P.eval(pt);
  }
  if (min_abs(h) <= 1e-9 * std::max(max_abs(h), 1e-300))
    throw Error(ErrorCode::NumericalError,
                "linking_number: P vanishes on the curve");
  std::vector<cplx> dh = contour::spectral_derivative(h);
  std::vector<cplx> integrand(n);
  for (int j = 0; j < n; ++j) integrand[j] = dh[j] / h[j];
  cplx w = contour::periodic_integral(integrand) / cplx(0.0, 2.0 * kPi);
  return w.real();
}

cplx MultiPoly::eval(std::span<const cplx> z) const {
  cplx acc(0.0, 0.0);
  for (const auto& t : terms) {
    cplx v = t.coefficient;
    for (int i = 0; i < num_vars; ++i)
      for (int p = 0; p < t.powers[i]; ++p) v *= z[i];
    acc += v;
  }
  return acc;
}

int curve_degree(std::span<const cplx> image_samples, cplx reference) {
  double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
  for (const auto& p : image_samples) {
    dmin = std::min(dmin, std::abs(p - reference));
    dmax = std::max(dmax, std::abs(p - reference));
  }
  if (dmin <= 1e-12 * std::max(dmax, 1e-300))
    throw Error(ErrorCode::NumericalError,
                "curve_degree: reference point lies on the image curve");
  return round_to_integer(winding_arg_sum(image_samples, reference), 1e-8);
}

ResidueValue log_residue_pv(std::span<const cplx> j_boundary) {
  const double scale = max_abs(j_boundary);
  if (scale <= 0.0)
    throw Error(ErrorCode::NumericalError,
                "log_residue_pv: J vanishes identically on the boundary");

  DiscFunction f = DiscFunction::from_boundary(
      std::vector<cplx>(j_boundary.begin(), j_boundary.end()), 1e-6);
  const int ns = std::max(2048, 4 * f.size());
  std::vector<cplx> vals = f.circle_samples(1.0, ns);

  ResidueValue out;
  if (min_abs(vals) > kCleanBoundaryFloor * scale) {
    std::vector<cplx> ratio(ns);
    for (int j = 0; j < ns; ++j) ratio[j] = vals[j] / std::conj(vals[j]);
    double w = winding_arg_sum(ratio, cplx(0.0, 0.0));
    round_to_integer(w, 1e-6);  // validates I is (numerically) an integer
    out.value = w;
    return out;
  }

  std::vector<Zero> bz = detect_boundary_zeros(f);
  if (bz.empty())
    throw Error(ErrorCode::NumericalError,
                "log_residue_pv: near-boundary zeros are too close to the "
                "circle to be isolated numerically");
  std::vector<double> centers;
  for (const auto& z : bz) centers.push_back(std::arg(z.location));

  const double widths[] = {1e-2, 5e-3, 2.5e-3};
  double value = 0.0;
  bool have = false;
  for (double w0 : widths) {
    for (std::size_t a = 0; a < centers.size(); ++a)
      for (std::size_t b = a + 1; b < centers.size(); ++b) {
        double d = std::abs(
            std::remainder(centers[a] - centers[b], 2.0 * kPi));
        if (d < 2.5 * w0)
          throw Error(ErrorCode::NumericalError,
                      "log_residue_pv: boundary zeros are not isolated at "
                      "window width " + std::to_string(w0));
      }
    auto excluded = [&](double psi) {
      for (double c : centers)
        if (std::abs(std::remainder(psi - c, 2.0 * kPi)) < w0) return true;
      return false;
    };
    double total = 0.0;
    // principal-branch increments over kept nodes; a gap contributes the
    // principal increment across it (J/conj(J) is continuous across isolated
    // boundary zeros of real-analytic J)
    int first_kept = -1;
    cplx prev;
    double psi_first = 0.0;
    for (int j = 0; j < ns; ++j) {
      double psi = 2.0 * kPi * j / ns;
      if (excluded(psi)) continue;
      cplx r = vals[j] / std::conj(vals[j]);
      if (first_kept < 0) {
        first_kept = j;
        psi_first = psi;
        prev = r;
        continue;
      }
      total += std::arg(r / prev);
      prev = r;
    }
    if (first_kept < 0)
      throw Error(ErrorCode::NumericalError,
                  "log_residue_pv: principal-value windows cover the circle");
    (void)psi_first;
    {  // close the loop across the final gap
      cplx r0 = vals[first_kept] / std::conj(vals[first_kept]);
      total += std::arg(r0 / prev);
    }
    double iw = total / (2.0 * kPi);
    int rounded = round_to_integer(iw, 1e-3);
    if (have && rounded != static_cast<int>(std::round(value)))
      throw Error(ErrorCode::NumericalError,
                  "log_residue_pv: window extrapolation did not stabilize");
    value = iw;
    have = true;
    if (w0 == widths[2])
      for (double c : centers) out.pv_windows.emplace_back(c, w0);
  }
  out.value = value;
  return out;
}

namespace {

struct Cell {
  double cx, cy, hx, hy;  // center and half-sides
};

/// Winding of f along the rectangle boundary, adaptively sampled. Returns
/// nullopt if f dips below the floor on the boundary (zero on edge).
std::optional<int> cell_winding(const DiscFunction& f, const Cell& cell,
                                double floor_abs) {
  const cplx corners[4] = {
      cplx(cell.cx - cell.hx, cell.cy - cell.hy),
      cplx(cell.cx + cell.hx, cell.cy - cell.hy),
      cplx(cell.cx + cell.hx, cell.cy + cell.hy),
      cplx(cell.cx - cell.hx, cell.cy + cell.hy)};
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    cplx a = corners[e], b = corners[(e + 1) % 4];
    int m = 16;
    for (;;) {
      double piece = 0.0;
      bool ok = true;
      cplx prev = f.eval(a);
      if (std::abs(prev) < floor_abs) return std::nullopt;
      for (int j = 1; j <= m; ++j) {
        cplx p = a + (b - a) * (static_cast<double>(j) / m);
        cplx cur = f.eval(p);
        if (std::abs(cur) < floor_abs) return std::nullopt;
        double d = std::arg(cur / prev);
        if (std::abs(d) > 0.5 * kPi) { ok = false; break; }
        piece += d;
        prev = cur;
      }
      if (ok) { total += piece; break; }
      m *= 2;
      if (m > 4096) return std::nullopt;  // unresolvable: treat as edge hit
    }
  }
  double w = total / (2.0 * kPi);
  double r = std::round(w);
  if (std::abs(w - r) > 1e-6) return std::nullopt;
  return static_cast<int>(r);
}

cplx polish_zero(const DiscFunction& f, cplx start, int multiplicity,
                 double capture) {
  const double value_floor = 1e-13 * std::max(f.scale(), 1e-300);
  cplx z = start;
  for (int it = 0; it < 100; ++it) {
    cplx fz = f.eval(z);
    if (std::abs(fz) < value_floor) break;
    cplx dz = f.deriv(z);
    if (std::abs(dz) < 1e-300) break;
    cplx step = static_cast<double>(multiplicity) * fz / dz;
    z -= step;
    if (std::abs(z - start) > capture) return start;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

}  // namespace

ZeroList locate_zeros(const DiscFunction& phi, cplx center, double radius,
                      double cell_tol) {
  if (phi.scale() <= 0.0)
    throw Error(ErrorCode::NumericalError,
                "locate_zeros: identically-zero suspect (no boundary mass)");
  const double floor_abs = 1e-13 * phi.scale();
  const double polish_start = 1e-3;  // cell diameter from which Newton +
                                     // winding verification may finish early

  ZeroList out;
  std::vector<Cell> stack;
  stack.push_back({center.real(), center.imag(), radius * 1.02, radius * 1.02});

  int guard = 0;
  while (!stack.empty()) {
    if (++guard > 200000)
      throw Error(ErrorCode::NumericalError,
                  "locate_zeros: subdivision did not stabilize "
                  "(identically-zero suspect)");
    Cell cell = stack.back();
    stack.pop_back();

    std::optional<int> w;
    Cell probe = cell;
    for (int attempt = 0; attempt < 8 && !w; ++attempt) {
      w = cell_winding(phi, probe, floor_abs);
      if (!w) {
        // deterministic shift + enlargement: moves edges off a zero and
        // keeps the probe covering the original cell (a zero can only
        // migrate into an overlapping sibling probe; duplicates are merged)
        double a = attempt + 1.0;
        double dx = cell.hx * 1.3e-2 * a, dy = cell.hy * 0.7e-2 * a;
        probe.cx = cell.cx + dx;
        probe.cy = cell.cy + dy;
        probe.hx = cell.hx * (1.0 + 3e-3 * a) + dx;
        probe.hy = cell.hy * (1.0 + 3e-3 * a) + dy;
      }
    }
    if (!w)
      throw Error(ErrorCode::NumericalError,
                  "locate_zeros: could not isolate zeros from cell edges "
                  "(non-isolated zeros suspected)");
    if (*w == 0) continue;

    const double diam = 2.0 * std::max(probe.hx, probe.hy);
    if (diam <= polish_start) {
      // try to finish with a polished location whose multiplicity is
      // re-certified by a small-circle winding count
      cplx loc = polish_zero(phi, cplx(probe.cx, probe.cy), *w, 2.0 * diam);
      double rv = 1e-5;
      bool verified = false;
      if (std::abs(loc - cplx(probe.cx, probe.cy)) <= 2.0 * diam) {
        double wv = small_circle_winding(phi, loc, rv, 512);
        verified = std::abs(wv - *w) < 1e-6;
      }
      if (verified || diam <= cell_tol) {
        Zero z;
        z.location = loc;
        z.multiplicity = *w;
        double r = std::abs(loc);
        z.on_boundary = std::abs(r - 1.0) <= kOnBoundaryRadialTol;
        if (z.on_boundary && r > 0.0) z.location /= r;
        out.zeros.push_back(z);
        continue;
      }
    }

    // quadrisect the probed cell (children tile it exactly)
    double hx = probe.hx / 2.0, hy = probe.hy / 2.0;
    for (int sx = -1; sx <= 1; sx += 2)
      for (int sy = -1; sy <= 1; sy += 2)
        stack.push_back({probe.cx + sx * hx, probe.cy + sy * hy, hx, hy});
  }

  // merge duplicates from overlapping enlarged cells, then filter to the
  // requested region intersected with the closed disc
  std::vector<Zero> merged;
  for (const auto& z : out.zeros) {
    bool dup = false;
    for (auto& m : merged)
      if (std::abs(m.location - z.location) < 3.0 * cell_tol) {
        dup = true;
        break;
      }
    if (!dup) merged.push_back(z);
  }
  ZeroList res;
  for (const auto& z : merged) {
    if (std::abs(z.location - center) > radius * (1.0 + 1e-9) + 10.0 * cell_tol)
      continue;
    if (std::abs(z.location) > 1.0 + 1e-9) continue;
    res.zeros.push_back(z);
  }
  std::sort(res.zeros.begin(), res.zeros.end(), [](const Zero& a, const Zero& b) {
    if (a.location.real() != b.location.real())
      return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  return res;
}

}  // namespace aplab::argument
