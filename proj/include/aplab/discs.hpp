#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aplab/argument.hpp"
#include "aplab/common.hpp"
#include "aplab/contour.hpp"
#include "aplab/manifold.hpp"

namespace aplab::discs {

/// Phi(zeta, t) in C^n; t in the manifold's ambient representation.
using FamilyEvaluator =
    std::function<void(cplx zeta, std::span<const cplx> t, std::span<cplx> out)>;

struct FamilyGridSpec {
  int boundary = 256;  // boundary angles, power of two
  int rings = 8;       // radial rings; radius(l) = l / rings
};

/// Radial-angular lattice on the closed disc: index 0 is the center, then
/// rings l = 1..rings with `boundary` angles each; ring `rings` is |zeta| = 1.
struct ZetaGrid {
  int rings = 8;
  int boundary = 256;
  int num_points() const { return 1 + rings * boundary; }
  int ring_of(int idx) const { return idx == 0 ? 0 : 1 + (idx - 1) / boundary; }
  int angle_of(int idx) const { return idx == 0 ? 0 : (idx - 1) % boundary; }
  double radius(int ring) const { return static_cast<double>(ring) / rings; }
  cplx point(int idx) const {
    if (idx == 0) return {0.0, 0.0};
    return std::polar(radius(ring_of(idx)), 2.0 * kPi * angle_of(idx) / boundary);
  }
  int index(int ring, int angle) const { return ring == 0 ? 0 : 1 + (ring - 1) * boundary + angle; }
};

/// Sampled family of analytic discs over a closed parameter manifold.
/// Per-fiber data is computed spectrally: boundary samples -> Taylor
/// coefficients -> ring evaluation; parameter derivatives by central
/// differences along the exact frame flows with a fixed step h_t (so the
/// values are independent of the lattice resolution). The difference of two
/// zeta-holomorphic fibers stays exactly holomorphic, which makes the
/// Jacobian holomorphic per fiber by construction.
class DiscFamily {
public:
  static DiscFamily build(FamilyEvaluator phi, manifold::ParamManifold m,
                          int ambient_dim, int declared_d, FamilyGridSpec grid,
                          double holo_tol = 1e-10, double h_t = 1e-5);

  int ambient_dim() const { return n_; }
  int param_dim() const { return m_.dim(); }
  int declared_d() const { return d_; }
  const manifold::ParamManifold& param() const { return m_; }
  const ZetaGrid& zeta_grid() const { return zgrid_; }
  double step() const { return h_t_; }
  double scale() const { return scale_; }
  double max_negative_mass() const { return max_neg_mass_; }
  bool h_km2_flag() const { return m_.h_km2_trivial(); }

  std::vector<cplx> eval(cplx zeta, std::span<const cplx> t) const;

  struct Fiber {
    std::vector<cplx> t;
    /// values over the zeta grid, [coord][zeta_idx]
    std::vector<std::vector<cplx>> phi;
    std::vector<std::vector<cplx>> dzeta;
    /// [field][coord][zeta_idx]
    std::vector<std::vector<std::vector<cplx>>> tfield;
    double max_dzeta_abs = 0.0;
    double boundary_diameter = 0.0;

    /// d/dpsi = i zeta d/dzeta at a grid point.
    cplx dpsi(int coord, int zeta_idx, const ZetaGrid& g) const {
      return cplx(0, 1) * g.point(zeta_idx) * dzeta[coord][zeta_idx];
    }
  };
  Fiber fiber(int t_idx) const;

private:
  FamilyEvaluator phi_;
  manifold::ParamManifold m_;
  int n_ = 0, d_ = 0;
  ZetaGrid zgrid_;
  double h_t_ = 1e-5;
  double scale_ = 1.0;
  double max_neg_mass_ = 0.0;
};

using LocusPredicate = std::function<bool(cplx zeta, std::span<const cplx> t)>;
using InteriorPredicate = std::function<bool(cplx point)>;

struct RegularityReport {
  bool t_rank_ok = true;
  int t_rank_offenders = 0;
  bool boundary_rank_ok = true;
  int boundary_deficient = 0;  // boundary points with full rank < d
  int boundary_offenders = 0;  // deficient and off the declared edge locus
  bool pass = true;
  bool strip_checked = false;  // planar conformal-family criterion
  int strip_offenders = 0;
  double strip_min_imratio = 0.0;
};

/// Checks rank d_t Phi = k at every lattice point and, on the boundary,
/// full rank d off the declared edge locus (d-1 on it). For planar families
/// also evaluates the Im(dPhi/dt / dPhi/dpsi) != 0 criterion at boundary
/// points that are interior to the covered region.
RegularityReport regularity_check(const DiscFamily& f, double tau,
                                  const LocusPredicate& edge_locus = nullptr,
                                  const InteriorPredicate& omega_interior = nullptr);

struct RankField {
  int num_t = 0;
  ZetaGrid zgrid;
  double tau = 1e-7;
  std::vector<int> rank;       // [t * zgrid.num_points() + zeta_idx]
  std::vector<double> ratio2;  // sigma_2 / sigma_1 per point
  int max_rank = 0;
  double fraction_ratio2_above(double threshold) const;
};

RankField rank_field(const DiscFamily& f, double tau);

struct JacobianField {
  int num_t = 0;
  ZetaGrid zgrid;
  std::vector<int> eta_rows;       // coordinate d-form (row selection), size d
  std::vector<int> field_indices;  // frame fields used, size d-1
  std::vector<cplx> values;        // [t][zeta_idx]
  std::vector<double> fiber_neg_mass;
  std::vector<double> fiber_max_abs;  // boundary max per fiber
  double max_center_abs = 0.0;        // max over t of |J(0,t)|
  double max_neg_mass = 0.0;
  double global_max_abs = 0.0;
  bool identically_zero = false;

  cplx value(int t_idx, int zeta_idx) const {
    return values[static_cast<std::size_t>(t_idx) * zgrid.num_points() + zeta_idx];
  }
  std::vector<cplx> boundary_of(int t_idx) const;
};

/// eta/fields empty -> chosen to maximize |J| on a coarse probe,
/// lexicographic tie-break. Requires declared d <= n for a coordinate minor.
JacobianField jacobian_field(const DiscFamily& f, std::vector<int> eta_rows = {},
                             std::vector<int> field_indices = {});

struct FiberRatioReport {
  bool vacuous = true;
  long pairs = 0;
  double max_violation = 0.0;
  double coincidence_tol = 0.0;
};

/// Checks J/conj(J) takes equal values at boundary points with coincident
/// Phi-images (fiberwise constancy of sigma = J/conj(J) on the image).
/// perturb_control multiplies J by exp(i Im t_1), which breaks the
/// constancy on families whose coincidence pairs differ in the parameter.
FiberRatioReport fiber_ratio_test(const DiscFamily& f, const JacobianField& jf,
                                  double coincidence_rel = 1e-6,
                                  double j_floor_rel = 1e-3,
                                  bool perturb_control = false);

struct FiberZeros {
  bool singular = false;
  std::vector<argument::Zero> zeros;
};

struct ZeroChain {
  int multiplicity = 1;
  std::vector<std::pair<int, cplx>> path;  // (t index, location)
};

struct TrackReport {
  std::vector<FiberZeros> fibers;
  std::vector<ZeroChain> chains;  // stitched for circle manifolds
  std::vector<int> monodromy;     // chain i continues as chain monodromy[i]
  int branch_events = 0;
  int singular_fibers = 0;
  bool conserved = true;  // per-fiber multiplicities match the zero count
};

TrackReport track_zeros(const DiscFamily& f, const JacobianField& jf);

enum class DegeneracyBranch { DimensionDrop, ZeroDegree, NotDegenerate, Unknown };
const char* to_string(DegeneracyBranch b);

struct DegeneracyResult {
  DegeneracyBranch branch = DegeneracyBranch::Unknown;
  bool degree_computed = false;
  int degree = 0;
  int boundary_rank_max = 0;
  std::string note;
};

/// Proposition-4.2 branches: DimensionDrop when the declared d < k+1 (checked
/// against boundary-rank sampling), ZeroDegree/NotDegenerate by signed
/// preimage counting when d = k+1 = 2, Unknown for d = k+1 > 2.
DegeneracyResult degeneracy_check(const DiscFamily& f);

struct OrbitSpec {
  enum class Mode { Planar, Declared };
  Mode mode = Mode::Declared;
  int projection = 0;  // coordinate whose fiber curves are searched
  bool declared_nontrivial = false;
  std::string declared_reason;
  int search_nx = 200, search_ny = 200;
};

struct OrbitResult {
  bool nontrivial = false;
  bool inconclusive = false;
  bool common_point_found = false;
  cplx common_point;
  std::string mode;
};

/// Planar mode: searches the bounding box for a point surrounded by every
/// fiber curve; the orbit is nontrivial iff no such point exists.
OrbitResult orbit_nontriviality(const DiscFamily& f, const OrbitSpec& spec);

enum class TheoremOutcome {
  TheoremPass,
  TheoremFail,
  CounterexampleConfirmed,
  HypothesisFailConclusionHolds,
  Unknown
};
const char* to_string(TheoremOutcome o);

struct TheoremVerdict {
  RegularityReport regularity;
  DegeneracyResult degeneracy;
  OrbitResult orbit;
  RankField rank;
  int d = 0;
  bool hypotheses_hold = false;
  std::vector<std::string> violated;
  bool conclusion_holds = false;
  TheoremOutcome outcome = TheoremOutcome::Unknown;
  // d == 1: the argument-principle conclusion is fiberwise constancy
  bool fiberwise_constant = false;
  double max_dzeta = 0.0;
  bool fiber_curves_trivial = false;
};

struct VerdictOptions {
  double tau_rank = 1e-7;
  OrbitSpec orbit;
  LocusPredicate edge_locus;
  InteriorPredicate omega_interior;
};

TheoremVerdict parametric_ap_verdict(const DiscFamily& f, const VerdictOptions& opts);

}  // namespace aplab::discs
