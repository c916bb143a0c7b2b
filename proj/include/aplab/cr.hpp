#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <span>
#include <vector>

#include "aplab/common.hpp"
#include "aplab/manifold.hpp"

namespace aplab::cr {

struct ChartSpec {
  std::vector<std::array<double, 2>> ranges;
  std::vector<bool> periodic;
  std::vector<int> grid;
};

using ChartEmbed = std::function<void(std::span<const double> u, std::span<cplx> out)>;
using ManifoldEmbed = std::function<void(std::span<const cplx> t, std::span<cplx> out)>;
using AmbientScalar = std::function<cplx(std::span<const cplx> z)>;

/// Parametrized real d-submanifold of C^n. Two flavors:
///  - chart: rectangular (possibly periodic) lattice in R^d with an embedding
///    evaluator; frames by central differences along the chart axes.
///  - manifold: lattice and frame of a ParamManifold, embedding composed on
///    top of its ambient representation; frames by central differences along
///    the exact frame flows, which avoids polar chart degeneracies.
class ManifoldPatch {
public:
  static ManifoldPatch chart(int ambient_dim, ChartSpec spec, ChartEmbed embed);
  static ManifoldPatch on_manifold(int ambient_dim, manifold::ParamManifold m,
                                   ManifoldEmbed embed);

  int dim() const { return d_; }
  int ambient_dim() const { return n_; }
  int num_points() const;
  std::vector<int> grid_sizes() const;
  std::vector<int> multi_index(int idx) const;

  /// Chart points within one cell of a non-periodic range end are excluded
  /// from classification (one-sided differences are not implemented).
  bool interior(int idx) const;

  std::vector<cplx> embed_point(int idx) const;

  /// Chart coordinates of a lattice point (chart flavor only).
  std::vector<double> chart_point(int idx) const;

  /// Columns of the embedding differential at lattice point idx, central
  /// differences with step h, orthonormalized over R. n x d complex.
  /// Throws on rank deficiency (immersion failure).
  Eigen::MatrixXcd tangent_frame(int idx, double h) const;

  /// Same columns without orthonormalization, aligned with the directions
  /// used by directional_derivatives.
  Eigen::MatrixXcd frame_columns(int idx, double h) const;

  /// Directional derivatives of an ambient scalar along the d frame
  /// directions at lattice point idx (same differencing as tangent_frame,
  /// without orthonormalization of the underlying directions).
  Eigen::VectorXcd directional_derivatives(const AmbientScalar& f, int idx,
                                           double h) const;

  /// Graph lift u -> (embed(u), f(embed(u))) into C^{n+1}.
  ManifoldPatch graph_lift(AmbientScalar f) const;

  double scale() const { return scale_; }

private:
  ManifoldPatch() = default;
  Eigen::MatrixXcd raw_frame(int idx, double h) const;

  int d_ = 0, n_ = 0;
  bool chart_flavor_ = true;
  ChartSpec chart_;
  ChartEmbed chart_embed_;
  manifold::ParamManifold mani_;
  ManifoldEmbed mani_embed_;
  double scale_ = 1.0;
};

/// c = d - rank_C(frame); rank over C by singular values with relative
/// tolerance tau.
int cr_dimension(const Eigen::MatrixXcd& frame, double tau);

enum class PointClass { TotallyReal, Generic, Complex, MaximallyComplex, CR };
const char* to_string(PointClass c);

struct CRField {
  std::vector<int> c;               // -1 at excluded lattice points
  std::vector<PointClass> cls;      // valid where c >= 0
  std::vector<double> sigma_ratio;  // sigma_{r+1}/sigma_1 below the rank cut (0 if none)
  int classified = 0;
  bool constant_c = true;
  int c_min = 0, c_max = 0;
  int bound_violations = 0;  // points violating max(0, d-n) <= c <= floor(d/2)
};

PointClass classify_point(int c, int d, int n);

CRField classify(const ManifoldPatch& p, double tau, double h);

/// Theorem-style conclusion from a rank-collapse certificate, cross-checked
/// against the directly sampled c-field of the lift. Never silently resolves
/// a disagreement.
struct CRVerdict {
  bool applicable = false;   // theorem hypotheses held and rank collapsed
  bool asserted_positive = false;
  bool direct_positive = false;
  bool consistent = true;
  std::string text;
};

CRVerdict verdict_from_rank(bool hypotheses_hold, bool rank_collapsed,
                            const CRField& direct_field);

}  // namespace aplab::cr
