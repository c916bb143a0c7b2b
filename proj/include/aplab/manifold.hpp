#pragma once

#include <span>
#include <string>
#include <vector>

#include "aplab/common.hpp"

namespace aplab::manifold {

enum class Kind { Point, Circle, Torus, Sphere3 };

/// Closed parameter manifold with a sample lattice and a global tangent frame
/// whose fields have exact flows (rotations on circle factors, great circles
/// on S^3). Parameter points are represented by their ambient complex
/// coordinates: none for a point, t in S^1 subset C, (t1, t2) on the torus,
/// and a unit vector (t1, t2) in C^2 for S^3.
///
/// The S^3 lattice uses Hopf-style coordinates (phi1, phi2, eta) with
/// t = (cos(eta) e^{i phi1}, sin(eta) e^{i phi2}) and eta_l = (pi/2)(l+1)/E,
/// l = 0..E-1. The lattice includes the eta = pi/2 circle (t1 = 0) and skips
/// the chart-degenerate eta = 0 row.
struct ParamManifold {
  Kind kind = Kind::Circle;
  std::vector<int> grid;

  static ParamManifold point();
  static ParamManifold circle(int m);
  static ParamManifold torus(int m1, int m2);
  static ParamManifold sphere3(int p1, int p2, int e);

  int dim() const;        // k
  int embed_dim() const;  // complex components of the embedded parameter
  int num_points() const;

  std::vector<int> multi_index(int idx) const;
  std::vector<cplx> point_at(int idx) const;

  /// Flow of frame field j (unit speed) through p for arclength s.
  std::vector<cplx> flow(std::span<const cplx> p, int j, double s) const;

  /// Frame field value at p (ambient representation).
  std::vector<cplx> frame_field(std::span<const cplx> p, int j) const;

  /// H_{k-2}(M) = 0 flag from Theorem hypotheses; k <= 1 is vacuous,
  /// any connected closed surface violates it (H_0 != 0), S^3 satisfies it.
  bool h_km2_trivial() const;

  std::string kind_name() const;

  /// Doubles every lattice axis; used by grid-convergence checks.
  ParamManifold refined(int factor) const;
};

}  // namespace aplab::manifold
