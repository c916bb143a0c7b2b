#include "aplab/manifold.hpp"

#include <cmath>

namespace aplab::manifold {

namespace {

void check_axis(int m) {
  if (m < 2)
    throw Error(ErrorCode::InvalidArgument,
                "manifold lattice axis needs at least 2 samples");
}

}  // namespace

ParamManifold ParamManifold::point() { return {Kind::Point, {}}; }

ParamManifold ParamManifold::circle(int m) {
  check_axis(m);
  return {Kind::Circle, {m}};
}

ParamManifold ParamManifold::torus(int m1, int m2) {
  check_axis(m1);
  check_axis(m2);
  return {Kind::Torus, {m1, m2}};
}

ParamManifold ParamManifold::sphere3(int p1, int p2, int e) {
  check_axis(p1);
  check_axis(p2);
  check_axis(e);
  return {Kind::Sphere3, {p1, p2, e}};
}

int ParamManifold::dim() const {
  switch (kind) {
    case Kind::Point: return 0;
    case Kind::Circle: return 1;
    case Kind::Torus: return 2;
    case Kind::Sphere3: return 3;
  }
  return 0;
}

int ParamManifold::embed_dim() const {
  switch (kind) {
    case Kind::Point: return 0;
    case Kind::Circle: return 1;
    case Kind::Torus: return 2;
    case Kind::Sphere3: return 2;
  }
  return 0;
}

int ParamManifold::num_points() const {
  int n = 1;
  for (int g : grid) n *= g;
  return n;
}

std::vector<int> ParamManifold::multi_index(int idx) const {
  std::vector<int> mi(grid.size());
  for (std::size_t a = grid.size(); a-- > 0;) {
    mi[a] = idx % grid[a];
    idx /= grid[a];
  }
  return mi;
}

std::vector<cplx> ParamManifold::point_at(int idx) const {
  std::vector<int> mi = multi_index(idx);
  switch (kind) {
    case Kind::Point:
      return {};
    case Kind::Circle:
      return {std::polar(1.0, 2.0 * kPi * mi[0] / grid[0])};
    case Kind::Torus:
      return {std::polar(1.0, 2.0 * kPi * mi[0] / grid[0]),
              std::polar(1.0, 2.0 * kPi * mi[1] / grid[1])};
    case Kind::Sphere3: {
      double phi1 = 2.0 * kPi * mi[0] / grid[0];
      double phi2 = 2.0 * kPi * mi[1] / grid[1];
      double eta = 0.5 * kPi * (mi[2] + 1) / grid[2];
      return {std::polar(std::cos(eta), phi1), std::polar(std::sin(eta), phi2)};
    }
  }
  return {};
}

std::vector<cplx> ParamManifold::frame_field(std::span<const cplx> p, int j) const {
  switch (kind) {
    case Kind::Point:
      break;
    case Kind::Circle:
      if (j == 0) return {cplx(0, 1) * p[0]};
      break;
    case Kind::Torus:
      if (j == 0) return {cplx(0, 1) * p[0], cplx(0, 0)};
      if (j == 1) return {cplx(0, 0), cplx(0, 1) * p[1]};
      break;
    case Kind::Sphere3:
      // the parallelizable frame iq, jq, kq in quaternion terms; all unit
      // and orthogonal to q over R, so great circles are exact flows
      if (j == 0) return {cplx(0, 1) * p[0], cplx(0, 1) * p[1]};
      if (j == 1) return {-std::conj(p[1]), std::conj(p[0])};
      if (j == 2) return {cplx(0, -1) * std::conj(p[1]), cplx(0, 1) * std::conj(p[0])};
      break;
  }
  throw Error(ErrorCode::InvalidArgument, "frame field index out of range");
}

std::vector<cplx> ParamManifold::flow(std::span<const cplx> p, int j, double s) const {
  switch (kind) {
    case Kind::Point:
      break;
    case Kind::Circle:
      if (j == 0) return {p[0] * std::polar(1.0, s)};
      break;
    case Kind::Torus:
      if (j == 0) return {p[0] * std::polar(1.0, s), p[1]};
      if (j == 1) return {p[0], p[1] * std::polar(1.0, s)};
      break;
    case Kind::Sphere3: {
      std::vector<cplx> t = frame_field(p, j);
      double c = std::cos(s), sn = std::sin(s);
      return {c * p[0] + sn * t[0], c * p[1] + sn * t[1]};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "flow field index out of range");
}

bool ParamManifold::h_km2_trivial() const {
  // H_{k-2}(M): vacuous for k <= 1; H_0 != 0 for any nonempty surface;
  // H_1(S^3) = 0.
  switch (kind) {
    case Kind::Point:
    case Kind::Circle: return true;
    case Kind::Torus: return false;
    case Kind::Sphere3: return true;
  }
  return true;
}

std::string ParamManifold::kind_name() const {
  switch (kind) {
    case Kind::Point: return "point";
    case Kind::Circle: return "circle";
    case Kind::Torus: return "torus";
    case Kind::Sphere3: return "sphere3";
  }
  return "?";
}

ParamManifold ParamManifold::refined(int factor) const {
  ParamManifold m = *this;
  for (auto& g : m.grid) g *= factor;
  return m;
}

}  // namespace aplab::manifold
