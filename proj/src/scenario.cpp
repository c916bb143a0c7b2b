#include <fstream>

#include "aplab/workbench.hpp"

namespace aplab::workbench {

using nlohmann::json;

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> defs = {
      {"tau_rank", 1e-7},        // singular-value cut for complex/real ranks
      {"tau_moment", 1e-8},      // moment vanishing, relative to data scale
      {"tau_extension", 1e-8},   // negative Fourier mass for extensions
      {"tau_holomorphy", 1e-10}, // per-fiber family holomorphy
      {"tau_jac_neg", 1e-9},     // Jacobian per-fiber holomorphy check
      {"tau_jac_center", 1e-10}, // |J(0,t)| check
      {"tau_sigma", 1e-6},       // fiber-ratio violation threshold
      {"coincidence", 1e-6},     // coincidence tolerance, relative to scale
      {"h_param", 1e-5},         // flow step for parameter derivatives
      {"h_patch", 1e-5},         // chart/manifold step for patch frames
      {"h_dbar", 1e-4},          // dbar differencing step
      {"tau_dbar_cross", 1e-6},  // holomorphy cross-check threshold
      {"winding_tol", 1e-8},     // near-integer validation
  };
  return defs;
}

double Scenario::tol(const std::string& name) const {
  auto it = tolerances.find(name);
  if (it != tolerances.end()) return it->second;
  auto d = default_tolerances().find(name);
  if (d == default_tolerances().end())
    throw Error(ErrorCode::InvalidArgument, "unknown tolerance '" + name + "'");
  return d->second;
}

void Scenario::set_grid(int boundary, int param_axis0) {
  if (boundary > 0) {
    if (!is_pow2(boundary) || boundary < 16)
      throw Error(ErrorCode::InvalidArgument,
                  "boundary grid must be a power of two >= 16");
    grid.rings = std::max(2, grid.rings * boundary / std::max(grid.boundary, 1));
    grid.boundary = boundary;
  }
  if (param_axis0 > 0) {
    if (manifold.grid.empty())
      return;  // point manifold: nothing to scale
    int old0 = manifold.grid[0];
    auto scale_axes = [&](std::vector<int>& axes) {
      for (auto& a : axes)
        a = std::max(2, static_cast<int>(std::llround(
                            static_cast<double>(a) * param_axis0 / old0)));
    };
    scale_axes(manifold.grid);
    if (patch.present && !patch.domain.grid.empty()) scale_axes(patch.domain.grid);
  }
}

namespace {

[[noreturn]] void schema_fail(const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::SchemaError, "scenario field '" + field + "': " + msg);
}

template <typename T>
T get_required(const json& j, const std::string& field) {
  if (!j.contains(field)) schema_fail(field, "missing");
  try {
    return j.at(field).get<T>();
  } catch (const json::exception& e) {
    schema_fail(field, e.what());
  }
}

template <typename T>
T get_or(const json& j, const std::string& field, T def) {
  if (!j.contains(field)) return def;
  try {
    return j.at(field).get<T>();
  } catch (const json::exception& e) {
    schema_fail(field, e.what());
  }
}

ManifoldSpec parse_manifold(const json& j) {
  ManifoldSpec m;
  m.kind = get_required<std::string>(j, "kind");
  m.grid = get_or<std::vector<int>>(j, "grid", {});
  std::size_t want = 0;
  if (m.kind == "point") want = 0;
  else if (m.kind == "circle") want = 1;
  else if (m.kind == "torus") want = 2;
  else if (m.kind == "sphere3") want = 3;
  else schema_fail("manifold.kind", "must be point, circle, torus or sphere3");
  if (m.grid.empty()) {
    if (m.kind == "circle") m.grid = {128};
    if (m.kind == "torus") m.grid = {32, 32};
    if (m.kind == "sphere3") m.grid = {2, 2, 16};
  }
  if (m.grid.size() != want)
    schema_fail("manifold.grid", "expected " + std::to_string(want) + " axes");
  return m;
}

}  // namespace

Scenario parse_scenario(const json& j) {
  Scenario s;
  s.id = get_required<std::string>(j, "id");
  s.kind = get_required<std::string>(j, "kind");
  static const std::vector<std::string> kinds = {
      "family-verdict", "strip-problem", "cr-field", "argument-principle",
      "moment-check"};
  if (std::find(kinds.begin(), kinds.end(), s.kind) == kinds.end())
    schema_fail("kind", "unknown scenario kind '" + s.kind + "'");
  s.description = get_or<std::string>(j, "description", "");
  s.seed = get_or<long>(j, "seed", 0);

  if (j.contains("manifold")) s.manifold = parse_manifold(j.at("manifold"));

  if (j.contains("family")) {
    const json& f = j.at("family");
    s.family.present = true;
    s.family.phi = get_required<std::vector<std::string>>(f, "phi");
    s.family.n = get_required<int>(f, "n");
    s.family.d = get_required<int>(f, "d");
    if (static_cast<int>(s.family.phi.size()) != s.family.n)
      schema_fail("family.phi", "needs one expression per coordinate");
    s.family.edge_locus = get_or<std::string>(f, "edge_locus", "");
    if (f.contains("orbit")) {
      const json& o = f.at("orbit");
      s.family.orbit.mode = get_or<std::string>(o, "mode", "declared");
      if (s.family.orbit.mode != "planar" && s.family.orbit.mode != "declared")
        schema_fail("family.orbit.mode", "must be planar or declared");
      s.family.orbit.projection = get_or<int>(o, "projection", 0);
      s.family.orbit.nontrivial = get_or<bool>(o, "nontrivial", false);
      s.family.orbit.reason = get_or<std::string>(o, "reason", "");
    }
  }

  if (j.contains("function")) {
    const json& f = j.at("function");
    s.function.present = true;
    s.function.f = get_required<std::string>(f, "f");
    s.function.k_max = get_or<int>(f, "k_max", 8);
    if (s.function.k_max < 0 || s.function.k_max > 64)
      schema_fail("function.k_max", "must be in [0, 64]");
  }

  if (j.contains("patch")) {
    const json& p = j.at("patch");
    s.patch.present = true;
    s.patch.embedding = get_required<std::vector<std::string>>(p, "embedding");
    const json& d = p.at("domain");
    s.patch.domain.kind = get_required<std::string>(d, "kind");
    if (s.patch.domain.kind == "chart") {
      s.patch.domain.ranges =
          get_required<std::vector<std::array<double, 2>>>(d, "ranges");
      s.patch.domain.periodic = get_required<std::vector<bool>>(d, "periodic");
      s.patch.domain.grid = get_required<std::vector<int>>(d, "grid");
      if (s.patch.domain.ranges.size() != s.patch.domain.grid.size() ||
          s.patch.domain.periodic.size() != s.patch.domain.grid.size())
        schema_fail("patch.domain", "ranges/periodic/grid disagree");
    } else if (s.patch.domain.kind == "circle" || s.patch.domain.kind == "torus" ||
               s.patch.domain.kind == "sphere3") {
      s.patch.domain.grid = get_or<std::vector<int>>(d, "grid", {});
      json m = {{"kind", s.patch.domain.kind}};
      if (!s.patch.domain.grid.empty()) m["grid"] = s.patch.domain.grid;
      s.patch.domain.grid = parse_manifold(m).grid;
    } else {
      schema_fail("patch.domain.kind", "must be chart, circle, torus or sphere3");
    }
  }

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    s.grid.boundary = get_or<int>(g, "boundary", 256);
    s.grid.rings = get_or<int>(g, "rings", 8);
    if (g.contains("search")) {
      auto v = get_required<std::vector<int>>(g, "search");
      if (v.size() != 2) schema_fail("grid.search", "expects [nx, ny]");
      s.grid.search_nx = v[0];
      s.grid.search_ny = v[1];
    }
    if (g.contains("dbar")) {
      auto v = get_required<std::vector<int>>(g, "dbar");
      if (v.size() != 2) schema_fail("grid.dbar", "expects [nx, ny]");
      s.grid.dbar_nx = v[0];
      s.grid.dbar_ny = v[1];
    }
  }
  if (!is_pow2(s.grid.boundary) || s.grid.boundary < 16)
    schema_fail("grid.boundary", "must be a power of two >= 16");

  if (j.contains("tolerances")) {
    for (const auto& [key, val] : j.at("tolerances").items()) {
      if (default_tolerances().find(key) == default_tolerances().end())
        schema_fail("tolerances." + key, "unknown tolerance name");
      if (!val.is_number()) schema_fail("tolerances." + key, "must be a number");
      s.tolerances[key] = val.get<double>();
    }
  }

  if (j.contains("expect")) s.expect = j.at("expect");

  if (s.kind == "argument-principle") {
    s.phi_expr = get_required<std::string>(j, "phi");
    auto tv = get_required<std::vector<std::vector<double>>>(j, "targets");
    for (const auto& p : tv) {
      if (p.size() != 2) schema_fail("targets", "each target is [re, im]");
      s.targets.emplace_back(p[0], p[1]);
    }
    if (s.targets.empty()) schema_fail("targets", "at least one target required");
  } else if (s.kind == "cr-field") {
    if (!s.patch.present) schema_fail("patch", "required for cr-field scenarios");
  } else if (s.kind == "family-verdict") {
    if (!s.family.present) schema_fail("family", "required for family-verdict");
  } else if (s.kind == "strip-problem" || s.kind == "moment-check") {
    if (!s.family.present) schema_fail("family", "required for " + s.kind);
    if (!s.function.present) schema_fail("function", "required for " + s.kind);
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot open scenario file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError,
                "scenario '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_scenario(j);
}

std::string Report::to_json() const { return doc.dump(2) + "\n"; }

double quantize15(double v) {
  if (!std::isfinite(v)) return 0.0;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace aplab::workbench
