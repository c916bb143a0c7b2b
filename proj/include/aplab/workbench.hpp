#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "aplab/common.hpp"
#include "json.hpp"

namespace aplab::workbench {

struct ManifoldSpec {
  std::string kind = "circle";
  std::vector<int> grid;
};

struct OrbitBlock {
  std::string mode = "declared";  // "planar" | "declared"
  int projection = 0;
  bool nontrivial = false;
  std::string reason;
};

struct FamilyBlock {
  bool present = false;
  std::vector<std::string> phi;
  int n = 0;
  int d = 0;
  std::string edge_locus;  // optional expression vanishing on the edge preimage
  OrbitBlock orbit;
};

struct FunctionBlock {
  bool present = false;
  std::string f;
  int k_max = 8;
};

struct PatchDomain {
  std::string kind = "chart";  // chart | circle | torus | sphere3
  std::vector<std::array<double, 2>> ranges;
  std::vector<bool> periodic;
  std::vector<int> grid;
};

struct PatchBlock {
  bool present = false;
  std::vector<std::string> embedding;
  PatchDomain domain;
};

struct GridBlock {
  int boundary = 256;
  int rings = 8;
  int search_nx = 200, search_ny = 200;
  int dbar_nx = 41, dbar_ny = 41;
};

struct Scenario {
  std::string id;
  std::string kind;
  std::string description;
  long seed = 0;
  ManifoldSpec manifold;
  FamilyBlock family;
  FunctionBlock function;
  PatchBlock patch;
  GridBlock grid;
  std::map<std::string, double> tolerances;
  nlohmann::ordered_json expect;

  // argument-principle kind
  std::string phi_expr;
  std::vector<cplx> targets;

  double tol(const std::string& name) const;

  /// boundary > 0 replaces the boundary count (and scales the radial rings);
  /// param_axis0 > 0 rescales every manifold/patch lattice axis by the ratio
  /// to the current first manifold axis. Search and dbar lattices are
  /// scenario constants.
  void set_grid(int boundary, int param_axis0);
};

const std::map<std::string, double>& default_tolerances();

Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario_file(const std::string& path);
Scenario builtin_scenario(const std::string& id);
std::vector<std::string> builtin_ids();

struct Report {
  nlohmann::ordered_json doc;
  bool all_passed = false;
  std::string to_json() const;
};

Report run_scenario(const Scenario& s);

/// formats: subset of {"json", "csv", "svg"}; files are written under dir
/// with the scenario id as the basename.
void emit_report(const Report& r, const std::string& dir,
                 const std::vector<std::string>& formats);

/// 15-significant-digit quantization applied to every number placed in a
/// report, so emitted JSON round-trips exactly.
double quantize15(double v);

}  // namespace aplab::workbench
