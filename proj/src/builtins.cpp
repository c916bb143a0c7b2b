#include "aplab/workbench.hpp"

namespace aplab::workbench {

namespace {

using nlohmann::json;

json model_torus() {
  return json{
      {"id", "model_torus"},
      {"kind", "family-verdict"},
      {"description",
       "solid-torus self-map with homologically trivial fiber curves: the "
       "fiberwise argument principle forces constancy in zeta and the image "
       "collapses to the parameter curve"},
      {"manifold", {{"kind", "circle"}, {"grid", {128}}}},
      {"family",
       {{"phi", {"t/2", "t"}},
        {"n", 2},
        {"d", 1},
        {"orbit",
         {{"mode", "declared"},
          {"nontrivial", true},
          {"reason", "the orbit is the image curve itself, a generator of its "
                     "first homology"}}}}},
      {"expect",
       {{"outcome", "theorem-pass"},
        {"fiber_curves_trivial", true},
        {"fiberwise_constant", true}}},
  };
}

json example1() {
  return json{
      {"id", "example1"},
      {"kind", "family-verdict"},
      {"description",
       "graphs of constants over shrinking discs attached to the totally "
       "real cone {(z, |z|)}: degenerate family with trivial orbit; the rank "
       "does not collapse"},
      {"manifold", {{"kind", "circle"}, {"grid", {128}}}},
      {"family",
       {{"phi", {"(2 + re(t)) * zeta", "2 + re(t)"}},
        {"n", 2},
        {"d", 2},
        {"edge_locus", "im(t)"},
        {"orbit", {{"mode", "planar"}, {"projection", 0}}}}},
      {"patch",
       {{"embedding", {"u1 * exp(i * u2)", "u1"}},
        {"domain",
         {{"kind", "chart"},
          {"ranges", {{1.0, 3.0}, {0.0, 6.283185307179586}}},
          {"periodic", {false, true}},
          {"grid", {17, 64}}}}}},
      {"expect",
       {{"outcome", "counterexample-confirmed"},
        {"violated", {"orbit"}},
        {"max_rank", 2},
        {"c_constant", true},
        {"c_value", 0}}},
  };
}

json example2() {
  return json{
      {"id", "example2"},
      {"kind", "family-verdict"},
      {"description",
       "discs inscribed in the annulus on the complex curve {(z, z)}: all "
       "hypotheses hold and the complex rank collapses to 1"},
      {"manifold", {{"kind", "circle"}, {"grid", {128}}}},
      {"family",
       {{"phi", {"zeta + 2*t", "zeta + 2*t"}},
        {"n", 2},
        {"d", 2},
        {"edge_locus", "(abs(zeta + 2*t) - 1) * (abs(zeta + 2*t) - 3)"},
        {"orbit", {{"mode", "planar"}, {"projection", 0}}}}},
      {"patch",
       {{"embedding", {"u1 * exp(i * u2)", "u1 * exp(i * u2)"}},
        {"domain",
         {{"kind", "chart"},
          {"ranges", {{1.0, 3.0}, {0.0, 6.283185307179586}}},
          {"periodic", {false, true}},
          {"grid", {17, 64}}}}}},
      {"expect",
       {{"outcome", "theorem-pass"},
        {"max_rank", 1},
        {"c_constant", true},
        {"c_value", 1}}},
  };
}

json example3() {
  return json{
      {"id", "example3"},
      {"kind", "cr-field"},
      {"description",
       "Hopf-style discs through the sphere, graph of |z1|^2: the union of "
       "the discs is contractible, the orbit hypothesis fails, and the graph "
       "is totally real except on the circle z1 = 0"},
      {"manifold", {{"kind", "sphere3"}, {"grid", {2, 2, 16}}}},
      {"family",
       {{"phi", {"t1 * zeta", "t2 * zeta", "abs(t1)^2"}},
        {"n", 3},
        {"d", 3},
        {"orbit",
         {{"mode", "declared"},
          {"nontrivial", false},
          {"reason",
           "the union of the closed discs is contractible, so every 3-cycle "
           "bounds"}}}}},
      {"patch",
       {{"embedding", {"t1", "t2", "abs(t1)^2"}},
        {"domain", {{"kind", "sphere3"}, {"grid", {2, 2, 16}}}}}},
      {"expect",
       {{"outcome", "counterexample-confirmed"},
        {"violated", {"orbit"}},
        {"c_constant", false},
        {"c_min", 0},
        {"c_max", 1}}},
  };
}

json example4() {
  return json{
      {"id", "example4"},
      {"kind", "cr-field"},
      {"description",
       "tangent-line sections of the ball, graph of z1 over the sphere: all "
       "hypotheses hold and the graph is maximally complex (c = 1)"},
      {"manifold", {{"kind", "sphere3"}, {"grid", {2, 2, 16}}}},
      {"family",
       {{"phi",
         {"t1/2 - (sqrt(3)/2) * zeta * conj(t2)",
          "t2/2 + (sqrt(3)/2) * zeta * conj(t1)",
          "t1/2 - (sqrt(3)/2) * zeta * conj(t2)"}},
        {"n", 3},
        {"d", 3},
        {"orbit",
         {{"mode", "declared"},
          {"nontrivial", true},
          {"reason",
           "the half-radius sphere orbit does not bound inside the spherical "
           "layer swept by the closed discs"}}}}},
      {"patch",
       {{"embedding", {"t1", "t2", "t1"}},
        {"domain", {{"kind", "sphere3"}, {"grid", {2, 2, 16}}}}}},
      {"expect",
       {{"outcome", "theorem-pass"},
        {"c_constant", true},
        {"c_value", 1}}},
  };
}

json strip_concentric() {
  return json{
      {"id", "strip_concentric"},
      {"kind", "strip-problem"},
      {"description",
       "concentric circles |z| = 1.5 + 0.5 cos(arg t) with f = |z|: the "
       "moment condition holds on every circle but the curves surround a "
       "common point, so holomorphy cannot be certified (and indeed fails)"},
      {"manifold", {{"kind", "circle"}, {"grid", {128}}}},
      {"family",
       {{"phi", {"(1.5 + 0.5*re(t)) * zeta"}},
        {"n", 1},
        {"d", 2},
        {"orbit", {{"mode", "planar"}, {"projection", 0}}}}},
      {"function", {{"f", "abs(z)"}, {"k_max", 8}}},
      {"grid", {{"boundary", 256}, {"rings", 8}, {"search", {200, 200}}, {"dbar", {41, 41}}}},
      {"expect",
       {{"verdict", "withheld"},
        {"moments_vanish", true},
        {"common_point", true}}},
  };
}

json strip_translating() {
  return json{
      {"id", "strip_translating"},
      {"kind", "strip-problem"},
      {"description",
       "unit circles with centers sweeping [-1.5, 1.5] and f = e^z: moments "
       "vanish, no common surrounded point exists, holomorphy is certified "
       "and confirmed by the dbar oracle"},
      {"manifold", {{"kind", "circle"}, {"grid", {128}}}},
      {"family",
       {{"phi", {"1.5*re(t) + zeta"}},
        {"n", 1},
        {"d", 2},
        {"orbit", {{"mode", "planar"}, {"projection", 0}}}}},
      {"function", {{"f", "exp(z)"}, {"k_max", 8}}},
      {"grid", {{"boundary", 256}, {"rings", 8}, {"search", {200, 200}}, {"dbar", {41, 41}}}},
      {"expect",
       {{"verdict", "holomorphy-certified"},
        {"moments_vanish", true},
        {"common_point", false}}},
  };
}

json nagel_rudin() {
  return json{
      {"id", "nagel_rudin"},
      {"kind", "moment-check"},
      {"description",
       "complex lines tangent to the half-radius sphere, sections of the "
       "unit ball, with f = z1 z2: vanishing moments against monomial forms "
       "certify that f is CR on the sphere; cross-checked tangentially "
       "and on the graph lift"},
      {"manifold", {{"kind", "sphere3"}, {"grid", {2, 2, 16}}}},
      {"family",
       {{"phi",
         {"t1/2 - (sqrt(3)/2) * zeta * conj(t2)",
          "t2/2 + (sqrt(3)/2) * zeta * conj(t1)"}},
        {"n", 2},
        {"d", 3},
        {"orbit",
         {{"mode", "declared"},
          {"nontrivial", true},
          {"reason",
           "the discs avoid the half-radius ball, so the tangency-point orbit "
           "cannot bound inside their union"}}}}},
      {"function", {{"f", "z1 * z2"}, {"k_max", 3}}},
      {"patch",
       {{"embedding", {"t1", "t2"}},
        {"domain", {{"kind", "sphere3"}, {"grid", {2, 2, 16}}}}}},
      {"expect",
       {{"moments_vanish", true},
        {"f_is_cr", true}}},
  };
}

const std::vector<std::pair<std::string, json (*)()>>& registry() {
  static const std::vector<std::pair<std::string, json (*)()>> reg = {
      {"model_torus", model_torus},
      {"example1", example1},
      {"example2", example2},
      {"example3", example3},
      {"example4", example4},
      {"strip_concentric", strip_concentric},
      {"strip_translating", strip_translating},
      {"nagel_rudin", nagel_rudin},
  };
  return reg;
}

}  // namespace

std::vector<std::string> builtin_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, fn] : registry()) ids.push_back(id);
  return ids;
}

Scenario builtin_scenario(const std::string& id) {
  for (const auto& [bid, fn] : registry())
    if (bid == id) return parse_scenario(fn());
  throw Error(ErrorCode::InvalidArgument, "unknown builtin scenario '" + id + "'");
}

}  // namespace aplab::workbench
