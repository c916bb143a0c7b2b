#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "aplab/argument.hpp"
#include "aplab/cr.hpp"
#include "aplab/discs.hpp"
#include "aplab/expr.hpp"
#include "aplab/moments.hpp"
#include "aplab/workbench.hpp"

namespace aplab::workbench {

namespace {

using nlohmann::ordered_json;

ordered_json jnum(double v) { return quantize15(v); }

struct CheckList {
  ordered_json rows = ordered_json::array();
  bool all = true;

  void add(const std::string& name, bool pass, double value, double threshold,
           const std::string& cmp = "<") {
    ordered_json r;
    r["name"] = name;
    r["pass"] = pass;
    r["value"] = jnum(value);
    r["cmp"] = cmp;
    r["threshold"] = jnum(threshold);
    rows.push_back(std::move(r));
    all = all && pass;
  }

  void add_flag(const std::string& name, bool pass, const std::string& note = "") {
    ordered_json r;
    r["name"] = name;
    r["pass"] = pass;
    if (!note.empty()) r["note"] = note;
    rows.push_back(std::move(r));
    all = all && pass;
  }
};

ordered_json make_field(std::vector<std::string> axes, std::vector<int> shape,
                        const std::vector<double>& values) {
  ordered_json f;
  f["axes"] = axes;
  f["shape"] = shape;
  ordered_json vals = ordered_json::array();
  for (double v : values) vals.push_back(jnum(v));
  f["values"] = std::move(vals);
  return f;
}

manifold::ParamManifold make_manifold(const std::string& kind,
                                      const std::vector<int>& grid) {
  if (kind == "point") return manifold::ParamManifold::point();
  if (kind == "circle") return manifold::ParamManifold::circle(grid.at(0));
  if (kind == "torus") return manifold::ParamManifold::torus(grid.at(0), grid.at(1));
  if (kind == "sphere3")
    return manifold::ParamManifold::sphere3(grid.at(0), grid.at(1), grid.at(2));
  throw Error(ErrorCode::SchemaError, "unknown manifold kind '" + kind + "'");
}

std::vector<std::string> param_vars(const manifold::ParamManifold& m) {
  switch (m.kind) {
    case manifold::Kind::Point: return {};
    case manifold::Kind::Circle: return {"t"};
    case manifold::Kind::Torus:
    case manifold::Kind::Sphere3: return {"t1", "t2"};
  }
  return {};
}

std::vector<std::string> ambient_vars(int n) {
  if (n == 1) return {"z"};
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back("z" + std::to_string(i));
  return v;
}

struct FamilyExprs {
  std::vector<expr::Expression> coords;
  int embed_dim = 0;
};

std::shared_ptr<FamilyExprs> parse_family(const FamilyBlock& fb,
                                          const manifold::ParamManifold& m) {
  auto fe = std::make_shared<FamilyExprs>();
  fe->embed_dim = m.embed_dim();
  std::vector<std::string> vars = {"zeta"};
  for (const auto& v : param_vars(m)) vars.push_back(v);
  for (const auto& text : fb.phi)
    fe->coords.push_back(expr::Expression::parse(text, vars));
  return fe;
}

discs::FamilyEvaluator family_evaluator(std::shared_ptr<FamilyExprs> fe) {
  return [fe](cplx zeta, std::span<const cplx> t, std::span<cplx> out) {
    cplx vals[4];
    vals[0] = zeta;
    for (int i = 0; i < fe->embed_dim; ++i) vals[i + 1] = t[i];
    std::span<const cplx> vs(vals, 1 + fe->embed_dim);
    for (std::size_t i = 0; i < fe->coords.size(); ++i)
      out[i] = fe->coords[i].eval(vs);
  };
}

cr::AmbientScalar ambient_scalar(const std::string& text, int n) {
  auto e = std::make_shared<expr::Expression>(
      expr::Expression::parse(text, ambient_vars(n)));
  return [e](std::span<const cplx> z) { return e->eval(z); };
}

cr::ManifoldPatch build_patch(const PatchBlock& pb) {
  const int n = static_cast<int>(pb.embedding.size());
  if (pb.domain.kind == "chart") {
    const int d = static_cast<int>(pb.domain.grid.size());
    std::vector<std::string> vars;
    for (int a = 1; a <= d; ++a) vars.push_back("u" + std::to_string(a));
    auto exprs = std::make_shared<std::vector<expr::Expression>>();
    for (const auto& text : pb.embedding)
      exprs->push_back(expr::Expression::parse(text, vars));
    cr::ChartSpec spec;
    spec.ranges = pb.domain.ranges;
    spec.periodic.assign(pb.domain.periodic.begin(), pb.domain.periodic.end());
    spec.grid = pb.domain.grid;
    return cr::ManifoldPatch::chart(
        n, std::move(spec),
        [exprs, d](std::span<const double> u, std::span<cplx> out) {
          cplx vals[8];
          for (int a = 0; a < d; ++a) vals[a] = cplx(u[a], 0.0);
          std::span<const cplx> vs(vals, d);
          for (std::size_t i = 0; i < exprs->size(); ++i)
            out[i] = (*exprs)[i].eval(vs);
        });
  }
  auto m = make_manifold(pb.domain.kind, pb.domain.grid);
  auto vars = param_vars(m);
  auto exprs = std::make_shared<std::vector<expr::Expression>>();
  for (const auto& text : pb.embedding)
    exprs->push_back(expr::Expression::parse(text, vars));
  return cr::ManifoldPatch::on_manifold(
      n, std::move(m), [exprs](std::span<const cplx> t, std::span<cplx> out) {
        for (std::size_t i = 0; i < exprs->size(); ++i)
          out[i] = (*exprs)[i].eval(t);
      });
}

discs::LocusPredicate edge_locus_predicate(const std::string& text,
                                           const manifold::ParamManifold& m,
                                           const discs::DiscFamily& fam) {
  if (text.empty()) return nullptr;
  std::vector<std::string> vars = {"zeta"};
  for (const auto& v : param_vars(m)) vars.push_back(v);
  auto e = std::make_shared<expr::Expression>(expr::Expression::parse(text, vars));
  int embed = m.embed_dim();

  // calibrate the expression scale on a coarse boundary probe
  double scale = 0.0;
  int stride = std::max(1, m.num_points() / 8);
  for (int ti = 0; ti < m.num_points(); ti += stride) {
    auto t = m.point_at(ti);
    for (int a = 0; a < 16; ++a) {
      cplx vals[4];
      vals[0] = std::polar(1.0, 2.0 * kPi * a / 16);
      for (int i = 0; i < embed; ++i) vals[i + 1] = t[i];
      scale = std::max(scale, std::abs(e->eval(std::span<const cplx>(vals, 1 + embed))));
    }
  }
  (void)fam;
  double tol = 1e-6 * std::max(scale, 1e-300);
  return [e, embed, tol](cplx zeta, std::span<const cplx> t) {
    cplx vals[4];
    vals[0] = zeta;
    for (int i = 0; i < embed; ++i) vals[i + 1] = t[i];
    return std::abs(e->eval(std::span<const cplx>(vals, 1 + embed))) < tol;
  };
}

ordered_json scenario_header(const Scenario& s) {
  ordered_json h;
  h["id"] = s.id;
  h["kind"] = s.kind;
  if (!s.description.empty()) h["description"] = s.description;
  h["seed"] = s.seed;
  ordered_json g;
  g["boundary"] = s.grid.boundary;
  g["rings"] = s.grid.rings;
  g["search"] = {s.grid.search_nx, s.grid.search_ny};
  g["dbar"] = {s.grid.dbar_nx, s.grid.dbar_ny};
  h["grid"] = std::move(g);
  if (!s.manifold.grid.empty() || s.manifold.kind == "point") {
    ordered_json m;
    m["kind"] = s.manifold.kind;
    m["grid"] = s.manifold.grid;
    h["manifold"] = std::move(m);
  }
  ordered_json tols;
  for (const auto& [name, def] : default_tolerances()) tols[name] = jnum(s.tol(name));
  h["tolerances"] = std::move(tols);
  return h;
}

/// Shared family analysis: theorem verdict, Jacobian block, fields,
/// expectation checks. Returns the verdict for callers that need it.
discs::TheoremVerdict analyze_family(const Scenario& s, const discs::DiscFamily& fam,
                                     CheckList& checks, ordered_json& verdicts,
                                     ordered_json& scalars, ordered_json& details,
                                     ordered_json& fields,
                                     const discs::InteriorPredicate& omega_interior,
                                     const discs::LocusPredicate& locus_override) {
  discs::VerdictOptions opts;
  opts.tau_rank = s.tol("tau_rank");
  if (s.family.orbit.mode == "planar") {
    opts.orbit.mode = discs::OrbitSpec::Mode::Planar;
    opts.orbit.projection = s.family.orbit.projection;
  } else {
    opts.orbit.mode = discs::OrbitSpec::Mode::Declared;
    opts.orbit.declared_nontrivial = s.family.orbit.nontrivial;
    opts.orbit.declared_reason = s.family.orbit.reason;
  }
  opts.orbit.search_nx = s.grid.search_nx;
  opts.orbit.search_ny = s.grid.search_ny;
  opts.edge_locus = locus_override
                        ? locus_override
                        : edge_locus_predicate(s.family.edge_locus, fam.param(), fam);
  opts.omega_interior = omega_interior;

  auto v = discs::parametric_ap_verdict(fam, opts);

  ordered_json hyp;
  hyp["regularity"] = v.regularity.pass;
  hyp["degeneracy"] = to_string(v.degeneracy.branch);
  hyp["orbit_nontrivial"] = v.orbit.nontrivial;
  hyp["orbit_mode"] = v.orbit.mode;
  hyp["h_km2_trivial"] = fam.h_km2_flag();
  hyp["all_hold"] = v.hypotheses_hold;
  verdicts["hypotheses"] = std::move(hyp);
  verdicts["theorem_outcome"] = to_string(v.outcome);
  verdicts["violated"] = v.violated;
  verdicts["conclusion_holds"] = v.conclusion_holds;
  verdicts["rank_collapsed"] = (v.rank.max_rank < v.d);
  verdicts["rank_dense_not_collapsed"] =
      (v.rank.fraction_ratio2_above(1e-2) > 0.5);
  if (v.fiber_curves_trivial) {
    ordered_json collapse;
    collapse["fiber_curves_trivial"] = true;
    collapse["fiberwise_constant"] = v.fiberwise_constant;
    collapse["implication"] =
        "fiber curves homologically trivial => Phi constant in zeta => image "
        "at most parameter-dimensional";
    verdicts["collapse"] = std::move(collapse);
  }

  scalars["max_negative_mass"] = jnum(fam.max_negative_mass());
  scalars["max_dzeta"] = jnum(v.max_dzeta);
  scalars["rank_max"] = v.rank.max_rank;
  scalars["declared_d"] = v.d;
  if (v.degeneracy.degree_computed) scalars["brouwer_degree"] = v.degeneracy.degree;
  if (v.orbit.common_point_found) {
    scalars["common_point_re"] = jnum(v.orbit.common_point.real());
    scalars["common_point_im"] = jnum(v.orbit.common_point.imag());
  }
  double ratio2_max = 0.0;
  for (double r : v.rank.ratio2) ratio2_max = std::max(ratio2_max, r);
  if (ratio2_max < 1e-8) scalars["rank_ratio2_max"] = jnum(ratio2_max);

  details["family_scale"] = jnum(fam.scale());
  details["rank_ratio2_max"] = jnum(ratio2_max);
  details["rank_ratio2_fraction_above_1e-2"] =
      jnum(v.rank.fraction_ratio2_above(1e-2));
  details["boundary_rank_max"] = v.degeneracy.boundary_rank_max;
  details["regularity"] = {
      {"t_rank_offenders", v.regularity.t_rank_offenders},
      {"boundary_deficient", v.regularity.boundary_deficient},
      {"boundary_offenders", v.regularity.boundary_offenders},
  };
  if (v.regularity.strip_checked) {
    details["strip_criterion"] = {
        {"offenders", v.regularity.strip_offenders},
        {"min_im_ratio", jnum(v.regularity.strip_min_imratio)},
    };
  }
  if (!v.degeneracy.note.empty()) details["degeneracy_note"] = v.degeneracy.note;
  if (v.orbit.inconclusive) details["orbit_inconclusive"] = true;
  if (!s.family.orbit.reason.empty()) details["orbit_reason"] = s.family.orbit.reason;

  checks.add("family-holomorphy", fam.max_negative_mass() < s.tol("tau_holomorphy"),
             fam.max_negative_mass(), s.tol("tau_holomorphy"));
  checks.add_flag("theorem-implication",
                  v.outcome != discs::TheoremOutcome::TheoremFail,
                  std::string("outcome: ") + to_string(v.outcome));

  // rank field on the boundary ring, for the report fields
  {
    const auto& g = v.rank.zgrid;
    std::vector<double> slice;
    slice.reserve(static_cast<std::size_t>(v.rank.num_t) * g.boundary);
    for (int ti = 0; ti < v.rank.num_t; ++ti)
      for (int a = 0; a < g.boundary; ++a)
        slice.push_back(
            v.rank.rank[static_cast<std::size_t>(ti) * g.num_points() +
                        g.index(g.rings, a)]);
    fields["rank_boundary"] =
        make_field({"t", "psi"}, {v.rank.num_t, g.boundary}, slice);
  }

  // Jacobian block (coordinate minors exist only for d <= n)
  if (v.d <= fam.ambient_dim()) {
    auto jf = discs::jacobian_field(fam);
    ordered_json jac;
    jac["eta_rows"] = jf.eta_rows;
    jac["fields_used"] = jf.field_indices;
    jac["identically_zero"] = jf.identically_zero;
    scalars["jacobian_center_max"] = jnum(jf.max_center_abs);
    scalars["jacobian_neg_mass_max"] = jnum(jf.max_neg_mass);
    details["jacobian_global_max"] = jnum(jf.global_max_abs);
    checks.add("jacobian-center-zero", jf.max_center_abs < s.tol("tau_jac_center"),
               jf.max_center_abs, s.tol("tau_jac_center"));
    checks.add("jacobian-holomorphy", jf.max_neg_mass < s.tol("tau_jac_neg"),
               jf.max_neg_mass, s.tol("tau_jac_neg"));

    if (!jf.identically_zero) {
      auto fr = discs::fiber_ratio_test(fam, jf, s.tol("coincidence"));
      ordered_json frj;
      frj["vacuous"] = fr.vacuous;
      frj["pairs"] = fr.pairs;
      frj["max_violation"] = jnum(fr.max_violation);
      if (!fr.vacuous) {
        scalars["fiber_ratio_max_violation"] = jnum(fr.max_violation);
        checks.add("fiber-ratio", fr.max_violation < s.tol("tau_sigma"),
                   fr.max_violation, s.tol("tau_sigma"));
        auto control = discs::fiber_ratio_test(fam, jf, s.tol("coincidence"),
                                               1e-3, /*perturb_control=*/true);
        frj["control_violation"] = jnum(control.max_violation);
        checks.add("fiber-ratio-perturbed-control", control.max_violation > 1e-2,
                   control.max_violation, 1e-2, ">");
      }
      jac["fiber_ratio"] = std::move(frj);

      auto tr = discs::track_zeros(fam, jf);
      ordered_json trj;
      trj["singular_fibers"] = tr.singular_fibers;
      trj["chains"] = static_cast<int>(tr.chains.size());
      trj["branch_events"] = tr.branch_events;
      if (!tr.monodromy.empty()) trj["monodromy"] = tr.monodromy;
      ordered_json chainsj = ordered_json::array();
      for (const auto& c : tr.chains) {
        ordered_json cj;
        cj["multiplicity"] = c.multiplicity;
        cj["length"] = static_cast<int>(c.path.size());
        if (!c.path.empty()) {
          cj["start_re"] = jnum(c.path.front().second.real());
          cj["start_im"] = jnum(c.path.front().second.imag());
        }
        chainsj.push_back(std::move(cj));
      }
      trj["chain_summaries"] = std::move(chainsj);
      jac["zero_tracking"] = std::move(trj);
      checks.add_flag("zero-tracking-conservation", tr.conserved);
    }
    details["jacobian"] = std::move(jac);

    std::vector<double> absj;
    const auto& g = jf.zgrid;
    absj.reserve(static_cast<std::size_t>(jf.num_t) * g.boundary);
    for (int ti = 0; ti < jf.num_t; ++ti)
      for (int a = 0; a < g.boundary; ++a)
        absj.push_back(std::abs(jf.value(ti, g.index(g.rings, a))));
    fields["jacobian_abs_boundary"] =
        make_field({"t", "psi"}, {jf.num_t, g.boundary}, absj);
  }

  // expectation checks
  if (s.expect.is_object()) {
    if (s.expect.contains("outcome"))
      checks.add_flag("expected-outcome",
                      s.expect["outcome"].get<std::string>() ==
                          to_string(v.outcome),
                      "expected " + s.expect["outcome"].get<std::string>() +
                          ", got " + to_string(v.outcome));
    if (s.expect.contains("violated")) {
      auto want = s.expect["violated"].get<std::vector<std::string>>();
      bool subset = true;
      for (const auto& w : want)
        if (std::find(v.violated.begin(), v.violated.end(), w) == v.violated.end())
          subset = false;
      checks.add_flag("expected-violations", subset);
    }
    if (s.expect.contains("max_rank"))
      checks.add_flag("expected-max-rank",
                      s.expect["max_rank"].get<int>() == v.rank.max_rank);
    if (s.expect.contains("fiber_curves_trivial"))
      checks.add_flag("expected-fiber-triviality",
                      s.expect["fiber_curves_trivial"].get<bool>() ==
                          v.fiber_curves_trivial);
    if (s.expect.contains("fiberwise_constant"))
      checks.add_flag("expected-fiber-constancy",
                      s.expect["fiberwise_constant"].get<bool>() ==
                          v.fiberwise_constant);
  }
  return v;
}

cr::CRField analyze_patch(const Scenario& s, const cr::ManifoldPatch& patch,
                          const std::string& prefix, CheckList& checks,
                          ordered_json& verdicts, ordered_json& scalars,
                          ordered_json& details, ordered_json& fields) {
  auto field = cr::classify(patch, s.tol("tau_rank"), s.tol("h_patch"));

  verdicts[prefix + "_c_constant"] = field.constant_c;
  scalars[prefix + "_c_min"] = field.c_min;
  scalars[prefix + "_c_max"] = field.c_max;
  scalars[prefix + "_bound_violations"] = field.bound_violations;
  details[prefix + "_classified_points"] = field.classified;

  std::map<std::string, int> class_counts;
  for (std::size_t i = 0; i < field.c.size(); ++i)
    if (field.c[i] >= 0) ++class_counts[cr::to_string(field.cls[i])];
  ordered_json cc;
  for (const auto& [name, count] : class_counts) cc[name] = count;
  details[prefix + "_classes"] = std::move(cc);

  checks.add_flag(prefix + "-dimension-bounds", field.bound_violations == 0,
                  "max(0, d-n) <= c <= floor(d/2) pointwise");

  std::vector<double> cvals(field.c.begin(), field.c.end());
  fields[prefix + "_c"] = make_field({"lattice"}, patch.grid_sizes(), cvals);

  if (s.expect.is_object()) {
    if (s.expect.contains("c_constant"))
      checks.add_flag("expected-" + prefix + "-c-constant",
                      s.expect["c_constant"].get<bool>() == field.constant_c);
    if (s.expect.contains("c_value"))
      checks.add_flag("expected-" + prefix + "-c-value",
                      field.constant_c &&
                          s.expect["c_value"].get<int>() == field.c_min);
    if (s.expect.contains("c_min"))
      checks.add_flag("expected-" + prefix + "-c-min",
                      s.expect["c_min"].get<int>() == field.c_min);
    if (s.expect.contains("c_max"))
      checks.add_flag("expected-" + prefix + "-c-max",
                      s.expect["c_max"].get<int>() == field.c_max);
  }
  return field;
}

Report assemble(const Scenario& s, ordered_json verdicts, ordered_json scalars,
                CheckList& checks, ordered_json details, ordered_json fields) {
  Report rep;
  rep.doc["aplab"] = {{"version", "0.1.0"}, {"schema", "aplab/report-v1"}};
  rep.doc["scenario"] = scenario_header(s);
  verdicts["overall"] = checks.all ? "pass" : "fail";
  rep.doc["verdicts"] = std::move(verdicts);
  rep.doc["scalars"] = std::move(scalars);
  rep.doc["checks"] = checks.rows;
  rep.doc["details"] = std::move(details);
  rep.doc["fields"] = std::move(fields);
  rep.all_passed = checks.all;
  return rep;
}

// ---------------------------------------------------------------- kinds --

Report run_family_verdict(const Scenario& s) {
  auto m = make_manifold(s.manifold.kind, s.manifold.grid);
  auto fe = parse_family(s.family, m);
  auto fam = discs::DiscFamily::build(
      family_evaluator(fe), m, s.family.n, s.family.d,
      {s.grid.boundary, s.grid.rings}, s.tol("tau_holomorphy"), s.tol("h_param"));

  CheckList checks;
  ordered_json verdicts, scalars, details, fields;
  analyze_family(s, fam, checks, verdicts, scalars, details, fields, nullptr,
                 nullptr);
  if (s.patch.present) {
    auto patch = build_patch(s.patch);
    analyze_patch(s, patch, "cr", checks, verdicts, scalars, details, fields);
  }
  return assemble(s, std::move(verdicts), std::move(scalars), checks,
                  std::move(details), std::move(fields));
}

Report run_cr_field(const Scenario& s) {
  CheckList checks;
  ordered_json verdicts, scalars, details, fields;

  auto patch = build_patch(s.patch);
  auto field =
      analyze_patch(s, patch, "cr", checks, verdicts, scalars, details, fields);

  if (s.family.present) {
    auto m = make_manifold(s.manifold.kind, s.manifold.grid);
    auto fe = parse_family(s.family, m);
    auto fam = discs::DiscFamily::build(
        family_evaluator(fe), m, s.family.n, s.family.d,
        {s.grid.boundary, s.grid.rings}, s.tol("tau_holomorphy"), s.tol("h_param"));
    auto v = analyze_family(s, fam, checks, verdicts, scalars, details, fields,
                            nullptr, nullptr);
    // Theorem conclusion vs the directly sampled c-field
    auto cv = cr::verdict_from_rank(v.hypotheses_hold, v.rank.max_rank < v.d, field);
    verdicts["cr_from_rank"] = cv.text;
    checks.add_flag("cr-rank-crosscheck", cv.consistent, cv.text);
  }
  return assemble(s, std::move(verdicts), std::move(scalars), checks,
                  std::move(details), std::move(fields));
}

/// Graph-lift evaluator: (base(zeta, t), F_t(zeta)) where F_t is the
/// holomorphic extension of f from the fiber boundary, cached per parameter.
discs::FamilyEvaluator lift_evaluator(std::shared_ptr<FamilyExprs> base,
                                      cr::AmbientScalar f, int base_n, int nb,
                                      double tau_e) {
  struct Cache {
    std::map<std::vector<std::pair<double, double>>, std::vector<cplx>> taylor;
    double worst_negmass = 0.0;
  };
  auto cache = std::make_shared<Cache>();
  auto base_eval = family_evaluator(base);

  return [base_eval, f, base_n, nb, tau_e, cache](
             cplx zeta, std::span<const cplx> t, std::span<cplx> out) {
    std::vector<cplx> bz(base_n);
    base_eval(zeta, t, bz);
    for (int i = 0; i < base_n; ++i) out[i] = bz[i];

    std::vector<std::pair<double, double>> key;
    for (const auto& c : t) key.emplace_back(c.real(), c.imag());
    auto it = cache->taylor.find(key);
    if (it == cache->taylor.end()) {
      std::vector<cplx> samples(nb);
      std::vector<cplx> pt(base_n);
      for (int j = 0; j < nb; ++j) {
        base_eval(std::polar(1.0, 2.0 * kPi * j / nb), t, pt);
        samples[j] = f(pt);
      }
      auto ext = moments::disc_extension(samples, tau_e);
      cache->worst_negmass = std::max(cache->worst_negmass, ext.negative_mass);
      it = cache->taylor.emplace(std::move(key), std::move(ext.taylor)).first;
    }
    const auto& tay = it->second;
    cplx acc(0, 0);
    for (std::size_t k = tay.size(); k-- > 0;) acc = acc * zeta + tay[k];
    out[base_n] = acc;
  };
}

Report run_strip(const Scenario& s) {
  if (s.family.n != 1)
    throw Error(ErrorCode::SchemaError,
                "strip-problem scenarios need a planar family (n = 1)");
  CheckList checks;
  ordered_json verdicts, scalars, details, fields;

  auto m = make_manifold(s.manifold.kind, s.manifold.grid);
  auto fe = parse_family(s.family, m);
  auto base_eval = family_evaluator(fe);
  auto f = ambient_scalar(s.function.f, 1);
  const int nb = s.grid.boundary;
  const int nt = m.num_points();

  // per-fiber moments and extensions
  double moments_rel_max = 0.0, negmass_max = 0.0, mismatch_max = 0.0;
  bool all_vanish = true, all_extend = true, all_agree = true;
  std::vector<std::vector<cplx>> curves(nt);
  std::vector<double> moment_field;
  moment_field.reserve(static_cast<std::size_t>(nt) * (s.function.k_max + 1));
  for (int ti = 0; ti < nt; ++ti) {
    auto t = m.point_at(ti);
    std::vector<cplx> pt(1);
    curves[ti].resize(nb);
    std::vector<cplx> fsamples(nb);
    for (int j = 0; j < nb; ++j) {
      base_eval(std::polar(1.0, 2.0 * kPi * j / nb), t, pt);
      curves[ti][j] = pt[0];
      fsamples[j] = f(std::span<const cplx>(&curves[ti][j], 1));
    }
    contour::ClosedCurve curve(std::vector<std::vector<cplx>>{curves[ti]});
    auto eq = moments::moments_equiv_extension(curve, fsamples, s.function.k_max,
                                               s.tol("tau_moment"),
                                               s.tol("tau_extension"));
    moments_rel_max =
        std::max(moments_rel_max, eq.moments.max_abs / eq.moments.scale);
    negmass_max = std::max(negmass_max, eq.extension.negative_mass);
    mismatch_max = std::max(mismatch_max, eq.extension.boundary_mismatch);
    all_vanish = all_vanish && eq.moments.vanish;
    all_extend = all_extend && eq.extension.extends;
    all_agree = all_agree && eq.agree;
    for (const auto& mval : eq.moments.moments)
      moment_field.push_back(std::abs(mval));
  }
  scalars["moments_rel_max"] = jnum(moments_rel_max);
  scalars["extension_negmass_max"] = jnum(negmass_max);
  scalars["extension_mismatch_max"] = jnum(mismatch_max);
  verdicts["moments_vanish"] = all_vanish;
  verdicts["extensions_exist"] = all_extend;
  checks.add_flag("moments-equiv-extension", all_agree,
                  "per-fiber agreement of the two conditions");
  fields["moment_abs"] =
      make_field({"t", "k"}, {nt, s.function.k_max + 1}, moment_field);

  // covered-region membership from the fiber curves
  auto curves_ptr = std::make_shared<std::vector<std::vector<cplx>>>(curves);
  discs::InteriorPredicate omega_interior = [curves_ptr](cplx z) {
    for (const auto& c : *curves_ptr)
      if (argument::winding_crossings(c, z) >= 1) return true;
    return false;
  };
  discs::LocusPredicate lift_edge = nullptr;

  // lift through the per-fiber extensions and run the family machinery
  bool lift_built = false;
  std::optional<discs::TheoremVerdict> lifted;
  if (all_extend) {
    auto lift = lift_evaluator(fe, f, 1, nb, s.tol("tau_extension"));
    auto base_eval2 = base_eval;
    lift_edge = [base_eval2, omega_interior](cplx zeta, std::span<const cplx> t) {
      std::vector<cplx> pt(1);
      base_eval2(zeta, t, pt);
      return !omega_interior(pt[0]);
    };
    auto fam = discs::DiscFamily::build(lift, m, 2, s.family.d,
                                        {nb, s.grid.rings},
                                        s.tol("tau_holomorphy"), s.tol("h_param"));
    lifted = analyze_family(s, fam, checks, verdicts, scalars, details, fields,
                            omega_interior, lift_edge);
    lift_built = true;
  } else {
    details["lift"] = "skipped: some fibers do not extend";
  }
  verdicts["lift_built"] = lift_built;

  // independent dbar oracle over the covered region
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& c : curves)
    for (const auto& z : c) {
      x0 = std::min(x0, z.real());
      x1 = std::max(x1, z.real());
      y0 = std::min(y0, z.imag());
      y1 = std::max(y1, z.imag());
    }
  moments::PlanarGrid grid;
  grid.nx = s.grid.dbar_nx;
  grid.ny = s.grid.dbar_ny;
  grid.x0 = x0;
  grid.y0 = y0;
  grid.hx = (x1 - x0) / (grid.nx - 1);
  grid.hy = (y1 - y0) / (grid.ny - 1);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(grid.nx) * grid.ny, 0);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (omega_interior(grid.point(i, j))) mask[grid.index(i, j)] = 1;
  auto f1 = [&f](cplx z) { return f(std::span<const cplx>(&z, 1)); };
  auto dbar = moments::dbar_residual_planar(grid, f1, mask, s.tol("h_dbar"));
  scalars["dbar_max_residual"] = jnum(dbar.max_value);
  fields["dbar_residual"] =
      make_field({"iy", "ix"}, {grid.ny, grid.nx}, dbar.values);

  // the strip verdict (Morera-type certification)
  std::string verdict;
  bool common = lifted && lifted->orbit.common_point_found;
  bool inconclusive = lifted && lifted->orbit.inconclusive;
  if (!all_vanish)
    verdict = "not-certified (moment condition fails on some fiber)";
  else if (!lift_built)
    verdict = "not-certified (no holomorphic extension on some fiber)";
  else if (common)
    verdict = "withheld";
  else if (inconclusive)
    verdict = "inconclusive";
  else
    verdict = "holomorphy-certified";
  verdicts["strip_verdict"] = verdict;

  if (verdict == "holomorphy-certified") {
    checks.add("dbar-crosscheck", dbar.max_value < s.tol("tau_dbar_cross"),
               dbar.max_value, s.tol("tau_dbar_cross"));
    checks.add_flag("rank-collapse-crosscheck",
                    lifted && lifted->rank.max_rank < lifted->d,
                    "certified holomorphy must collapse the lifted rank");
  }

  if (s.expect.is_object()) {
    if (s.expect.contains("verdict"))
      checks.add_flag("expected-verdict",
                      s.expect["verdict"].get<std::string>() == verdict,
                      "got " + verdict);
    if (s.expect.contains("moments_vanish"))
      checks.add_flag("expected-moments",
                      s.expect["moments_vanish"].get<bool>() == all_vanish);
    if (s.expect.contains("common_point"))
      checks.add_flag("expected-common-point",
                      s.expect["common_point"].get<bool>() == common);
  }
  return assemble(s, std::move(verdicts), std::move(scalars), checks,
                  std::move(details), std::move(fields));
}

Report run_moment_check(const Scenario& s) {
  CheckList checks;
  ordered_json verdicts, scalars, details, fields;

  auto m = make_manifold(s.manifold.kind, s.manifold.grid);
  auto fe = parse_family(s.family, m);
  auto base_eval = family_evaluator(fe);
  const int n = s.family.n;
  auto f = ambient_scalar(s.function.f, n);
  const int nb = s.grid.boundary;
  const int nt = m.num_points();
  auto forms = moments::monomial_forms(n, s.function.k_max);

  double rel_max = 0.0;
  bool all_vanish = true;
  double negmass_max = 0.0;
  bool all_extend = true;
  std::vector<double> moment_field;
  for (int ti = 0; ti < nt; ++ti) {
    auto t = m.point_at(ti);
    std::vector<std::vector<cplx>> coords(n, std::vector<cplx>(nb));
    std::vector<cplx> fsamples(nb);
    std::vector<cplx> pt(n);
    for (int j = 0; j < nb; ++j) {
      base_eval(std::polar(1.0, 2.0 * kPi * j / nb), t, pt);
      for (int i = 0; i < n; ++i) coords[i][j] = pt[i];
      fsamples[j] = f(pt);
    }
    contour::ClosedCurve curve(coords);
    auto rep = moments::complex_moments(curve, fsamples, forms, s.tol("tau_moment"));
    rel_max = std::max(rel_max, rep.max_abs / rep.scale);
    all_vanish = all_vanish && rep.vanish;
    for (const auto& mv : rep.moments) moment_field.push_back(std::abs(mv));

    auto ext = moments::disc_extension(fsamples, s.tol("tau_extension"));
    negmass_max = std::max(negmass_max, ext.negative_mass);
    all_extend = all_extend && ext.extends;
  }
  scalars["moments_rel_max"] = jnum(rel_max);
  scalars["extension_negmass_max"] = jnum(negmass_max);
  verdicts["moments_vanish"] = all_vanish;
  verdicts["extensions_exist"] = all_extend;
  details["num_forms"] = static_cast<int>(forms.size());
  fields["moment_abs"] =
      make_field({"t", "form"}, {nt, static_cast<int>(forms.size())}, moment_field);

  // base patch: CR structure of the covered manifold, plus the tangential
  // CR residual of f as the independent oracle
  bool f_is_cr = false;
  if (s.patch.present) {
    auto patch = build_patch(s.patch);
    analyze_patch(s, patch, "base", checks, verdicts, scalars, details, fields);
    auto tang = moments::dbar_residual_tangential(patch, f, s.tol("tau_rank"),
                                                  s.tol("h_patch"));
    scalars["tangential_residual_max"] = jnum(tang.max_value);
    f_is_cr = tang.max_value < s.tol("tau_dbar_cross");
    verdicts["f_is_cr_by_oracle"] = f_is_cr;
    if (all_vanish)
      checks.add("tangential-crosscheck", f_is_cr, tang.max_value,
                 s.tol("tau_dbar_cross"));

    // lift of f over the base manifold
    auto lift_patch = patch.graph_lift(f);
    analyze_patch(s, lift_patch, "lift", checks, verdicts, scalars, details,
                  fields);
  }

  // lifted family through the per-fiber extensions
  if (all_extend) {
    auto lift = lift_evaluator(fe, f, n, nb, s.tol("tau_extension"));
    auto fam = discs::DiscFamily::build(lift, m, n + 1, s.family.d,
                                        {nb, s.grid.rings},
                                        s.tol("tau_holomorphy"), s.tol("h_param"));
    analyze_family(s, fam, checks, verdicts, scalars, details, fields, nullptr,
                   nullptr);
  } else {
    details["lift"] = "skipped: some fibers do not extend";
  }

  std::string verdict = all_vanish
                            ? (f_is_cr ? "moment-condition-holds; f is CR"
                                       : "moment-condition-holds")
                            : "moment-condition-fails";
  verdicts["moment_verdict"] = verdict;

  if (s.expect.is_object()) {
    if (s.expect.contains("moments_vanish"))
      checks.add_flag("expected-moments",
                      s.expect["moments_vanish"].get<bool>() == all_vanish);
    if (s.expect.contains("f_is_cr"))
      checks.add_flag("expected-f-is-cr",
                      s.expect["f_is_cr"].get<bool>() == f_is_cr);
  }
  return assemble(s, std::move(verdicts), std::move(scalars), checks,
                  std::move(details), std::move(fields));
}

Report run_argument(const Scenario& s) {
  CheckList checks;
  ordered_json verdicts, scalars, details, fields;

  auto e = expr::Expression::parse(s.phi_expr, {"zeta"});
  const int nb = s.grid.boundary;
  std::vector<cplx> samples(nb);
  for (int j = 0; j < nb; ++j) {
    cplx z = std::polar(1.0, 2.0 * kPi * j / nb);
    samples[j] = e.eval(std::span<const cplx>(&z, 1));
  }
  contour::ClosedCurve curve(std::vector<std::vector<cplx>>{samples});

  bool consistent = true;
  for (std::size_t k = 0; k < s.targets.size(); ++k) {
    cplx b = s.targets[k];
    std::string prefix = "t" + std::to_string(k);
    double w = argument::winding_number(curve, b);
    auto zc = argument::zero_count(samples, b);
    scalars[prefix + "_winding"] = jnum(w);
    scalars[prefix + "_zero_count"] = jnum(zc.count);
    scalars[prefix + "_interior"] = zc.interior;
    int wr = argument::round_to_integer(w, s.tol("winding_tol"));
    if (std::abs(zc.count - wr) > 1e-9) consistent = false;
  }
  checks.add_flag("argument-principle", consistent,
                  "zero counts equal rounded windings at every target");

  auto fdisc = argument::DiscFunction::from_boundary(samples, 1e-6);
  auto zl = argument::locate_zeros(fdisc);
  auto zc0 = argument::zero_count(samples, cplx(0, 0));
  int bmult = 0;
  for (const auto& z : zc0.boundary) bmult += z.multiplicity;
  checks.add_flag("locate-consistency",
                  zl.total_multiplicity() == zc0.interior + bmult);
  ordered_json zj = ordered_json::array();
  for (const auto& z : zl.zeros) {
    ordered_json row;
    row["re"] = jnum(z.location.real());
    row["im"] = jnum(z.location.imag());
    row["multiplicity"] = z.multiplicity;
    row["on_boundary"] = z.on_boundary;
    zj.push_back(std::move(row));
  }
  details["zeros"] = std::move(zj);

  auto res = argument::log_residue_pv(samples);
  scalars["log_residue_pv"] = jnum(res.value);
  checks.add("log-residue-contract",
             std::abs(res.value - 2.0 * zc0.count) < 1e-6,
             std::abs(res.value - 2.0 * zc0.count), 1e-6);
  return assemble(s, std::move(verdicts), std::move(scalars), checks,
                  std::move(details), std::move(fields));
}

}  // namespace

Report run_scenario(const Scenario& s) {
  if (s.kind == "family-verdict") return run_family_verdict(s);
  if (s.kind == "strip-problem") return run_strip(s);
  if (s.kind == "cr-field") return run_cr_field(s);
  if (s.kind == "moment-check") return run_moment_check(s);
  if (s.kind == "argument-principle") return run_argument(s);
  throw Error(ErrorCode::SchemaError, "unknown scenario kind '" + s.kind + "'");
}

}  // namespace aplab::workbench
