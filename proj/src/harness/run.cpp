#include <chrono>
#include <functional>
#include <map>
#include <sstream>

#include "nilspace/axioms.hpp"
#include "nilspace/bundle.hpp"
#include "nilspace/extension.hpp"
#include "nilspace/harness.hpp"
#include "nilspace/translation.hpp"

namespace nilspace::harness {

namespace {

struct Context {
  std::uint64_t seed = 0;
  SearchBudget& budget;
  int exit_code = 0;
  std::string status = "ok";
};

const std::string kRoot;

int get_dim(const Json& cfg, const char* key, int fallback) {
  const Int v = get_int(cfg, key, kRoot, fallback);
  if (v < 0 || v > kMaxCubeDim) throw ConfigError(join(kRoot, key), "dimension outside [0, 12]");
  return static_cast<int>(v);
}

int get_level(const Json& cfg, const char* key) {
  const Int v = get_int(cfg, key, kRoot);
  if (v < 0 || v > kMaxCubeDim) throw ConfigError(join(kRoot, key), "outside [0, 12]");
  return static_cast<int>(v);
}

Json map_json(const PointMap& m) { return Json(std::vector<std::uint32_t>(m.begin(), m.end())); }

Json generator_actions(const FiberAction& a) {
  Json gens = Json::array();
  const FinAbGroup& g = a.group;
  for (std::size_t t = 0; t < g.num_factors(); ++t) {
    std::vector<Int> e(g.num_factors(), 0);
    e[t] = 1;
    gens.push_back(map_json(a.act[g.index_of(g.reduce(e))]));
  }
  return gens;
}

Json extension_json(const Extension& e) {
  return Json{{"total", e.total.describe()},  {"total_size", e.total.size()},
              {"base", e.base.describe()},    {"base_size", e.base.size()},
              {"degree", e.degree},           {"group", group_json(e.action.group)},
              {"proj", map_json(e.proj)},     {"generator_actions", generator_actions(e.action)},
              {"checked_upto", e.checked_upto}};
}

Extension parse_extension(const Json& j, const std::string& path, SearchBudget& budget) {
  const int degree = static_cast<int>(get_int(j, "degree", path));
  if (degree < 1 || degree > kMaxCubeDim) throw ConfigError(join(path, "degree"), "outside [1, 12]");
  const int n_check = static_cast<int>(get_int(j, "n_check", path, 0));
  if (j.contains("group_extension"))
    return group_extension_space(parse_group_extension(j.at("group_extension"), join(path, "group_extension")),
                                 degree, budget, n_check);
  if (j.contains("trivial")) {
    const std::string p = join(path, "trivial");
    const Json& t = j.at("trivial");
    return trivial_extension(parse_space(field(t, "base", p), join(p, "base")),
                             parse_group(field(t, "group", p), join(p, "group")), degree, budget, n_check);
  }
  const Cubespace total = parse_space(field(j, "total", path), join(path, "total"));
  const Cubespace base = parse_space(field(j, "base", path), join(path, "base"));
  const FinAbGroup g = parse_group(field(j, "group", path), join(path, "group"));
  const PointMap proj = parse_map(field(j, "proj", path), join(path, "proj"), total.size(), base.size());
  return verify_extension(total, base, g, proj, degree,
                          n_check > 0 ? n_check : default_extension_check_dim(total, base, degree), budget);
}

EnumMode parse_mode(const Json& cfg) {
  if (!cfg.contains("mode")) return EnumMode::Auto;
  const Json& m = cfg.at("mode");
  if (m == "auto") return EnumMode::Auto;
  if (m == "raw") return EnumMode::Raw;
  if (m == "pruned" || m == "face-pruned") return EnumMode::Pruned;
  throw ConfigError("/mode", "expected auto, raw or pruned");
}

Json cmd_verify_axioms(const Json& cfg, Context& ctx) {
  const Cubespace s = parse_space(field(cfg, "space", kRoot), "/space");
  const int n_upto = get_dim(cfg, "n_upto", 3);
  if (n_upto > s.n_max()) throw ConfigError("/n_upto", "exceeds the space's n_max");
  const AxiomReport r = check_axioms(s, n_upto, ctx.budget, parse_mode(cfg));
  Json dims = Json::array();
  for (const auto& d : r.dims)
    dims.push_back({{"n", d.n}, {"mode", d.mode}, {"cubes", d.cubes}, {"corners", d.corners},
                    {"composition", d.composition_ok}, {"gluing", d.gluing_ok},
                    {"min_completions", d.min_completions}, {"max_completions", d.max_completions}});
  Json out{{"space", s.describe()}, {"size", s.size()},          {"ergodic", r.ergodic_ok},
           {"composition", r.composition_ok()}, {"gluing", r.gluing_ok()}, {"all_ok", r.all_ok()},
           {"kstep", r.kstep ? Json(*r.kstep) : Json()}, {"dimensions", dims}};
  if (r.counterexample)
    out["counterexample"] = {{"axiom", r.counterexample->axiom}, {"n", r.counterexample->n},
                             {"map", map_json(r.counterexample->map)}, {"morphism", r.counterexample->morphism}};
  if (!r.all_ok()) {
    ctx.exit_code = 2;
    ctx.status = "structural-failure";
  }
  return out;
}

Json cmd_factor(const Json& cfg, Context&) {
  const Cubespace s = parse_space(field(cfg, "space", kRoot), "/space");
  const Factor f = factor_nilspace(s, get_level(cfg, "i"));
  Json classes = Json::array();
  for (const auto& c : f.partition.classes) classes.push_back(std::vector<std::uint32_t>(c.begin(), c.end()));
  return Json{{"space", s.describe()}, {"factor", f.space.describe()}, {"size", f.space.size()},
              {"proj", map_json(f.proj)}, {"classes", classes}};
}

Json cmd_structure_groups(const Json& cfg, Context& ctx) {
  const Cubespace s = parse_space(field(cfg, "space", kRoot), "/space");
  const int k = get_level(cfg, "k");
  Json levels = Json::array();
  for (int i = 1; i <= k; ++i) {
    const StructureGroup g = structure_group(s, i, ctx.budget);
    levels.push_back({{"level", i}, {"group", group_json(g.group)}, {"generator_actions", generator_actions(g.action)}});
  }
  return Json{{"space", s.describe()}, {"levels", levels}};
}

Json cmd_verify_bundle(const Json& cfg, Context& ctx) {
  const Cubespace s = parse_space(field(cfg, "space", kRoot), "/space");
  const int k = get_level(cfg, "k");
  const int n_check = get_dim(cfg, "n_check", std::min(k + 1, s.n_max()));
  const BundleDecomposition bd = verify_degree_bundle(s, k, n_check, ctx.budget);
  Json factors = Json::array(), groups = Json::array();
  for (const auto& f : bd.factors) factors.push_back({{"space", f.space.describe()}, {"size", f.space.size()}});
  for (const auto& g : bd.groups) groups.push_back(group_json(g.group));
  return Json{{"space", s.describe()}, {"k", k}, {"factors", factors}, {"groups", groups},
              {"checked_upto", bd.checked_upto}};
}

Json cmd_verify_extension(const Json& cfg, Context& ctx) {
  return extension_json(parse_extension(field(cfg, "extension", kRoot), "/extension", ctx.budget));
}

Json cmd_find_section(const Json& cfg, Context& ctx) {
  const Extension e = parse_extension(field(cfg, "extension", kRoot), "/extension", ctx.budget);
  const SectionResult r = find_section(e, ctx.budget);
  Json out{{"extension", extension_json(e)}, {"found", r.section.has_value()}, {"method", r.method},
           {"candidates", r.candidates}, {"rejected", r.rejected}};
  if (r.section) {
    bool ok = is_morphism(*r.section, e.base, e.total, e.checked_upto, ctx.budget);
    for (Point x = 0; x < r.section->size(); ++x) ok = ok && e.proj[(*r.section)[x]] == x;
    out["section"] = map_json(*r.section);
    out["certificate"] = ok ? "section rechecked: proj o s = id and s is a morphism up to n=" +
                                  std::to_string(e.checked_upto)
                            : "section failed its recheck";
    if (!ok) throw StructuralFailure("section failed its recheck");
  } else {
    out["section"] = nullptr;
    out["certificate"] = "no section: " + std::to_string(r.rejected) + " of " + std::to_string(r.candidates) +
                         " candidates rejected (" + r.method + " search, dimensions 1.." +
                         std::to_string(e.checked_upto) + ")";
  }
  return out;
}

Json cmd_trans_group(const Json& cfg, Context& ctx) {
  const Cubespace s = parse_space(field(cfg, "space", kRoot), "/space");
  const int i = get_level(cfg, "i");
  int fallback = s.n_max();
  if (cfg.contains("k")) fallback = translation_check_dim(get_level(cfg, "k"), i);
  else if (s.step_hint()) fallback = translation_check_dim(*s.step_hint(), i);
  const int check_dim = std::min(get_dim(cfg, "check_dim", fallback), s.n_max());
  const TransGroup t = trans_group(s, i, check_dim, ctx.budget);
  Json elems = Json::array();
  for (const auto& e : t.elements) elems.push_back(map_json(e));
  return Json{{"space", s.describe()}, {"height", i},           {"check_dim", t.check_dim},
              {"count", t.elements.size()}, {"elements", elems}, {"closed", t.closed},
              {"contains_next", t.contains_next}};
}

Json cmd_lift_translation(const Json& cfg, Context& ctx) {
  const int i = get_level(cfg, "i");
  TranslationLift l;
  if (cfg.contains("total")) {
    const Cubespace total = parse_space(cfg.at("total"), "/total");
    const auto& a = field(cfg, "alpha", kRoot);
    if (!a.is_array()) throw ConfigError("/alpha", "expected an array");
    const PointMap alpha = parse_map(a, "/alpha", a.size(), a.size());
    const PointMap proj = parse_map(field(cfg, "proj", kRoot), "/proj", total.size(), alpha.size());
    const int check_dim = get_dim(cfg, "check_dim", std::min(total.n_max(), i + 2));
    l = lift_translation(alpha, total, proj, alpha.size(), i, check_dim, ctx.budget);
  } else {
    const Cubespace s = parse_space(field(cfg, "space", kRoot), "/space");
    const int k = get_level(cfg, "k");
    const auto& a = field(cfg, "alpha", kRoot);
    if (!a.is_array()) throw ConfigError("/alpha", "expected an array");
    const PointMap alpha = parse_map(a, "/alpha", a.size(), a.size());
    l = lift_translation(alpha, s, i, k, ctx.budget);
  }
  return Json{{"found", l.beta.has_value()}, {"beta", l.beta ? map_json(*l.beta) : Json()},
              {"method", l.method}, {"certificate", l.certificate}};
}

Json cmd_factor_to_finite(const Json& cfg, Context& ctx) {
  const Cubespace s = parse_space(field(cfg, "space", kRoot), "/space");
  const int k = get_level(cfg, "k");
  const int cap = static_cast<int>(get_int(cfg, "alpha_cap", kRoot, 3));
  try {
    const FreeFactor f = factor_to_finite(s, k, cap, ctx.budget);
    return Json{{"found", true},
                {"free", f.rank.str()},
                {"ranks", f.rank.ranks},
                {"modulus", *f.rank.modulus},
                {"alpha", f.alpha},
                {"exponent", f.exponent},
                {"h", map_json(f.h)},
                {"factor_map_rechecked", is_factor_map(f.h, f.space, s, k)},
                {"diagnostics", f.diagnostics}};
  } catch (const StructuralFailure& e) {
    return Json{{"found", false}, {"diagnostics", e.what() + std::string(": ") + e.witness()}};
  }
}

Json cmd_lift_morphism(const Json& cfg, Context& ctx) {
  const FinAbGroup a = parse_group(field(cfg, "group", kRoot), "/group");
  const Cubespace s = parse_space(field(cfg, "space", kRoot), "/space");
  const PointMap phi = parse_map(field(cfg, "phi", kRoot), "/phi", a.order(), s.size());
  const int k = get_level(cfg, "k");
  const int ext_cap = static_cast<int>(get_int(cfg, "ext_cap", kRoot, 2));
  const int alpha_cap = static_cast<int>(get_int(cfg, "alpha_cap", kRoot, 2));
  try {
    const MorphismLift l = lift_morphism(a, phi, s, k, ext_cap, alpha_cap, ctx.budget);
    bool commutes = true;
    for (std::uint64_t b = 0; b < l.ext->total.order(); ++b)
      commutes = commutes && l.beta[l.psi[b]] == phi[a.index_of(l.ext->proj.apply(l.ext->total.element_at(b)))];
    return Json{{"found", true},
                {"height", l.height},
                {"extension_group", group_json(l.ext->total)},
                {"fprime", l.fprime.describe()},
                {"modulus", l.modulus},
                {"lower_ranks", l.lower_ranks},
                {"psi", map_json(l.psi)},
                {"beta", map_json(l.beta)},
                {"commutes", commutes},
                {"diagnostics", l.diagnostics}};
  } catch (const StructuralFailure& e) {
    return Json{{"found", false}, {"diagnostics", e.what() + std::string(": ") + e.witness()}};
  }
}

Json cmd_gowers_norm(const Json& cfg, Context& ctx) {
  const GroupFunction f = parse_function(field(cfg, "function", kRoot), "/function", ctx.seed);
  const int d = static_cast<int>(get_int(cfg, "d", kRoot));
  if (d < 1 || d > 8) throw ConfigError("/d", "outside [1, 8]");
  Json out{{"group", group_json(f.group())}, {"d", d}, {"value", gowers_norm(f, d, ctx.budget)}};
  if (d == 2) out["fourier"] = gowers_u2_fourier(f);
  return out;
}

Json cmd_phase_check(const Json& cfg, Context& ctx) {
  const GroupFunction f = parse_function(field(cfg, "function", kRoot), "/function", ctx.seed);
  if (!f.phases()) throw ConfigError("/function", "phase checks need exact phases");
  const int k = get_level(cfg, "k");
  const PhaseCertificate c = is_phase_polynomial(f, k, ctx.budget);
  Json out{{"k", k}, {"ok", c.ok}, {"tuples", c.tuples}, {"transcript", c.transcript}};
  if (c.ok) out["norm"] = gowers_norm(f, k + 1, ctx.budget);
  return out;
}

Json cmd_project_phase(const Json& cfg, Context& ctx) {
  const GroupExtension ext = parse_group_extension(field(cfg, "extension", kRoot), "/extension");
  const GroupFunction phi = parse_function(field(cfg, "function", kRoot), "/function", ctx.seed);
  if (!(phi.group() == ext.total))
    throw ConfigError("/function/group", "must equal the extension group " + ext.total.str());
  const GroupFunction f = project_phase(phi, ext);
  double top = 0.0;
  for (const auto& v : f.values()) top = std::max(top, std::abs(v));
  return Json{{"extension_group", group_json(ext.total)}, {"base", group_json(ext.base)},
              {"exact", f.phases().has_value()}, {"values", values_json(f)}, {"max_modulus", top}};
}

Json phase_poly_json(const PhasePolynomial& p) {
  Json out{{"degree", p.degree}, {"phases", values_json(p.f)}, {"transcript", p.transcript}};
  if (p.coeffs) out["coeffs"] = form_json(p.coeffs->form);
  return out;
}

Json cmd_decompose_phase(const Json& cfg, Context& ctx) {
  std::optional<PhaseCoeffs> form;
  const GroupFunction f = parse_function(field(cfg, "function", kRoot), "/function", ctx.seed, &form);
  if (!f.phases()) throw ConfigError("/function", "decomposition needs exact phases");
  const Int q = get_int(cfg, "q", kRoot);
  if (q < 1) throw ConfigError("/q", "must be >= 1");
  const int max_degree = static_cast<int>(get_int(cfg, "max_degree", kRoot, 4));
  PhasePolynomial phi = certify_phase_polynomial(f, max_degree, ctx.budget);
  phi.coeffs = form;
  const PhaseDecomposition d = decompose_phase(phi, q, ctx.budget);
  Json out{{"degree", phi.degree}, {"q", q}, {"found", d.found}, {"method", d.method}, {"candidates", d.candidates}};
  if (d.found) {
    out["phi1"] = phase_poly_json(*d.phi1);
    out["phi2"] = phase_poly_json(*d.phi2);
  }
  return out;
}

Json cmd_inverse_search(const Json& cfg, Context& ctx) {
  const GroupFunction f = parse_function(field(cfg, "function", kRoot), "/function", ctx.seed);
  InverseSearchOptions o;
  o.k = get_level(cfg, "k");
  o.q = get_int(cfg, "q", kRoot);
  o.ext_cap = static_cast<int>(get_int(cfg, "ext_cap", kRoot, 2));
  o.delta = get_double(cfg, "delta", kRoot, 0.5);
  o.norm_floor = get_double(cfg, "norm_floor", kRoot, 0.0);
  o.seed = ctx.seed;
  const Int limit = get_int(cfg, "candidate_limit", kRoot, 1 << 16);
  if (limit < 1) throw ConfigError("/candidate_limit", "must be >= 1");
  o.candidate_limit = static_cast<std::uint64_t>(limit);
  const CorrelationReport r = inverse_search(f, o, ctx.budget);
  Json heights = Json::array();
  for (const auto& h : r.heights)
    heights.push_back({{"height", h.height}, {"group", h.group}, {"mode", h.mode}, {"candidates", h.candidates},
                       {"uncertified", h.uncertified}, {"best", h.best}});
  Json out{{"norm", r.norm}, {"gated", r.gated}, {"complete", r.complete}, {"height", r.height},
           {"extension_group", r.group}, {"correlation", {r.corr.real(), r.corr.imag()}},
           {"magnitude", r.magnitude}, {"recomputed", r.recomputed}, {"delta", o.delta},
           {"clears_delta", r.clears_delta}, {"seed", o.seed}, {"heights", heights}};
  if (r.phi) {
    out["phi"] = {{"coeffs", form_json(r.phi->form)}, {"phases", phases_json(r.phi_values)}};
  }
  return out;
}

Json cmd_tz_check(const Json& cfg, Context&) {
  const Json& phi = field(cfg, "phi", kRoot);
  const int arity = static_cast<int>(get_int(phi, "arity", "/phi"));
  if (arity < 1 || arity > 4) throw ConfigError("/phi/arity", "outside [1, 4]");
  const BinomialPhase b = parse_binomial_phase(field(phi, "coeffs", "/phi"), "/phi/coeffs", arity);
  const Int p = get_int(cfg, "p", kRoot);
  if (p < 2 || p > 31) throw ConfigError("/p", "outside [2, 31]");
  const TzResult r = tz_residue_check(b, p, get_level(cfg, "k"));
  return Json{{"phi", b.str()},        {"passes", r.passes},   {"precondition", r.precondition},
              {"points", r.points},    {"transcript", r.transcript}};
}

Json cmd_period(const Json& cfg, Context& ctx) {
  const PolyMap p = parse_polymap(field(cfg, "polymap", kRoot), "/polymap");
  Json out{{"polymap", p.str()}, {"degree", p.degree()}};
  if (p.arity() == 1) {
    const Int per = period_of_polymap(p, ctx.budget);
    out["period"] = per;
    out["bound"] = checked_pow(p.target().order(), std::max(1, p.degree()));
  }
  if (cfg.contains("i") && cfg.contains("k"))
    out["morphism"] = poly_is_morphism(p, get_level(cfg, "i"), get_level(cfg, "k"), ctx.budget);
  return out;
}

Json cmd_derivmorph(const Json& cfg, Context& ctx) {
  const FinAbGroup a = parse_group(field(cfg, "source", kRoot), "/source");
  const FinAbGroup b = parse_group(field(cfg, "target", kRoot), "/target");
  const int i = get_level(cfg, "i"), j = get_level(cfg, "j");
  const DerivmorphReport r = check_derivmorph(a, b, i, j, ctx.budget);
  Json ex = Json::array();
  for (const auto& m : r.exceptions) ex.push_back(map_json(m));
  return Json{{"i", i}, {"j", j}, {"maps", r.maps}, {"morphisms", r.morphisms}, {"constant", r.constant},
              {"rechecked", r.rechecked}, {"holds", r.holds()}, {"exceptions", ex}};
}

using Handler = std::function<Json(const Json&, Context&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"verify-axioms", cmd_verify_axioms},
      {"factor", cmd_factor},
      {"structure-groups", cmd_structure_groups},
      {"verify-bundle", cmd_verify_bundle},
      {"verify-extension", cmd_verify_extension},
      {"find-section", cmd_find_section},
      {"trans-group", cmd_trans_group},
      {"lift-translation", cmd_lift_translation},
      {"factor-to-finite", cmd_factor_to_finite},
      {"lift-morphism", cmd_lift_morphism},
      {"gowers-norm", cmd_gowers_norm},
      {"phase-check", cmd_phase_check},
      {"project-phase", cmd_project_phase},
      {"decompose-phase", cmd_decompose_phase},
      {"inverse-search", cmd_inverse_search},
      {"tz-check", cmd_tz_check},
      {"period", cmd_period},
      {"derivmorph", cmd_derivmorph},
  };
  return table;
}

}  // namespace

RunResult run(const Json& config, const RunOptions& opts) {
  RunResult out;
  Json& rep = out.report;
  rep["command"] = config.is_object() && config.contains("command") ? config.at("command") : Json();
  rep["config"] = config;
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t seed = 0;
  try {
    if (!config.is_object()) throw ConfigError("", "config must be an object");
    const Json& cmd = field(config, "command", kRoot);
    if (!cmd.is_string()) throw ConfigError("/command", "expected a string");
    seed = opts.seed ? *opts.seed : static_cast<std::uint64_t>(get_int(config, "seed", kRoot, 0));
    rep["seed"] = seed;
    std::uint64_t limit = default_budget();
    if (opts.budget) {
      limit = *opts.budget;
    } else if (config.contains("budget")) {
      const Int b = get_int(field(config, "budget", kRoot), "maps", "/budget");
      if (b < 1) throw ConfigError("/budget/maps", "must be positive");
      limit = static_cast<std::uint64_t>(b);
    }
    rep["budget"] = limit;
    unsigned threads = 1;
    if (opts.threads) threads = *opts.threads;
    else if (config.contains("threads")) {
      const Int t = get_int(config, "threads", kRoot);
      if (t < 0 || t > 1024) throw ConfigError("/threads", "outside [0, 1024]");
      threads = static_cast<unsigned>(t);
    }
    set_thread_count(threads);
    const auto& table = handlers();
    auto it = table.find(cmd.get<std::string>());
    if (it == table.end()) throw ConfigError("/command", "unknown command '" + cmd.get<std::string>() + "'");
    SearchBudget budget(limit);
    Context ctx{seed, budget};
    rep["status"] = "ok";
    Json results = it->second(config, ctx);
    rep["status"] = ctx.status;
    rep["results"] = std::move(results);
    out.exit_code = ctx.exit_code;
  } catch (const ConfigError& e) {
    rep["status"] = "config-error";
    rep["error"] = {{"location", e.location()}, {"message", e.what()}};
    out.exit_code = 1;
  } catch (const InvalidArgument& e) {
    rep["status"] = "invalid-argument";
    rep["error"] = {{"message", e.what()}};
    out.exit_code = 1;
  } catch (const StructuralFailure& e) {
    rep["status"] = "structural-failure";
    rep["error"] = {{"message", e.what()}, {"witness", e.witness()}};
    out.exit_code = 2;
  } catch (const ResourceLimit& e) {
    rep["status"] = "resource-limit";
    rep["error"] = {{"message", e.what()}, {"dimension_reached", e.dimension_reached()}};
    out.exit_code = 3;
  } catch (const nlohmann::json::exception& e) {
    rep["status"] = "config-error";
    rep["error"] = {{"location", ""}, {"message", e.what()}};
    out.exit_code = 1;
  }
  if (!rep.contains("seed")) rep["seed"] = seed;
  rep["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  rep["version"] = kVersion;
  return out;
}

namespace {

void flatten(const Json& j, const std::string& path, std::ostringstream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path + "/" + it.key(), os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "/" + std::to_string(i), os);
  } else {
    std::string v = j.is_string() ? j.get<std::string>() : j.dump();
    if (v.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      v = q + "\"";
    }
    os << path << "," << v << "\n";
  }
}

}  // namespace

std::string results_csv(const Json& report) {
  std::ostringstream os;
  os << "path,value\n";
  os << "/command," << (report.contains("command") ? report.at("command").dump() : "null") << "\n";
  os << "/status," << report.value("status", "") << "\n";
  if (report.contains("results")) flatten(report.at("results"), "", os);
  if (report.contains("error")) flatten(report.at("error"), "/error", os);
  return os.str();
}

}  // namespace nilspace::harness
