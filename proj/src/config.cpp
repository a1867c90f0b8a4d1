#include "ottolab/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ottolab/presets.hpp"

namespace ottolab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config error at " + where + ": " + what);
}

double num(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

std::vector<TrigTerm> parse_terms(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of {k, cos, sin}");
    std::vector<TrigTerm> terms;
    for (size_t i = 0; i < j.size(); ++i) {
        const auto& e = j[i];
        const std::string at = where + "[" + std::to_string(i) + "]";
        TrigTerm t;
        if (!e.contains("k") || !e["k"].is_array()) fail(at, "missing integer array 'k'");
        for (size_t a = 0; a < e["k"].size() && a < 2; ++a) t.k[a] = e["k"][a].get<int>();
        if (e.contains("cos")) t.cos_coeff = num(e["cos"], at + ".cos");
        if (e.contains("sin")) t.sin_coeff = num(e["sin"], at + ".sin");
        terms.push_back(t);
    }
    return terms;
}

InitSpec parse_init(const json& j, const std::string& where) {
    InitSpec s;
    if (j.is_null()) return s;
    if (!j.is_object()) fail(where, "expected an object");
    if (j.contains("preset")) {
        s.preset = j["preset"].get<std::string>();
        static const char* known[] = {"uniform", "perturbed_uniform", "model_patch",
                                      "random_trig", "zero"};
        bool ok = false;
        for (const char* k : known) ok |= s.preset == k;
        if (!ok) fail(where + ".preset", "unknown preset '" + s.preset + "'");
    }
    if (j.contains("a")) s.a = num(j["a"], where + ".a");
    if (j.contains("u0")) s.u0 = num(j["u0"], where + ".u0");
    if (j.contains("kmax")) s.kmax = j["kmax"].get<int>();
    if (j.contains("amplitude")) s.amplitude = num(j["amplitude"], where + ".amplitude");
    if (j.contains("coeffs")) s.coeffs = parse_terms(j["coeffs"], where + ".coeffs");
    if (j.contains("constant")) s.constant = num(j["constant"], where + ".constant");
    if (j.contains("normalize")) s.normalize = j["normalize"].get<bool>();
    if (s.preset.empty() && s.coeffs.empty() && s.constant == 0.0)
        fail(where, "needs a preset or Fourier coefficients");
    return s;
}

CheckOverrides parse_overrides(const json& j, const std::string& where) {
    CheckOverrides o;
    if (j.contains("tolerance")) o.tolerance = num(j["tolerance"], where + ".tolerance");
    if (j.contains("window")) {
        if (!j["window"].is_array() || j["window"].size() != 2)
            fail(where + ".window", "expected [t0, t1]");
        o.window = {j["window"][0].get<double>(), j["window"][1].get<double>()};
    }
    if (j.contains("m")) o.m = num(j["m"], where + ".m");
    if (j.contains("c")) o.c = num(j["c"], where + ".c");
    if (j.contains("alpha_source")) o.alpha_source = j["alpha_source"].get<std::string>();
    if (j.contains("refinement_levels")) o.refinement_levels = j["refinement_levels"].get<int>();
    if (j.contains("label")) o.label = j["label"].get<std::string>();
    return o;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    ScenarioConfig cfg;
    if (j.contains("geometry")) {
        const auto& g = j["geometry"];
        if (g.contains("dim")) cfg.geometry.dim = g["dim"].get<int>();
        if (g.contains("periods")) {
            for (size_t a = 0; a < g["periods"].size() && a < 2; ++a)
                cfg.geometry.periods[a] = num(g["periods"][a], "geometry.periods");
        }
        if (g.contains("grid")) {
            for (size_t a = 0; a < g["grid"].size() && a < 2; ++a)
                cfg.geometry.grid[a] = g["grid"][a].get<int>();
        }
        if (g.contains("f_coeffs")) cfg.geometry.f_terms = parse_terms(g["f_coeffs"], "geometry.f_coeffs");
        if (g.contains("m")) cfg.geometry.m = num(g["m"], "geometry.m");
    }

    if (j.contains("flow")) {
        cfg.has_flow = true;
        const auto& f = j["flow"];
        const std::string kind = f.value("kind", "");
        if (kind == "heat")
            cfg.kind = FlowKind::heat;
        else if (kind == "geodesic")
            cfg.kind = FlowKind::geodesic;
        else if (kind == "langevin")
            cfg.kind = FlowKind::langevin;
        else if (kind == "euler")
            cfg.kind = FlowKind::euler;
        else
            fail("flow.kind", "expected heat|geodesic|langevin|euler, got '" + kind + "'");
        if (f.contains("c")) cfg.c = num(f["c"], "flow.c");
        if (f.contains("rho0")) cfg.rho0 = parse_init(f["rho0"], "flow.rho0");
        else fail("flow", "missing rho0");
        if (f.contains("phi0")) cfg.phi0 = parse_init(f["phi0"], "flow.phi0");
        if (f.contains("u0")) {
            const auto& u = f["u0"];
            if (u.contains("gradient_of")) {
                cfg.u0.gradient = true;
                cfg.u0.potential = parse_init(u["gradient_of"], "flow.u0.gradient_of");
            } else if (u.contains("components")) {
                for (size_t a = 0; a < u["components"].size(); ++a)
                    cfg.u0.components.push_back(
                        parse_init(u["components"][a], "flow.u0.components"));
            } else {
                fail("flow.u0", "expected gradient_of or components");
            }
        }
        if (f.contains("solver")) {
            const auto& s = f["solver"];
            if (s.contains("dt")) cfg.solver.dt = num(s["dt"], "solver.dt");
            if (s.contains("t_start")) cfg.solver.t_start = num(s["t_start"], "solver.t_start");
            if (s.contains("t_end")) cfg.solver.t_end = num(s["t_end"], "solver.t_end");
            if (s.contains("output_stride")) cfg.solver.output_stride = s["output_stride"].get<int>();
            if (s.contains("rho_floor")) cfg.solver.rho_floor = num(s["rho_floor"], "solver.rho_floor");
            if (s.contains("hess_ceiling"))
                cfg.solver.hess_ceiling = num(s["hess_ceiling"], "solver.hess_ceiling");
            if (s.contains("dealias")) cfg.solver.dealias = s["dealias"].get<bool>();
        }
    }

    if (j.contains("checks")) {
        if (!j["checks"].is_array()) fail("checks", "expected an array");
        for (size_t i = 0; i < j["checks"].size(); ++i) {
            const auto& e = j["checks"][i];
            const std::string where = "checks[" + std::to_string(i) + "]";
            CheckRequest req;
            if (e.is_string()) {
                req.id = e.get<std::string>();
            } else if (e.is_object() && e.contains("id")) {
                req.id = e["id"].get<std::string>();
                req.overrides = parse_overrides(e, where);
            } else {
                fail(where, "expected an id string or an object with 'id'");
            }
            if (!identity_from_string(req.id) && !inequality_from_string(req.id) &&
                req.id != "model_residual" && req.id != "euler_hj_equiv" &&
                req.id != "recover_potential" && req.id != "hopf_lax")
                fail(where + ".id", "unknown check id '" + req.id + "'");
            cfg.checks.push_back(std::move(req));
        }
    }

    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

ScalarField materialize_scalar(const GeometryPtr& g, const InitSpec& spec,
                               std::optional<std::uint64_t> seed, bool density) {
    ScalarField field = make_scalar(g, 0.0);
    if (spec.preset == "uniform") {
        field = preset_uniform(g);
    } else if (spec.preset == "perturbed_uniform") {
        field = preset_perturbed_uniform(g, spec.a);
    } else if (spec.preset == "model_patch") {
        field = preset_model_patch_rho(g, spec.u0);
    } else if (spec.preset == "random_trig") {
        if (!seed) throw ConfigError("random_trig initial data requires --seed");
        field = random_trig_poly(g, spec.kmax, spec.amplitude, *seed);
        if (density) {
            for (double& x : field.v) x += 1.0;  // positive background before normalizing
            field = normalize_density(std::move(field));
        }
    } else if (spec.preset == "zero" || spec.preset.empty()) {
        field = scalar_from_terms(g, spec.coeffs, spec.constant);
        if (density && (spec.normalize || !spec.coeffs.empty() || spec.constant != 0.0))
            field = normalize_density(std::move(field));
    }
    return field;
}

VectorField materialize_vector(const GeometryPtr& g, const VectorInitSpec& spec,
                               std::optional<std::uint64_t> seed) {
    if (spec.gradient) {
        ScalarField pot = materialize_scalar(g, spec.potential, seed, false);
        return grad(pot);
    }
    if (static_cast<int>(spec.components.size()) != g->dim())
        throw ConfigError("u0.components must have one entry per axis");
    VectorField u{g, {}};
    for (const auto& comp : spec.components)
        u.comp.push_back(materialize_scalar(g, comp, seed, false).v);
    return u;
}

}  // namespace ottolab
