#include "ottolab/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ottolab/config.hpp"
#include "ottolab/entropy.hpp"
#include "ottolab/io.hpp"
#include "ottolab/reference.hpp"

namespace ottolab {

namespace {

namespace fs = std::filesystem;

FlowTrajectory run_configured_flow(const ScenarioConfig& cfg, const CommonFlags& flags) {
    GeometryPtr g = build_geometry(cfg.geometry);
    ScalarField rho0 = materialize_scalar(g, cfg.rho0, flags.seed, true);
    switch (cfg.kind) {
        case FlowKind::heat:
            return run_heat(rho0, cfg.solver);
        case FlowKind::geodesic:
            return run_geodesic(rho0, materialize_scalar(g, cfg.phi0, flags.seed, false),
                                cfg.solver);
        case FlowKind::langevin:
            return run_langevin(rho0, materialize_scalar(g, cfg.phi0, flags.seed, false), cfg.c,
                                cfg.solver);
        case FlowKind::euler:
            return run_euler_damped(rho0, materialize_vector(g, cfg.u0, flags.seed), cfg.c,
                                    cfg.solver);
    }
    throw ConfigError("flow.kind: unreachable");
}

EntropySeries enrich_series(const FlowTrajectory& traj, const ScenarioConfig& cfg) {
    SeriesOptions opt;
    opt.m = cfg.geometry.m;
    if (traj.kind == FlowKind::langevin) {
        auto model = std::make_shared<ReferenceModel>(
            solve_u_beta(traj.c, 1, 1.0, 0.0, 0.0, traj.states.back().t + 1.0, 1e-4));
        opt.alpha = [model](double t) { return model->alpha_at(t); };
    }
    EntropySeries s = build_entropy_series(traj, opt);
    if (s.times.size() >= 7) {
        add_derivative_columns(s);
        const bool positive_times = s.times.front() > 0.0 || s.times.back() > 0.0;
        if (positive_times &&
            (traj.kind == FlowKind::heat || traj.kind == FlowKind::geodesic)) {
            add_hm_wm(s, traj.kind == FlowKind::heat ? WmMode::heat : WmMode::geodesic,
                      cfg.geometry.m);
        }
        if (traj.kind == FlowKind::langevin && std::isfinite(traj.c) && traj.c > 0.0)
            add_w_exponential(s, traj.c);
    }
    return s;
}

int run_one_check(const CheckRequest& req, const CommonFlags& flags, const fs::path& dir,
                  std::ostream& log, int& failures) {
    VerificationReport rep;
    if (auto id = identity_from_string(req.id)) {
        rep = check_identity(*id, req.overrides);
    } else if (auto iq = inequality_from_string(req.id)) {
        rep = check_inequality(*iq, req.overrides);
    } else if (req.id == "model_residual") {
        rep = check_model_residual(flags.wrong_sign);
    } else if (req.id == "euler_hj_equiv") {
        rep = check_euler_hj_equivalence();
    } else if (req.id == "recover_potential") {
        rep = check_recover_potential();
    } else if (req.id == "hopf_lax") {
        rep = check_hopf_lax();
    } else {
        throw ConfigError("unknown check id '" + req.id + "'");
    }
    write_report_json((dir / (rep.label + ".json")).string(), rep);
    write_report_csv((dir / (rep.label + ".csv")).string(), rep);
    const char* status = rep.inconclusive ? "INCONCLUSIVE" : (rep.pass ? "PASS" : "FAIL");
    log << status << "  " << rep.label << "  sup=" << format_double(rep.sup_residual)
        << " tol=" << format_double(rep.tolerance);
    if (!rep.refinement_ratios.empty()) {
        log << " ratios=";
        for (size_t i = 0; i < rep.refinement_ratios.size(); ++i)
            log << (i ? "," : "") << format_double(rep.refinement_ratios[i]);
    }
    log << "\n";
    if (!rep.pass && !rep.inconclusive) ++failures;
    return 0;
}

}  // namespace

int cmd_simulate(const std::string& config_path, const CommonFlags& flags, std::ostream& log) {
    try {
        ScenarioConfig cfg = load_scenario_file(config_path);
        if (!cfg.has_flow) throw ConfigError("simulate: config has no flow section");
        const fs::path dir = flags.out_dir.empty() ? fs::path(cfg.output_dir) : fs::path(flags.out_dir);
        fs::create_directories(dir);

        FlowTrajectory traj = run_configured_flow(cfg, flags);
        write_trajectory_csv((dir / "trajectory.csv").string(), traj);
        EntropySeries s = enrich_series(traj, cfg);
        write_series_csv((dir / "entropy.csv").string(), s);
        if (flags.dump_fields) write_fields_dump((dir / "fields.txt").string(), traj);

        if (flags.gnuplot) {
            std::ofstream gp(dir / "plot.gp", std::ios::binary);
            gp << "set datafile separator ','\n"
               << "set key autotitle columnhead\n"
               << "plot 'entropy.csv' using 1:2 with lines title 'Ent'\n"
               << "pause -1\n";
        }

        log << "flow " << to_string(traj.kind) << " finished: " << to_string(traj.termination)
            << ", " << traj.states.size() << " snapshots\n";
        if (flags.strict && traj.termination != Termination::completed) return 1;
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
}

int cmd_verify(const std::string& config_path, const std::string& suite, const std::string& only,
               const CommonFlags& flags, std::ostream& log) {
    try {
        const fs::path dir = flags.out_dir.empty() ? fs::path("out") : fs::path(flags.out_dir);
        fs::create_directories(dir);
        int failures = 0;

        if (!config_path.empty()) {
            ScenarioConfig cfg = load_scenario_file(config_path);
            if (cfg.checks.empty()) throw ConfigError("verify: config has no checks");
            int ran = 0;
            for (const auto& req : cfg.checks) {
                if (!only.empty() && req.id != only &&
                    (req.overrides.label.empty() || req.overrides.label != only))
                    continue;
                run_one_check(req, flags, dir, log, failures);
                ++ran;
            }
            if (ran == 0) throw ConfigError("verify: --only matched no configured check");
        } else {
            if (suite != "default")
                throw ConfigError("verify: unknown suite '" + suite + "'");
            SuiteOptions opt;
            opt.only = only;
            opt.wrong_sign = flags.wrong_sign;
            auto reports = run_default_suite(opt);
            if (reports.empty()) throw ConfigError("verify: --only matched no check");
            for (const auto& rep : reports) {
                write_report_json((dir / (rep.label + ".json")).string(), rep);
                write_report_csv((dir / (rep.label + ".csv")).string(), rep);
                const char* status =
                    rep.inconclusive ? "INCONCLUSIVE" : (rep.pass ? "PASS" : "FAIL");
                log << status << "  " << rep.label << "  sup="
                    << format_double(rep.sup_residual) << " tol=" << format_double(rep.tolerance);
                if (!rep.refinement_ratios.empty()) {
                    log << " ratios=";
                    for (size_t i = 0; i < rep.refinement_ratios.size(); ++i)
                        log << (i ? "," : "") << format_double(rep.refinement_ratios[i]);
                }
                log << "\n";
                if (!rep.pass && !rep.inconclusive) ++failures;
            }
        }
        log << (failures == 0 ? "all checks passed\n" : "failures: ");
        if (failures != 0) log << failures << "\n";
        return failures == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
}

int cmd_reference(const std::string& c_text, int m, double u0, double up0, double beta0,
                  double t_end, double dt, const std::string& out_path, std::ostream& log) {
    try {
        ReferenceModel model;
        if (c_text == "inf") {
            model = reference_preset_c_infinity(m, t_end, dt);
        } else if (c_text == "0") {
            model = reference_preset_c_zero(m, t_end, t_end - dt, dt);
        } else {
            const double c = std::stod(c_text);
            if (!(u0 > 0.0)) throw ConfigError("reference: u0 must be positive");
            model = solve_u_beta(c, m, u0, up0, beta0, t_end, dt);
        }

        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + out_path);
        out << "t,u,up,alpha,beta,Ent,Fisher,Kin,dW_model\n";
        for (size_t j = 0; j < model.t.size(); ++j) {
            auto f = model_closed_forms(model, model.t[j]);
            out << format_double(model.t[j]) << ',' << format_double(model.u[j]) << ','
                << format_double(model.up[j]) << ','
                << format_double(model.up[j] / model.u[j]) << ','
                << format_double(model.beta[j]) << ',' << format_double(f.entropy) << ','
                << format_double(f.fisher) << ',' << format_double(f.kinetic) << ','
                << format_double(f.dW_model) << "\n";
        }
        log << "reference model sampled to t=" << format_double(model.t_horizon) << " ("
            << model.t.size() << " rows)\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace ottolab
