#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ottolab/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"flows and entropy identities on weighted flat tori"};
    app.require_subcommand(1);

    ottolab::CommonFlags flags;
    std::string config_path, suite = "default", only, out_dir;
    std::uint64_t seed_value = 0;
    bool seed_given = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--strict", flags.strict, "nonzero exit on truncated trajectories");
        sub->add_flag("--dump-fields", flags.dump_fields, "write full field snapshots");
        sub->add_flag("--gnuplot", flags.gnuplot, "emit a gnuplot script next to the CSVs");
        sub->add_option("--seed", seed_value, "seed for the random initial-data generator")
            ->each([&](const std::string&) { seed_given = true; });
        sub->add_flag("--wrong-sign", flags.wrong_sign,
                      "debug: flip the transport divergence sign in model_residual");
    };

    auto* sim = app.add_subcommand("simulate", "run one configured flow, emit CSVs");
    sim->add_option("--config", config_path, "scenario JSON")->required();
    add_common(sim);

    auto* ver = app.add_subcommand("verify", "run identity/inequality checks");
    ver->add_option("--config", config_path, "scenario JSON with a checks list");
    ver->add_option("--suite", suite, "named suite (default)");
    ver->add_option("--only", only, "run a single check by id/label");
    add_common(ver);

    auto* ref = app.add_subcommand("reference", "sample the Gaussian reference model");
    std::string c_text = "1";
    int m = 1;
    double u0 = 1.0, up0 = 0.0, beta0 = 0.0, t_end = 1.0, dt = 1e-3;
    std::string ref_out = "reference.csv";
    ref->add_option("--c", c_text, "coupling c (number, 0, or inf)");
    ref->add_option("--m", m, "model dimension");
    ref->add_option("--u0", u0, "u(0)");
    ref->add_option("--up0", up0, "u'(0)");
    ref->add_option("--beta0", beta0, "beta(0)");
    ref->add_option("--t-end", t_end, "sampling horizon");
    ref->add_option("--dt", dt, "sampling step");
    ref->add_option("--out", ref_out, "output CSV path");

    CLI11_PARSE(app, argc, argv);
    if (seed_given) flags.seed = seed_value;
    flags.out_dir = out_dir;

    if (sim->parsed()) return ottolab::cmd_simulate(config_path, flags, std::cout);
    if (ver->parsed()) {
        const std::string effective_suite = config_path.empty() ? suite : "";
        return ottolab::cmd_verify(config_path, config_path.empty() ? suite : effective_suite,
                                   only, flags, std::cout);
    }
    if (ref->parsed())
        return ottolab::cmd_reference(c_text, m, u0, up0, beta0, t_end, dt, ref_out, std::cout);
    return 0;
}
