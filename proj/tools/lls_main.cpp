#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lls/config.hpp"
#include "lls/errors.hpp"
#include "lls/sim.hpp"
#include "lls/validation.hpp"

namespace {

int cmd_simulate(const std::string& config_path, const std::string& outdir,
                 const std::vector<std::string>& overrides, bool verbose) {
    lls::ConfigFile cfg = lls::ConfigFile::parse_file(config_path);
    for (const auto& kv : overrides) cfg.set_override(kv);
    const lls::ScenarioConfig scenario = lls::scenario_from_config(cfg);

    const lls::RunResult run = lls::run_scenario(scenario);
    const lls::Metrics m = lls::metrics(run, scenario);

    std::filesystem::create_directories(outdir);
    lls::write_trace_csv(outdir + "/trace.csv", run.trace);
    lls::write_summary_json(outdir + "/summary.json", run, m, scenario);
    if (!run.trajectory.empty())
        lls::write_trajectory_csv(outdir + "/trajectory.csv", run.trajectory);

    if (verbose) {
        for (const auto& r : run.trace)
            std::printf("stance %3d  t=%.4fs  rho=%.6f  alpha=%.4f  b=%.4f  %s\n", r.stance,
                        r.time, r.rho, r.alpha, r.b, r.fallback ? "approx" : "exact");
    }
    std::printf("stances: %zu  converged: %s", run.trace.size(), run.converged ? "yes" : "no");
    if (run.converged)
        std::printf(" (stance %d, t=%.3fs)", run.stances_to_converge, run.time_to_converge);
    std::printf("  final |rho-rho_c|: %.3g m\n", m.final_error);
    std::printf("wrote %s/trace.csv and %s/summary.json\n", outdir.c_str(), outdir.c_str());

    if (m.max_theta_residual > 1e-8) {
        std::fprintf(stderr, "error: stance-pair angle relation residual %.3g exceeds 1e-8\n",
                     m.max_theta_residual);
        return 2;
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& outdir) {
    const lls::ConfigFile cfg = lls::ConfigFile::parse_file(config_path);
    const lls::SweepSpec sp = lls::sweep_from_config(cfg);

    std::filesystem::create_directories(outdir);
    const auto fig5 = lls::sweep_tables(sp.legs, sp.fig5_grid, sp.b_fixed, sp.q_hold, sp.v);
    const auto fig6 = lls::sweep_tables(sp.legs, sp.fig6_grid, sp.b_fixed, sp.q_hold, sp.v);

    {
        std::ofstream f(outdir + "/fig5_q_of_alpha.csv");
        if (!f) throw lls::IoError("cannot open fig5 output");
        f.precision(17);
        f << "alpha_rad,q_m\n";
        for (const auto& r : fig5) f << r.alpha << ',' << r.q << '\n';
    }
    {
        std::ofstream f(outdir + "/fig6_b_for_q.csv");
        if (!f) throw lls::IoError("cannot open fig6 output");
        f.precision(17);
        f << "alpha_rad,b_N_per_m\n";
        for (const auto& r : fig6) f << r.alpha << ',' << r.b << '\n';
    }
    {
        std::ofstream f(outdir + "/fig4_chord_locus.csv");
        if (!f) throw lls::IoError("cannot open fig4 output");
        f.precision(17);
        f << "alpha_rad,chord_x_m,chord_y_m\n";
        for (const auto& r : fig5) f << r.alpha << ',' << r.chord_x << ',' << r.chord_y << '\n';
    }
    std::printf("wrote %zu fig5 rows, %zu fig6 rows to %s\n", fig5.size(), fig6.size(),
                outdir.c_str());
    return 0;
}

int cmd_validate(const std::string& suite) {
    std::vector<std::string> names;
    if (suite == "all") names = lls::validation::suite_names();
    else names.push_back(suite);

    bool all_pass = true;
    for (const auto& name : names) {
        const lls::validation::SuiteResult res = lls::validation::run_suite(name);
        for (const auto& c : res.checks) {
            std::printf("%-4s %s: %s (measured %.3g, limit %.3g)\n", c.pass ? "ok" : "FAIL",
                        res.suite.c_str(), c.name.c_str(), c.measured, c.limit);
            all_pass = all_pass && c.pass;
        }
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lateral-leg-spring curve tracking simulator"};
    app.require_subcommand(1);

    std::string config_path, outdir = "out", suite;
    std::vector<std::string> overrides;
    bool verbose = false;

    auto* sim = app.add_subcommand("simulate", "run a scenario and write trace + summary");
    sim->add_option("config", config_path, "scenario config file")->required();
    sim->add_option("-o,--out", outdir, "output directory");
    sim->add_option("--set", overrides, "override config values (section.key=value)");
    sim->add_flag("-v,--verbose", verbose, "print per-stance lines");

    auto* sweep = app.add_subcommand("sweep", "write chord/spring tables over alpha");
    sweep->add_option("config", config_path, "sweep config file")->required();
    sweep->add_option("-o,--out", outdir, "output directory");

    auto* validate = app.add_subcommand("validate", "run a validation suite");
    validate->add_option("suite", suite, "suite name or 'all'")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path, outdir, overrides, verbose);
        if (sweep->parsed()) return cmd_sweep(config_path, outdir);
        if (validate->parsed()) return cmd_validate(suite);
    } catch (const lls::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const lls::UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const lls::Error& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
