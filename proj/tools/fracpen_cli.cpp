// Command-line harness for the penalized fractional-diffusion benchmark.
//
//   fracpen --mode convergence-table --kx 1 --n 32 --n 64 --n 128 --out table1.csv
//   fracpen --config sweep.cfg --eta 1e-6        (flags override the file)

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracpen/experiment.hpp"

int main(int argc, char** argv)
{
    using fracpen::apply_setting;

    CLI::App app{"Sine-transform preconditioned GMRES for penalized 2-D Riesz fractional diffusion"};

    std::string config_path;
    std::string mode;
    std::string alpha1, alpha2, kx, ky, a, b, t_final, m_rule, restart, rtol, maxiter, side, residual_ref;
    std::string out, format, dump_dense, dense_cap;
    std::vector<std::string> n_values;
    std::vector<std::string> etas;
    bool no_precond = false;

    app.add_option("--config", config_path, "key = value file; every flag has a matching key");
    app.add_option("--mode", mode, "solve | spectrum | penalty-scan | convergence-table");
    app.add_option("--alpha1", alpha1, "fractional order in x, in (1,2)");
    app.add_option("--alpha2", alpha2, "fractional order in y, in (1,2)");
    app.add_option("--kx", kx, "diffusivity in x");
    app.add_option("--ky", ky, "diffusivity in y");
    app.add_option("--a", a, "ellipse semi-axis in x");
    app.add_option("--b", b, "ellipse semi-axis in y");
    app.add_option("--n", n_values, "interior points per axis (repeatable)");
    app.add_option("--m-rule", m_rule, "eq-n | 10n | explicit:<int>");
    app.add_option("--T", t_final, "final time");
    app.add_option("--eta", etas, "penalization parameter (repeatable)");
    app.add_option("--restart", restart, "GMRES restart length");
    app.add_option("--rtol", rtol, "relative residual tolerance");
    app.add_option("--maxiter", maxiter, "total GMRES iteration cap per step");
    app.add_flag("--no-precond", no_precond, "run plain GMRES");
    app.add_option("--side", side, "preconditioning side: left | right");
    app.add_option("--residual-ref", residual_ref, "stopping-test denominator: rhs | r0");
    app.add_option("--out", out, "output table path");
    app.add_option("--format", format, "csv | json");
    app.add_option("--dump-dense", dump_dense, "write dense M for the first n (size-capped)");
    app.add_option("--dense-cap", dense_cap, "largest n1*n2 for dense work (default 4096)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : fracpen::kExitUsage;
    }

    fracpen::ExperimentConfig cfg;
    try {
        if (!config_path.empty()) {
            fracpen::load_config_file(cfg, config_path);
        }
        const auto set = [&](const char* key, const std::string& value) {
            if (app.count(std::string("--") + key) > 0) {
                apply_setting(cfg, key, value);
            }
        };
        set("mode", mode);
        set("alpha1", alpha1);
        set("alpha2", alpha2);
        set("kx", kx);
        set("ky", ky);
        set("a", a);
        set("b", b);
        set("m-rule", m_rule);
        set("T", t_final);
        set("restart", restart);
        set("rtol", rtol);
        set("maxiter", maxiter);
        set("side", side);
        set("residual-ref", residual_ref);
        set("out", out);
        set("format", format);
        set("dump-dense", dump_dense);
        set("dense-cap", dense_cap);
        if (no_precond) {
            apply_setting(cfg, "no-precond", "true");
        }
        if (!n_values.empty()) {
            cfg.n_values.clear();
            for (const auto& n : n_values) {
                apply_setting(cfg, "n", n);
            }
        }
        if (!etas.empty()) {
            cfg.etas.clear();
            for (const auto& eta : etas) {
                apply_setting(cfg, "eta", eta);
            }
        }
    } catch (const fracpen::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return fracpen::kExitUsage;
    }

    const auto outcome = fracpen::run_experiment(cfg);
    if (outcome.exit_code != fracpen::kExitOk) {
        std::cerr << "fracpen: " << outcome.message << '\n';
    }
    if (cfg.out_path.empty() && !outcome.table.columns.empty()) {
        fracpen::write_csv(std::cout, outcome.table);
    }
    return outcome.exit_code;
}
