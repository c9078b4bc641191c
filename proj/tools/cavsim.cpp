// cavsim: cavity-mediated momentum-state dynamics and squeezing sweeps.
//
// Subcommands: rates, squeeze, validate, evolve, optimize.
// Exit codes: 0 success, 1 validation failure, 2 config error, 3 numerical
// failure.

#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "cavsim/sweep.hpp"

int main(int argc, char** argv) {
    CLI::App app{"cavity momentum-state squeezing simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    double tol = 0.0;
    int threads = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value config file")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--tol", tol, "integrator tolerance override");
        cmd->add_option("--threads", threads, "worker threads (0 = auto)");
    };

    CLI::App* rates = app.add_subcommand("rates", "nonlinear rate grid over (n, delta_c')");
    CLI::App* squeeze = app.add_subcommand("squeeze", "squeezing rates, xi^2 map, optimum");
    CLI::App* validate = app.add_subcommand("validate", "validity margins and elimination oracles");
    CLI::App* evolve = app.add_subcommand("evolve", "integrate a model tier and dump observables");
    CLI::App* optimize = app.add_subcommand("optimize", "optimal squeezing point only");
    for (CLI::App* c : {rates, squeeze, validate, evolve, optimize}) add_common(c);

    CLI11_PARSE(app, argc, argv);

    cavsim::SimConfig cfg;
    try {
        cfg = cavsim::SimConfig::from_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (tol > 0.0) cfg.integrator_tol = tol;
    if (threads > 0) cfg.threads = threads;

    try {
        if (rates->parsed()) return cavsim::cmd_rates(cfg, out_dir);
        if (squeeze->parsed()) return cavsim::cmd_squeeze(cfg, out_dir);
        if (validate->parsed()) return cavsim::cmd_validate(cfg, out_dir);
        if (evolve->parsed()) return cavsim::cmd_evolve(cfg, out_dir);
        if (optimize->parsed()) return cavsim::cmd_optimize(cfg, out_dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
