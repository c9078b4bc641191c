#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cavsim/params.hpp"

namespace cavsim {

// Full run configuration: physical keys plus run-specific keys, parsed from
// one flat key=value file.  Unknown keys are rejected.
struct SimConfig {
    PhysicalParams physical;

    double integrator_tol = 1e-10;
    int threads = 0;  // 0 -> SIM_THREADS env or hardware

    // rates subcommand
    int rates_n_min = 0;
    int rates_n_max = 30;
    double rates_delta_min = -constants::two_pi * 3e6;  // rad/s
    double rates_delta_max = constants::two_pi * 3e6;
    int rates_delta_points = 121;
    double rates_clip = constants::two_pi * 1e6;  // rad/s; display clip
    bool rates_clip_enabled = true;

    // squeeze / optimize subcommands
    double squeeze_delta_min = constants::two_pi * 0.05e6;
    double squeeze_delta_max = constants::two_pi * 8e6;
    int squeeze_delta_points = 160;
    double squeeze_t_min = 1e-6;
    double squeeze_t_max = 2e-3;
    int squeeze_t_points = 96;

    // validate subcommand
    double validity_threshold = 0.1;

    // evolve subcommand
    std::string evolve_tier = "dicke";  // org | af | atom | dicke
    double evolve_t_max = 1e-4;
    int evolve_points = 41;
    int evolve_photon_cutoff = 4;
    int evolve_window_n_min = -1;
    int evolve_window_n_max = 2;

    std::string config_hash;  // FNV-1a of the canonicalized key=value text

    static SimConfig from_file(const std::string& path);
    static SimConfig from_text(const std::string& text);
};

// Subcommand drivers; each writes its artifacts under out_dir and returns a
// process exit code (0 ok, 1 validation failure, 2 config error, 3 numerical
// failure).
int cmd_rates(const SimConfig& cfg, const std::string& out_dir);
int cmd_squeeze(const SimConfig& cfg, const std::string& out_dir);
int cmd_validate(const SimConfig& cfg, const std::string& out_dir);
int cmd_evolve(const SimConfig& cfg, const std::string& out_dir);
int cmd_optimize(const SimConfig& cfg, const std::string& out_dir);

}  // namespace cavsim
