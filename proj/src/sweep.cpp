#include "cavsim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cavsim/lattice.hpp"
#include "cavsim/lindblad.hpp"
#include "cavsim/reference.hpp"
#include "cavsim/response.hpp"
#include "cavsim/spin.hpp"
#include "cavsim/util.hpp"

namespace cavsim {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "g_hz", "kappa_hz", "gamma_hz", "eta_hz", "delta_a_hz", "delta_c_hz",
        "delta_c_prime_hz", "lambda_nm", "mass_amu", "n_atoms", "n0",
        "dispersive_guard", "integrator_tol", "threads",
        "rates_n_min", "rates_n_max", "rates_delta_min_hz", "rates_delta_max_hz",
        "rates_delta_points", "rates_clip_hz", "rates_clip_enabled",
        "squeeze_delta_min_hz", "squeeze_delta_max_hz", "squeeze_delta_points",
        "squeeze_t_min_s", "squeeze_t_max_s", "squeeze_t_points",
        "validity_threshold",
        "evolve_tier", "evolve_t_max_s", "evolve_points", "evolve_photon_cutoff",
        "evolve_window_n_min", "evolve_window_n_max",
    };
    return keys;
}

double get_num(const std::map<std::string, std::string>& kv, const std::string& key,
               double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size())
        throw std::invalid_argument("config: bad number for '" + key + "'");
    return v;
}

int get_int(const std::map<std::string, std::string>& kv, const std::string& key,
            int fallback) {
    const double v = get_num(kv, key, fallback);
    if (v != std::floor(v))
        throw std::invalid_argument("config: key '" + key + "' must be an integer");
    return int(v);
}

std::string canonical_text(const std::map<std::string, std::string>& kv) {
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::ofstream open_out(const std::string& out_dir, const std::string& name) {
    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/" + name;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    return f;
}

}  // namespace

SimConfig SimConfig::from_text(const std::string& text) {
    const auto kv = parse_key_value_text(text);
    for (const auto& [k, v] : kv)
        if (!known_keys().count(k))
            throw std::invalid_argument("config: unknown key '" + k + "'");

    SimConfig c;
    c.physical = params_from_config(kv);
    c.config_hash = hash_hex(fnv1a(canonical_text(kv)));

    c.integrator_tol = get_num(kv, "integrator_tol", c.integrator_tol);
    c.threads = get_int(kv, "threads", c.threads);

    c.rates_n_min = get_int(kv, "rates_n_min", c.rates_n_min);
    c.rates_n_max = get_int(kv, "rates_n_max", c.rates_n_max);
    c.rates_delta_min =
        constants::two_pi * get_num(kv, "rates_delta_min_hz", c.rates_delta_min / constants::two_pi);
    c.rates_delta_max =
        constants::two_pi * get_num(kv, "rates_delta_max_hz", c.rates_delta_max / constants::two_pi);
    c.rates_delta_points = get_int(kv, "rates_delta_points", c.rates_delta_points);
    c.rates_clip = constants::two_pi * get_num(kv, "rates_clip_hz", c.rates_clip / constants::two_pi);
    c.rates_clip_enabled = get_int(kv, "rates_clip_enabled", c.rates_clip_enabled ? 1 : 0) != 0;

    c.squeeze_delta_min = constants::two_pi *
        get_num(kv, "squeeze_delta_min_hz", c.squeeze_delta_min / constants::two_pi);
    c.squeeze_delta_max = constants::two_pi *
        get_num(kv, "squeeze_delta_max_hz", c.squeeze_delta_max / constants::two_pi);
    c.squeeze_delta_points = get_int(kv, "squeeze_delta_points", c.squeeze_delta_points);
    c.squeeze_t_min = get_num(kv, "squeeze_t_min_s", c.squeeze_t_min);
    c.squeeze_t_max = get_num(kv, "squeeze_t_max_s", c.squeeze_t_max);
    c.squeeze_t_points = get_int(kv, "squeeze_t_points", c.squeeze_t_points);

    c.validity_threshold = get_num(kv, "validity_threshold", c.validity_threshold);

    if (kv.count("evolve_tier")) c.evolve_tier = kv.at("evolve_tier");
    c.evolve_t_max = get_num(kv, "evolve_t_max_s", c.evolve_t_max);
    c.evolve_points = get_int(kv, "evolve_points", c.evolve_points);
    c.evolve_photon_cutoff = get_int(kv, "evolve_photon_cutoff", c.evolve_photon_cutoff);
    c.evolve_window_n_min = get_int(kv, "evolve_window_n_min", c.evolve_window_n_min);
    c.evolve_window_n_max = get_int(kv, "evolve_window_n_max", c.evolve_window_n_max);

    // range sanity
    if (c.rates_n_max < c.rates_n_min || c.rates_delta_points < 1 ||
        c.squeeze_delta_points < 2 || c.squeeze_t_points < 2 ||
        !(c.squeeze_t_max > c.squeeze_t_min) ||
        !(c.squeeze_delta_max > c.squeeze_delta_min) || c.evolve_points < 2)
        throw std::invalid_argument("config: empty or degenerate range");
    return c;
}

SimConfig SimConfig::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return from_text(ss.str());
}

int cmd_rates(const SimConfig& cfg, const std::string& out_dir) {
    const DerivedQuantities d = derive_quantities(cfg.physical);
    const RateGrid grid =
        rate_grid(cfg.rates_n_min, cfg.rates_n_max, cfg.rates_delta_min,
                  cfg.rates_delta_max, cfg.rates_delta_points, d, cfg.threads);

    auto csv = open_out(out_dir, "rates.csv");
    csv << "# config_hash=" << cfg.config_hash << " artifact_version=" << artifact_version
        << "\n";
    csv << "n,delta_c_prime_hz,chi_hz,zeta_hz\n";
    const double clip = cfg.rates_clip / constants::two_pi;
    for (const RateCell& cell : grid.cells) {
        double chi_hz = cell.chi / constants::two_pi;
        double zeta_hz = cell.zeta / constants::two_pi;
        if (cfg.rates_clip_enabled) {
            chi_hz = std::clamp(chi_hz, -clip, clip);
            zeta_hz = std::clamp(zeta_hz, -clip, clip);
        }
        csv << cell.n << ',' << format_sci(cell.delta_c_prime / constants::two_pi) << ','
            << format_sci(chi_hz) << ',' << format_sci(zeta_hz) << "\n";
    }

    // ridge summary: per n, the |chi| argmax over delta (unclipped values)
    nlohmann::ordered_json j;
    j["config_hash"] = cfg.config_hash;
    j["artifact_version"] = artifact_version;
    j["ridges"] = nlohmann::ordered_json::array();
    const std::size_t nd = grid.delta_values.size();
    for (std::size_t row = 0; row < grid.n_values.size(); ++row) {
        double best = -1.0;
        std::size_t best_j = 0;
        for (std::size_t k = 0; k < nd; ++k) {
            const double v = std::abs(grid.cells[row * nd + k].chi);
            if (v > best) {
                best = v;
                best_j = k;
            }
        }
        const int n = grid.n_values[row];
        const double gap_up = kinetic_energy(n + 1, d) - kinetic_energy(n, d);
        nlohmann::ordered_json r;
        r["n"] = n;
        r["ridge_delta_hz"] = grid.delta_values[best_j] / constants::two_pi;
        r["abs_chi_hz"] = best / constants::two_pi;
        r["resonance_minus_hz"] = -gap_up / constants::two_pi;
        r["resonance_plus_hz"] = gap_up / constants::two_pi;
        r["asymptotic_hz"] =
            8.0 * (n - cfg.physical.n0) * d.omega_r / constants::two_pi;
        j["ridges"].push_back(r);
    }
    open_out(out_dir, "rates_ridges.json") << j.dump(2) << "\n";
    return 0;
}

int cmd_squeeze(const SimConfig& cfg, const std::string& out_dir) {
    const DerivedQuantities d = derive_quantities(cfg.physical);
    const int n_atoms = cfg.physical.n_atoms;

    // Fig-4(a)-style rate table vs delta (positive branch range from config)
    {
        auto csv = open_out(out_dir, "squeeze_rates.csv");
        csv << "# config_hash=" << cfg.config_hash
            << " artifact_version=" << artifact_version << "\n";
        csv << "delta_c_prime_hz,gamma_l_hz,n_gamma_c_hz,n_abs_chi_hz\n";
        for (int i = 0; i < cfg.squeeze_delta_points; ++i) {
            const double delta = cfg.squeeze_delta_min +
                                 (cfg.squeeze_delta_max - cfg.squeeze_delta_min) * i /
                                     double(cfg.squeeze_delta_points - 1);
            const DerivedQuantities dd = with_delta_c_prime(d, delta);
            const TwoLevelRates r = two_level_rates(dd);
            csv << format_sci(delta / constants::two_pi) << ','
                << format_sci(r.decay.gamma_l / constants::two_pi) << ','
                << format_sci(n_atoms * r.decay.gamma_c / constants::two_pi) << ','
                << format_sci(n_atoms * std::abs(r.chi) / constants::two_pi) << "\n";
        }
    }

    // xi^2(t, delta) map
    {
        auto csv = open_out(out_dir, "squeeze_map.csv");
        csv << "# config_hash=" << cfg.config_hash
            << " artifact_version=" << artifact_version << "\n";
        csv << "t_s,delta_c_prime_hz,xi2,term_coherent,term_single,term_collective\n";
        std::vector<std::string> rows(cfg.squeeze_delta_points);
        parallel_for(cfg.squeeze_delta_points, cfg.threads, [&](std::size_t i) {
            const double delta = cfg.squeeze_delta_min +
                                 (cfg.squeeze_delta_max - cfg.squeeze_delta_min) *
                                     double(i) / double(cfg.squeeze_delta_points - 1);
            const DerivedQuantities dd = with_delta_c_prime(d, delta);
            std::string block;
            for (int jt = 0; jt < cfg.squeeze_t_points; ++jt) {
                const double t = cfg.squeeze_t_min *
                                 std::pow(cfg.squeeze_t_max / cfg.squeeze_t_min,
                                          jt / double(cfg.squeeze_t_points - 1));
                const SqueezingResult s = xi2_closed_form(t, dd, n_atoms);
                block += format_sci(t);
                block += ',';
                block += format_sci(delta / constants::two_pi);
                block += ',';
                block += format_sci(s.xi2);
                block += ',';
                block += format_sci(s.term_coherent);
                block += ',';
                block += format_sci(s.term_single);
                block += ',';
                block += format_sci(s.term_collective);
                block += '\n';
            }
            rows[i] = std::move(block);
        });
        for (const auto& r : rows) csv << r;
    }

    // optimizer + balanced-decoherence marker
    OptimizeOptions oo;
    oo.delta_min = cfg.squeeze_delta_min;
    oo.delta_max = cfg.squeeze_delta_max;
    oo.delta_points = cfg.squeeze_delta_points;
    oo.t_min = cfg.squeeze_t_min;
    oo.t_max = cfg.squeeze_t_max;
    oo.t_points = cfg.squeeze_t_points;
    const OptimizeResult opt = optimize(d, n_atoms, oo);

    nlohmann::ordered_json j;
    j["config_hash"] = cfg.config_hash;
    j["artifact_version"] = artifact_version;
    j["t_opt_s"] = opt.t_opt;
    j["delta_opt_hz"] = opt.delta_opt / constants::two_pi;
    j["xi2_opt"] = opt.xi2_opt;
    j["t_asym_s"] = opt.t_asym;
    j["delta_asym_hz"] = opt.delta_asym / constants::two_pi;
    j["xi2_asym"] = opt.xi2_asym;
    j["xi2_asym_cooperativity"] = opt.xi2_asym_coop;
    j["gap_t"] = opt.gap_t;
    j["gap_delta"] = opt.gap_delta;
    j["gap_xi2"] = opt.gap_xi2;
    try {
        const double bal =
            balanced_detuning(d, cfg.squeeze_delta_min, cfg.squeeze_delta_max);
        j["balanced_delta_hz"] = bal / constants::two_pi;
    } catch (const std::exception& e) {
        j["balanced_delta_hz"] = nullptr;
        j["balanced_delta_error"] = e.what();
    }
    open_out(out_dir, "squeeze_optimum.json") << j.dump(2) << "\n";
    return 0;
}

int cmd_validate(const SimConfig& cfg, const std::string& out_dir) {
    const DerivedQuantities d = derive_quantities(cfg.physical);
    nlohmann::ordered_json j;
    j["config_hash"] = cfg.config_hash;
    j["artifact_version"] = artifact_version;

    bool all_pass = true;

    // 1. two-level validity margins at the configured operating point
    const ValidityReport vr = validity_check(d, cfg.validity_threshold);
    j["validity"] = nlohmann::ordered_json::parse(vr.to_json());
    all_pass = all_pass && vr.pass;

    // 2. excited-state elimination scaling
    {
        const auto reports = compare_excited_state_elimination({});
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        bool monotone = true;
        for (std::size_t i = 0; i + 1 < reports.size(); ++i)
            monotone = monotone && reports[i].max_dev > reports[i + 1].max_dev;
        const double slope = reports.front().slope;
        for (const auto& r : reports) arr.push_back(nlohmann::ordered_json::parse(r.to_json_line()));
        const bool pass = monotone && slope > 0.7 && slope < 1.3;
        j["excited_state_elimination"] = {{"reports", arr},
                                          {"slope", slope},
                                          {"monotone", monotone},
                                          {"pass", pass}};
        all_pass = all_pass && pass;
    }

    // 3. cavity elimination scaling
    {
        const auto reports = compare_cavity_elimination({});
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : reports) arr.push_back(nlohmann::ordered_json::parse(r.to_json_line()));
        const double slope = reports.front().slope;
        const bool pass = slope > 0.5 && slope < 1.5;
        j["cavity_elimination"] = {{"reports", arr}, {"slope", slope}, {"pass", pass}};
        all_pass = all_pass && pass;
    }

    // 4. exact-vs-analytic closed-system moments (N = 20)
    {
        const int n = 20;
        const double chi0 = 1.0;
        const DickeOps ops = dicke_ops(n);
        const SparseOperator h =
            ops.jz.times(ops.jz).symmetrized().scaled(chi0).symmetrized();
        Liouvillian liou(h, {});
        std::vector<double> t_grid;
        for (int i = 0; i <= 5; ++i) t_grid.push_back(1e-9 + 0.01 * i);
        IntegratorOptions io;
        io.rtol = cfg.integrator_tol;
        io.atol = cfg.integrator_tol * 1e-2;
        const IntegrationResult res =
            integrate(liou, DensityMatrix::pure(css_x(n)), t_grid, io);
        double worst = 0.0;
        const double s2 = 0.25 * n * n;
        for (const auto& st : res.states) {
            const MomentSet ms = moments_from_state(st, ops);
            const MomentSet an = analytic_moments(st.t, n, chi0, 0.0, 0.0, 0.0);
            worst = std::max({worst, std::abs(ms.var_jy - an.var_jy) / s2,
                              std::abs(ms.var_jz - an.var_jz) / s2,
                              std::abs(ms.cross - an.cross) / s2});
        }
        const bool pass = worst < 1e-8;
        j["oat_moments"] = {{"max_abs_dev_s2_units", worst}, {"pass", pass}};
        all_pass = all_pass && pass;
    }

    j["pass"] = all_pass;
    open_out(out_dir, "validate.json") << j.dump(2) << "\n";
    return all_pass ? 0 : 1;
}

int cmd_evolve(const SimConfig& cfg, const std::string& out_dir) {
    const DerivedQuantities d = derive_quantities(cfg.physical);
    std::vector<double> t_grid;
    for (int i = 0; i < cfg.evolve_points; ++i)
        t_grid.push_back(cfg.evolve_t_max * i / double(cfg.evolve_points - 1));
    IntegratorOptions io;
    io.rtol = cfg.integrator_tol;
    io.atol = cfg.integrator_tol * 1e-2;

    struct Track {
        std::string label;
        std::vector<cxd> values;
    };
    std::vector<Track> tracks;

    if (cfg.evolve_tier == "dicke") {
        const int n = cfg.physical.n_atoms;
        if (n > 512)
            throw std::invalid_argument("evolve: dicke tier capped at N = 512");
        const DickeOps ops = dicke_ops(n);
        const TwoLevelRates r = two_level_rates(d);
        const OatModel oat = build_h_oat(r, n);
        Liouvillian liou(oat.h, oat.jumps);
        const IntegrationResult res =
            integrate(liou, DensityMatrix::pure(css_x(n)), t_grid, io);
        tracks = {{"var_jy", {}}, {"var_jz", {}}, {"cross_yz", {}}, {"mean_jx", {}}};
        for (const auto& st : res.states) {
            const MomentSet m = moments_from_state(st, ops);
            tracks[0].values.push_back(m.var_jy);
            tracks[1].values.push_back(m.var_jz);
            tracks[2].values.push_back(m.cross);
            tracks[3].values.push_back(m.mean_jx);
        }
    } else if (cfg.evolve_tier == "atom") {
        SymmetricFockBasis basis(cfg.physical.n_atoms, cfg.evolve_window_n_min,
                                 cfg.evolve_window_n_max);
        const SparseOperator h = build_h_atom(basis, d);
        std::vector<JumpChannel> jumps;
        jumps.push_back({build_alpha_jump(basis, d), "cavity_response"});
        Liouvillian liou(h, std::move(jumps));
        const CVector psi = basis.product_state({{0, 1.0}, {1, 1.0}});
        const IntegrationResult res = integrate(liou, DensityMatrix::pure(psi), t_grid, io);
        for (int n = basis.n_min(); n <= basis.n_max(); ++n)
            tracks.push_back({"population_n" + std::to_string(n), {}});
        tracks.push_back({"grating_coherence", {}});
        const SparseOperator coh = basis.hop(0, 1);
        for (const auto& st : res.states) {
            int k = 0;
            for (int n = basis.n_min(); n <= basis.n_max(); ++n, ++k)
                tracks[k].values.push_back(basis.number_op(n).expectation(st.rho));
            tracks[k].values.push_back(coh.expectation(st.rho));
        }
    } else if (cfg.evolve_tier == "af" || cfg.evolve_tier == "org") {
        // small exact reference tiers, unit-scaled to the physical parameters
        if (cfg.evolve_tier == "af") {
            AfParams ap;
            ap.n_atoms = cfg.physical.n_atoms;
            ap.photon_cutoff = cfg.evolve_photon_cutoff;
            ap.n_min = cfg.evolve_window_n_min;
            ap.n_max = cfg.evolve_window_n_max;
            ap.u0 = d.u0;
            ap.delta_c_prime = d.delta_c_prime;
            ap.eta = cfg.physical.eta;
            ap.kappa = cfg.physical.kappa;
            ap.omega_r = d.omega_r;
            ap.n0 = cfg.physical.n0;
            AfModel model(ap);
            Liouvillian liou(model.hamiltonian(), model.jumps());
            const IntegrationResult res =
                integrate(liou, model.initial_density(d.beta), t_grid, io);
            for (int n = ap.n_min; n <= ap.n_max; ++n)
                tracks.push_back({"population_n" + std::to_string(n), {}});
            for (const auto& st : res.states) {
                const std::vector<double> p = model.mode_populations(st.rho);
                for (std::size_t k = 0; k < p.size(); ++k)
                    tracks[k].values.push_back(p[k]);
            }
        } else {
            OrgParams op;
            op.n_atoms = cfg.physical.n_atoms;
            op.photon_cutoff = cfg.evolve_photon_cutoff;
            op.fine_sites = 5;
            op.g = cfg.physical.g;
            op.delta_a = cfg.physical.delta_a;
            op.delta_c = d.delta_c_prime + cfg.physical.n_atoms * d.u0;
            op.eta = cfg.physical.eta;
            op.kappa = cfg.physical.kappa;
            op.omega_r = d.omega_r;
            OrgModel model(op);
            const WaveIntegrationResult res =
                integrate_state(model.hamiltonian(), model.initial_state(d.beta), t_grid, io);
            const int nc = model.n_coarse_modes();
            for (int c = 0; c < nc; ++c)
                tracks.push_back({"population_n" + std::to_string(c - nc / 2), {}});
            tracks.push_back({"odd_site_population", {}});
            tracks.push_back({"excited_population", {}});
            for (const auto& psi : res.states) {
                const std::vector<double> p = model.coarse_populations(psi);
                for (std::size_t k = 0; k < p.size(); ++k)
                    tracks[k].values.push_back(p[k]);
                tracks[p.size()].values.push_back(model.odd_site_population(psi));
                tracks[p.size() + 1].values.push_back(model.excited_population(psi));
            }
        }
    } else {
        throw std::invalid_argument("evolve: unknown tier '" + cfg.evolve_tier + "'");
    }

    auto csv = open_out(out_dir, "evolve.csv");
    csv << "# config_hash=" << cfg.config_hash << " artifact_version=" << artifact_version
        << " tier=" << cfg.evolve_tier << "\n";
    csv << "t_s,observable_label,value_re,value_im\n";
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        for (const auto& tr : tracks)
            csv << format_sci(t_grid[i]) << ',' << tr.label << ','
                << format_sci(tr.values[i].real()) << ',' << format_sci(tr.values[i].imag())
                << "\n";
    return 0;
}

int cmd_optimize(const SimConfig& cfg, const std::string& out_dir) {
    const DerivedQuantities d = derive_quantities(cfg.physical);
    OptimizeOptions oo;
    oo.delta_min = cfg.squeeze_delta_min;
    oo.delta_max = cfg.squeeze_delta_max;
    oo.delta_points = cfg.squeeze_delta_points;
    oo.t_min = cfg.squeeze_t_min;
    oo.t_max = cfg.squeeze_t_max;
    oo.t_points = cfg.squeeze_t_points;
    const OptimizeResult opt = optimize(d, cfg.physical.n_atoms, oo);

    nlohmann::ordered_json j;
    j["config_hash"] = cfg.config_hash;
    j["artifact_version"] = artifact_version;
    j["t_opt_s"] = opt.t_opt;
    j["delta_opt_hz"] = opt.delta_opt / constants::two_pi;
    j["xi2_opt"] = opt.xi2_opt;
    j["t_asym_s"] = opt.t_asym;
    j["delta_asym_hz"] = opt.delta_asym / constants::two_pi;
    j["xi2_asym"] = opt.xi2_asym;
    j["xi2_asym_cooperativity"] = opt.xi2_asym_coop;
    j["gap_t"] = opt.gap_t;
    j["gap_delta"] = opt.gap_delta;
    j["gap_xi2"] = opt.gap_xi2;
    open_out(out_dir, "optimize.json") << j.dump(2) << "\n";
    return 0;
}

}  // namespace cavsim
