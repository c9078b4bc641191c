#include "cavsim/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cavsim {

void PhysicalParams::validate() const {
    if (!(kappa > 0.0)) throw std::invalid_argument("params: kappa must be > 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("params: gamma must be > 0");
    if (!(mass > 0.0)) throw std::invalid_argument("params: mass must be > 0");
    if (!(lambda > 0.0)) throw std::invalid_argument("params: lambda must be > 0");
    if (n_atoms < 1) throw std::invalid_argument("params: n_atoms must be >= 1");
    if (!delta_c && !delta_c_prime)
        throw std::invalid_argument("params: need delta_c or delta_c_prime");
    if (std::abs(delta_a) <= dispersive_guard * std::sqrt(double(n_atoms)) * g)
        throw std::invalid_argument(
            "params: |delta_a| <= guard*sqrt(N)*g; outside the dispersive regime "
            "the adiabatic elimination behind this model does not apply");
}

std::complex<double> injected_field(double eta, double delta_c_prime, double kappa) {
    return eta / std::complex<double>(-delta_c_prime, kappa / 2.0);
}

DerivedQuantities derive_quantities(const PhysicalParams& p) {
    p.validate();
    DerivedQuantities d;
    d.params = p;
    d.k = constants::two_pi / p.lambda;
    d.omega_r = constants::hbar * d.k * d.k / (2.0 * p.mass);
    d.u0 = (p.delta_a / 2.0) * p.g * p.g / (p.delta_a * p.delta_a + p.gamma * p.gamma / 4.0);
    d.delta_c_prime = p.delta_c_prime ? *p.delta_c_prime
                                      : *p.delta_c - double(p.n_atoms) * d.u0;
    d.beta = injected_field(p.eta, d.delta_c_prime, p.kappa);
    d.omega_z = 4.0 * d.omega_r * ((1.0 - p.n0) * (1.0 - p.n0) - p.n0 * p.n0);
    d.c1 = 4.0 * p.g * p.g / (p.gamma * p.kappa);
    return d;
}

double kinetic_energy(double n, const DerivedQuantities& d) {
    const double dn = n - d.params.n0;
    return 4.0 * d.omega_r * dn * dn;
}

double kinetic_energy(int n, const DerivedQuantities& d) {
    return kinetic_energy(double(n), d);
}

DerivedQuantities with_delta_c_prime(const DerivedQuantities& d, double delta_c_prime) {
    DerivedQuantities out = d;
    out.delta_c_prime = delta_c_prime;
    out.params.delta_c_prime = delta_c_prime;
    out.params.delta_c.reset();
    out.beta = injected_field(d.params.eta, delta_c_prime, d.params.kappa);
    return out;
}

DerivedQuantities synthetic_derived(double u0, double omega_r, double n0,
                                    double kappa, double eta, double delta_c_prime,
                                    double gamma, double delta_a, int n_atoms) {
    DerivedQuantities d;
    d.u0 = u0;
    d.omega_r = omega_r;
    d.delta_c_prime = delta_c_prime;
    d.beta = injected_field(eta, delta_c_prime, kappa);
    d.omega_z = 4.0 * omega_r * ((1.0 - n0) * (1.0 - n0) - n0 * n0);
    d.k = 0.0;
    d.c1 = 0.0;
    d.params.kappa = kappa;
    d.params.gamma = gamma;
    d.params.eta = eta;
    d.params.delta_a = delta_a;
    d.params.delta_c_prime = delta_c_prime;
    d.params.n_atoms = n_atoms;
    d.params.n0 = n0;
    return d;
}

std::map<std::string, std::string> parse_key_value_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": empty key or value");
        if (kv.count(key))
            throw std::invalid_argument("config: duplicate key '" + key + "'");
        kv[key] = val;
    }
    return kv;
}

std::map<std::string, std::string> parse_key_value_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_key_value_text(ss.str());
}

namespace {

double to_double(const std::string& key, const std::string& val) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(val, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' is not a number");
    }
    if (pos != val.size())
        throw std::invalid_argument("config: trailing junk after value of '" + key + "'");
    return x;
}

}  // namespace

PhysicalParams params_from_config(const std::map<std::string, std::string>& kv) {
    auto need = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw std::invalid_argument("config: missing required key '" + key + "'");
        return to_double(key, it->second);
    };
    auto maybe = [&](const std::string& key) -> std::optional<double> {
        const auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return to_double(key, it->second);
    };

    PhysicalParams p;
    p.g = constants::two_pi * need("g_hz");
    p.kappa = constants::two_pi * need("kappa_hz");
    p.gamma = constants::two_pi * need("gamma_hz");
    p.eta = constants::two_pi * need("eta_hz");
    p.delta_a = constants::two_pi * need("delta_a_hz");
    if (auto dc = maybe("delta_c_hz")) p.delta_c = constants::two_pi * *dc;
    if (auto dcp = maybe("delta_c_prime_hz")) p.delta_c_prime = constants::two_pi * *dcp;
    p.lambda = need("lambda_nm") * 1e-9;
    p.mass = need("mass_amu") * constants::amu;
    const double n_atoms = need("n_atoms");
    if (n_atoms != std::floor(n_atoms) || n_atoms < 1)
        throw std::invalid_argument("config: n_atoms must be a positive integer");
    p.n_atoms = int(n_atoms);
    p.n0 = need("n0");
    if (auto gd = maybe("dispersive_guard")) p.dispersive_guard = *gd;
    return p;
}

}  // namespace cavsim
