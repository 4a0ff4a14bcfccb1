#include "evfx/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace evfx {

std::size_t StudyConfig::coarse_block() const {
    if (block > 0) return block;
    return std::max<std::size_t>(1, dims[0] / 8);
}

ViscosityLaw StudyConfig::make_law() const {
    if (viscosity == "constant") return constant_viscosity(mu0, lambda0);
    if (viscosity == "affine") return affine_viscosity(mu0, mu_a, lambda0, lambda_b);
    if (viscosity == "power") return power_viscosity(mu0, mu_a, power_k, lambda0);
    throw std::invalid_argument("unknown viscosity law: " + viscosity);
}

SolverParams StudyConfig::solver_params() const {
    SolverParams p;
    p.pressure = PressureParams{A, gamma, delta, beta};
    p.law = make_law();
    p.mollifier_radius = mollifier_radius;
    p.eps = eps;
    p.cfl = cfl;
    p.dt_fixed = dt;
    p.t_end = t_end;
    p.rho_floor = rho_floor;
    return p;
}

State StudyConfig::build_initial(const SpectralWorkspace& ws, const MollifierField& kernel) const {
    const Grid g = grid();
    if (init_kind == "uniform") return initial_uniform(g, rho_bar, {});
    if (init_kind == "perturbed")
        return initial_perturbed(g, rho_bar, amplitude, velocity_amplitude);
    if (init_kind == "taylor-green") return initial_taylor_green(g, rho_bar, velocity_amplitude);
    if (init_kind == "delta-approx") {
        // rough base data with a genuine vacuum band
        ScalarField rho0 = sample(g, [&](const std::array<double, 3>& x) {
            return rho_bar * std::max(0.0, std::cos(2.0 * M_PI * x[0] / g.lengths[0]) - 0.3);
        });
        VectorField u(g);
        u[0] = sample(g, [&](const std::array<double, 3>& x) {
            return velocity_amplitude * std::sin(2.0 * M_PI * x[0] / g.lengths[0]) *
                   std::cos(2.0 * M_PI * x[1] / g.lengths[1]);
        });
        u[1] = sample(g, [&](const std::array<double, 3>& x) {
            return -velocity_amplitude * std::cos(2.0 * M_PI * x[0] / g.lengths[0]) *
                   std::sin(2.0 * M_PI * x[1] / g.lengths[1]);
        });
        VectorField m0(g);
        for (std::size_t a = 0; a < g.ndim(); ++a) m0[a] = multiply(rho0, u[a]);
        return initial_delta_approx(ws, rho0, m0, delta, beta, kernel);
    }
    throw std::invalid_argument("unknown init kind: " + init_kind);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool to_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

bool to_size(const std::string& s, std::size_t& out) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size() || v < 0) return false;
        out = std::size_t(v);
        return true;
    } catch (...) {
        return false;
    }
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

struct Parser {
    StudyConfig cfg;
    std::vector<std::string> errors;

    void fail(const std::string& where, const std::string& what) {
        errors.push_back(where + ": " + what);
    }

    void real_key(const std::string& where, const std::string& v, double& dst) {
        if (!to_double(v, dst)) fail(where, "expected a real number, got '" + v + "'");
    }

    void size_key(const std::string& where, const std::string& v, std::size_t& dst) {
        if (!to_size(v, dst)) fail(where, "expected a nonnegative integer, got '" + v + "'");
    }

    void real_list(const std::string& where, const std::string& v, std::vector<double>& dst) {
        dst.clear();
        for (const auto& tok : split_ws(v)) {
            double x;
            if (!to_double(tok, x)) {
                fail(where, "expected a list of reals, got '" + tok + "'");
                return;
            }
            dst.push_back(x);
        }
    }

    void handle(const std::string& section, const std::string& key, const std::string& value) {
        const std::string where = "[" + section + "] " + key;
        if (section == "grid") {
            if (key == "dims") {
                cfg.dims.clear();
                for (const auto& tok : split_ws(value)) {
                    std::size_t d;
                    if (!to_size(tok, d)) {
                        fail(where, "expected integers, got '" + tok + "'");
                        return;
                    }
                    cfg.dims.push_back(d);
                }
            } else if (key == "lengths")
                real_list(where, value, cfg.lengths);
            else
                fail(where, "unknown key");
        } else if (section == "physics") {
            if (key == "A") real_key(where, value, cfg.A);
            else if (key == "gamma") real_key(where, value, cfg.gamma);
            else if (key == "delta") real_key(where, value, cfg.delta);
            else if (key == "beta") real_key(where, value, cfg.beta);
            else if (key == "viscosity") cfg.viscosity = value;
            else if (key == "mu0") real_key(where, value, cfg.mu0);
            else if (key == "mu_a") real_key(where, value, cfg.mu_a);
            else if (key == "lambda0") real_key(where, value, cfg.lambda0);
            else if (key == "lambda_b") real_key(where, value, cfg.lambda_b);
            else if (key == "power_k") real_key(where, value, cfg.power_k);
            else if (key == "mollifier_radius") real_key(where, value, cfg.mollifier_radius);
            else fail(where, "unknown key");
        } else if (section == "solver") {
            if (key == "eps") real_key(where, value, cfg.eps);
            else if (key == "eps_list") real_list(where, value, cfg.eps_list);
            else if (key == "delta_list") real_list(where, value, cfg.delta_list);
            else if (key == "cfl") real_key(where, value, cfg.cfl);
            else if (key == "dt") real_key(where, value, cfg.dt);
            else if (key == "t_end") real_key(where, value, cfg.t_end);
            else if (key == "snapshot_every") size_key(where, value, cfg.snapshot_every);
            else if (key == "rho_floor") real_key(where, value, cfg.rho_floor);
            else if (key == "seed") {
                std::size_t s;
                if (!to_size(value, s)) fail(where, "expected an integer seed");
                else cfg.seed = s;
            } else fail(where, "unknown key");
        } else if (section == "study") {
            if (key == "mode") cfg.mode = value;
            else if (key == "B") cfg.b_choices = split_ws(value);
            else if (key == "M_list") real_list(where, value, cfg.m_list);
            else if (key == "block") size_key(where, value, cfg.block);
            else if (key == "omega") real_key(where, value, cfg.omega);
            else fail(where, "unknown key");
        } else if (section == "init") {
            if (key == "kind") cfg.init_kind = value;
            else if (key == "rho_bar") real_key(where, value, cfg.rho_bar);
            else if (key == "amplitude") real_key(where, value, cfg.amplitude);
            else if (key == "velocity_amplitude") real_key(where, value, cfg.velocity_amplitude);
            else fail(where, "unknown key");
        } else {
            fail("[" + section + "]", "unknown section");
        }
    }

    void cross_validate() {
        std::size_t n = cfg.dims.size();
        try {
            (void)cfg.grid();
        } catch (const std::exception& e) {
            fail("[grid]", e.what());
        }
        if (n < 2 || n > 3) n = 2;

        if (!(cfg.A > 0.0)) fail("[physics] A", "must be positive");
        if (!(cfg.gamma > double(n) / 2.0))
            fail("[physics] gamma", "must exceed N/2 = " + std::to_string(double(n) / 2.0));
        if (cfg.delta < 0.0) fail("[physics] delta", "must be nonnegative");
        const bool artificial = cfg.delta > 0.0 || !cfg.delta_list.empty();
        if (artificial) {
            const double bound = std::max({4.0, 1.5 * double(n), cfg.gamma});
            if (!(cfg.beta > bound))
                fail("[physics] beta",
                     "must exceed max{4, 3N/2, gamma} = " + std::to_string(bound));
        }
        if (cfg.viscosity != "constant" && cfg.viscosity != "affine" && cfg.viscosity != "power")
            fail("[physics] viscosity", "must be one of constant|affine|power");
        if (!(cfg.mu0 > 0.0)) fail("[physics] mu0", "must be positive");

        if (cfg.eps < 0.0) fail("[solver] eps", "must be nonnegative");
        auto strictly_decreasing = [](const std::vector<double>& v) {
            for (std::size_t i = 0; i + 1 < v.size(); ++i)
                if (!(v[i] > v[i + 1])) return false;
            return true;
        };
        for (double e : cfg.eps_list)
            if (!(e > 0.0)) fail("[solver] eps_list", "entries must be positive");
        if (!strictly_decreasing(cfg.eps_list))
            fail("[solver] eps_list", "must be strictly decreasing");
        for (double d : cfg.delta_list)
            if (!(d > 0.0)) fail("[solver] delta_list", "entries must be positive");
        if (!strictly_decreasing(cfg.delta_list))
            fail("[solver] delta_list", "must be strictly decreasing");
        if (!(cfg.cfl > 0.0) || cfg.cfl > 1.0) fail("[solver] cfl", "must lie in (0,1]");
        if (cfg.dt < 0.0) fail("[solver] dt", "must be nonnegative (0 = CFL-adaptive)");
        if (!(cfg.t_end > 0.0)) fail("[solver] t_end", "must be positive");
        if (cfg.snapshot_every == 0) fail("[solver] snapshot_every", "must be at least 1");
        if (!(cfg.rho_floor > 0.0)) fail("[solver] rho_floor", "must be positive");

        if (cfg.mode != "single" && cfg.mode != "eps-sweep" && cfg.mode != "delta-sweep")
            fail("[study] mode", "must be one of single|eps-sweep|delta-sweep");
        if (cfg.mode == "eps-sweep" && cfg.eps_list.empty())
            fail("[study] mode", "eps-sweep requires [solver] eps_list");
        if (cfg.mode == "delta-sweep" && cfg.delta_list.empty())
            fail("[study] mode", "delta-sweep requires [solver] delta_list");
        for (const auto& b : cfg.b_choices)
            if (b != "id" && b != "zlogz") fail("[study] B", "unknown family member '" + b + "'");
        for (double m : cfg.m_list)
            if (!(m > 0.0)) fail("[study] M_list", "entries must be positive");
        const double omega_cap =
            std::min(1.0 / double(n), 2.0 * cfg.gamma / double(n) - 1.0);
        if (!(cfg.omega > 0.0) || !(cfg.omega < omega_cap))
            fail("[study] omega", "must lie in (0, " + std::to_string(omega_cap) + ")");
        const std::size_t blk = cfg.block > 0 ? cfg.block : std::max<std::size_t>(1, cfg.dims[0] / 8);
        for (auto d : cfg.dims)
            if (blk == 0 || d % blk != 0)
                fail("[study] block", "must divide every grid dimension");

        if (cfg.init_kind != "uniform" && cfg.init_kind != "perturbed" &&
            cfg.init_kind != "taylor-green" && cfg.init_kind != "delta-approx")
            fail("[init] kind", "must be one of uniform|perturbed|taylor-green|delta-approx");
        if (!(cfg.rho_bar > 0.0)) fail("[init] rho_bar", "must be positive");
    }
};

}  // namespace

ParseResult parse_config_text(const std::string& text) {
    Parser parser;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                parser.fail("line " + std::to_string(lineno), "malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            parser.fail("line " + std::to_string(lineno), "expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            parser.fail("line " + std::to_string(lineno), "key outside any section");
            continue;
        }
        parser.handle(section, key, value);
    }
    parser.cross_validate();

    ParseResult out;
    out.errors = parser.errors;
    if (out.errors.empty()) out.config = parser.cfg;
    return out;
}

ParseResult parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ParseResult out;
        out.errors.push_back("cannot open config file: " + path);
        return out;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace evfx
