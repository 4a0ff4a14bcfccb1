/// @file config.hpp
/// @brief Study configuration: strict INI-style text with sections
/// [grid] [physics] [solver] [study] [init]. Unknown sections or keys are
/// rejected; all violations are collected rather than stopping at the first.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evfx/constitutive.hpp"
#include "evfx/field.hpp"
#include "evfx/solver.hpp"

namespace evfx {

struct StudyConfig {
    // [grid]
    std::vector<std::size_t> dims{64, 64};
    std::vector<double> lengths{2.0 * M_PI, 2.0 * M_PI};
    // [physics]
    double A = 1.0;
    double gamma = 2.0;
    double delta = 0.0;
    double beta = 4.5;
    std::string viscosity = "constant";
    double mu0 = 0.05;
    double mu_a = 0.0;
    double lambda0 = 0.0;
    double lambda_b = 0.0;
    double power_k = 2.0;
    double mollifier_radius = 0.0;  // 0: default 8 * spacing
    // [solver]
    double eps = 0.0;
    std::vector<double> eps_list;
    std::vector<double> delta_list;
    double cfl = 0.4;
    double dt = 0.0;  // 0: CFL-adaptive
    double t_end = 0.5;
    std::size_t snapshot_every = 2;
    double rho_floor = 1e-6;
    std::uint64_t seed = 1;
    // [study]
    std::string mode = "single";  // single | eps-sweep | delta-sweep
    std::vector<std::string> b_choices{"id", "zlogz"};
    std::vector<double> m_list{2.0, 8.0, 32.0};
    std::size_t block = 0;  // 0: dims/8
    double omega = 0.2;
    // [init]
    std::string init_kind = "taylor-green";  // uniform|perturbed|taylor-green|delta-approx
    double rho_bar = 1.0;
    double amplitude = 0.2;
    double velocity_amplitude = 1.0;

    Grid grid() const { return Grid(dims, lengths); }
    std::size_t coarse_block() const;
    ViscosityLaw make_law() const;
    SolverParams solver_params() const;  // delta taken from `delta`
    State build_initial(const SpectralWorkspace& ws, const MollifierField& kernel) const;
};

struct ParseResult {
    std::optional<StudyConfig> config;
    std::vector<std::string> errors;
    bool ok() const { return config.has_value() && errors.empty(); }
};

ParseResult parse_config_text(const std::string& text);
ParseResult parse_config(const std::string& path);

}  // namespace evfx
