/// @file solver.hpp
/// @brief Explicit pseudo-spectral time integration of the regularized
/// barotropic system on the torus:
///
///   d_t rho + div(rho u) = eps Lap(rho)
///   d_t m + div(rho u x u) + grad P + eps (grad u) grad rho = div S
///
/// evolved in conservative variables (rho, m), u recovered with a floor
/// guard. The eps momentum term sits on the left so the artificial-viscosity
/// kinetic production cancels exactly and the energy ledger closes.
/// Time stepping is SSP-RK3; every pointwise product that feeds a Fourier
/// multiplier goes through the 2/3 mask.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "evfx/constitutive.hpp"
#include "evfx/field.hpp"
#include "evfx/spectral.hpp"

namespace evfx {

struct State {
    double t = 0.0;
    ScalarField rho;
    VectorField m;
};

struct SolverParams {
    PressureParams pressure;
    ViscosityLaw law;
    double mollifier_radius = 0.0;  // <= 0: default 8 * spacing
    double eps = 0.0;               // artificial viscosity
    double cfl = 0.4;
    double dt_fixed = 0.0;          // > 0: fixed step, else CFL-adaptive
    double t_end = 1.0;
    double rho_floor = 1e-6;

    void validate(std::size_t ndim) const;
};

/// Per-step scalar ledger. Rows are appended once per accepted step; the
/// trailing vectors hold running trapezoid time-integrals used by the
/// energy / L2 ledger identities.
struct DiagnosticsSeries {
    std::vector<double> t, E, E_kin, E_int, D_v, D_a, D_S, mass, min_rho;
    std::vector<std::uint64_t> clip_count;  // cumulative repaired cells
    std::vector<double> evf_residual;       // two-route gap, interior snapshots only
    std::vector<double> renorm_resid_id, renorm_resid_zlogz;  // whole-run scalars
    std::vector<double> Lgamma, Lgammap1, Lbeta, Lbetap1;

    std::vector<double> int_DS, int_Da;        // int_0^t D dt'
    std::vector<double> rho_l2sq;              // int rho^2 dx at t
    std::vector<double> divu_rho2, grad_rho2;  // int div u rho^2, int |grad rho|^2 at t
    std::vector<double> int_divu_rho2;         // int_0^t int div u rho^2
    std::vector<double> int_grad_rho2;         // int_0^t int |grad rho|^2
    std::vector<double> eps_term_l1;           // |eps (grad u) grad rho|_L1 at t
    std::vector<double> eps_lap_hm1;           // |eps Lap rho|_{H^-1 proxy} at t

    std::size_t rows() const { return t.size(); }
};

struct Trajectory {
    std::vector<State> snapshots;      // strictly increasing times
    std::vector<std::size_t> snapshot_rows;  // row index of each snapshot in the series
    DiagnosticsSeries series;
    bool aborted = false;
    std::string abort_reason;
};

struct StepStats {
    std::uint64_t clipped_cells = 0;
    double min_rho = 0.0;
};

/// u = m / max(rho, floor) pointwise.
VectorField velocity(const State& s, double rho_floor);

/// Symmetric dealiased momentum flux rho u_i u_j; shared by the solver rhs
/// and the dynamic effective-pressure route so the two stay consistent.
TensorField momentum_flux(const SpectralWorkspace& ws, const ScalarField& rho,
                          const VectorField& u);

struct Rhs {
    ScalarField drho;
    VectorField dm;
};

Rhs rhs(const SpectralWorkspace& ws, const State& s, const SolverParams& p,
        const MollifierField& kernel, std::uint64_t* clip_count = nullptr);

State step(const SpectralWorkspace& ws, const State& s, double dt, const SolverParams& p,
           const MollifierField& kernel, StepStats* stats = nullptr);

double cfl_dt(const SpectralWorkspace& ws, const State& s, const SolverParams& p,
              const MollifierField& kernel);

struct RunOptions {
    std::size_t snapshot_every = 1;    // steps between stored snapshots
    std::size_t max_steps = 2000000;
    bool record_series = true;
};

Trajectory run(const SpectralWorkspace& ws, const State& init, const SolverParams& p,
               const RunOptions& opts = {});

// --- initial data builders ----------------------------------------------------

State initial_uniform(const Grid& g, double rho_bar, const std::vector<double>& u0);

/// rho = rho_bar + amplitude cos(x1), plus an optional Taylor-Green velocity
/// scaled by u_amp. Throws when the perturbation drives min rho <= 0.
State initial_perturbed(const Grid& g, double rho_bar, double amplitude, double u_amp = 0.0);

/// Uniform density with the classical cellular velocity u_amp (sin x cos y, -cos x sin y).
State initial_taylor_green(const Grid& g, double rho_bar, double u_amp);

/// Approximation of rough data (rho0, m0): density clamped into
/// [delta, delta^{-1/(2 beta)}] then mollified (bounds reasserted exactly),
/// momentum the mollification of sqrt(rho_delta) * m0 / sqrt(rho0).
State initial_delta_approx(const SpectralWorkspace& ws, const ScalarField& rho0,
                           const VectorField& m0, double delta, double beta,
                           const MollifierField& kernel);

/// Test support: advect-diffuse a density with a frozen velocity field using
/// the same stages and dealiasing as the full scheme.
ScalarField advance_density_frozen(const SpectralWorkspace& ws, const ScalarField& rho0,
                                   const VectorField& u, double eps, double dt,
                                   std::size_t nsteps);

}  // namespace evfx
