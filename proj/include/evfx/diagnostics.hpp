/// @file diagnostics.hpp
/// @brief Measurements over states and trajectories: energy ledger, the
/// effective viscous pressure by its two routes, weak-form transport
/// residuals against a fixed test-function bank, truncation/oscillation/
/// convexity defects, and integrability monitors.
///
/// The effective viscous pressure is computed two independent ways:
///   constitutive:  q = P - (lambda+2mu) div u - 2 sum_ij [mu; R_iR_j] D_ij(u)
///   dynamic:       q = -div Lap^{-1} d_t m - div Lap^{-1} div(rho u x u)
/// Both are defined modulo constants on the torus; the dynamic route is
/// mean-matched to the constitutive one before comparison.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "evfx/constitutive.hpp"
#include "evfx/field.hpp"
#include "evfx/solver.hpp"
#include "evfx/spectral.hpp"

namespace evfx {

// --- per-state records ---------------------------------------------------------

struct EnergyRecord {
    double kinetic = 0.0;
    double internal = 0.0;
    double total = 0.0;
};

EnergyRecord energy(const State& s, const SolverParams& p);

struct DissipationRecord {
    double viscous = 0.0;       // int mu |grad u|^2 + (lambda+mu)(div u)^2
    double artificial = 0.0;    // eps int [A g r^{g-2} + d b r^{b-2}] |grad rho|^2
    double stress_power = 0.0;  // int S : grad u (the exact discrete power)
};

DissipationRecord dissipation_rates(const SpectralWorkspace& ws, const State& s,
                                    const SolverParams& p, const MollifierField& kernel);

/// Append one row of the scalar ledger for the given state.
void record_step(DiagnosticsSeries& series, const SpectralWorkspace& ws, const State& s,
                 const SolverParams& p, const MollifierField& kernel, const StepStats& stats);

// --- effective viscous pressure ---------------------------------------------------

ScalarField evf_constitutive(const SpectralWorkspace& ws, const State& s,
                             const SolverParams& p, const MollifierField& kernel);

/// Dynamic route from three consecutive snapshots (centered d_t m), mean
/// matched to the constitutive route at the middle state.
ScalarField evf_dynamic(const SpectralWorkspace& ws, const State& prev, const State& mid,
                        const State& next, const SolverParams& p, const MollifierField& kernel);

/// Relative L2 gap between the two routes at the middle state.
double evf_two_route_gap(const SpectralWorkspace& ws, const State& prev, const State& mid,
                         const State& next, const SolverParams& p, const MollifierField& kernel);

/// |div Lap^{-1} (eps (grad u) grad rho)|_{L2}: the eps correction separating
/// the two routes on regularized runs.
double evf_eps_correction_norm(const SpectralWorkspace& ws, const State& s,
                               const SolverParams& p);

/// Fill series.evf_residual at interior snapshot rows of a finished run.
void annotate_evf_residuals(Trajectory& traj, const SpectralWorkspace& ws,
                            const SolverParams& p, const MollifierField& kernel);

// --- test-function bank -------------------------------------------------------------

/// phi(t,x) = psi(t) chi(x): C_c-infinity time bumps times low Fourier modes.
struct TestFunction {
    std::string name;
    std::function<double(double)> psi;
    std::function<double(double)> dpsi;
    ScalarField chi;
    VectorField grad_chi;
    ScalarField lap_chi;
};

/// 3 time bumps x 6 spatial modes {1, cos x1, sin x1, cos x2, sin x2, cos(x1+x2)}.
std::vector<TestFunction> make_test_bank(const Grid& g, double t_end);

// --- renormalization functions --------------------------------------------------------

/// A renormalization pair (B, b = B'z - B) with declared growth exponent of
/// |z B'(z)| (log factors dropped); admissibility is checked against gamma/2,
/// relaxed to beta/2 while the artificial pressure is active.
struct BFunction {
    std::string name;
    std::function<double(double)> B;
    std::function<double(double)> b;
    std::function<double(double)> B2;  // second derivative, for the eps correction
    double growth_exponent = 1.0;
};

BFunction b_identity();
BFunction b_zlogz();
BFunction b_power(double a);

/// Max over the bank of the weak residual of
/// d_t B(rho) + div(B(rho) u) + b(rho) div u = eps Lap B(rho) - eps B''|grad rho|^2.
/// When requested, quadrature_estimate receives an a-posteriori bound on the
/// trapezoid error of the time integral (second differences of the
/// integrand), which separates an unresolved snapshot train from a genuinely
/// violated identity.
double renorm_residual(const SpectralWorkspace& ws, const Trajectory& traj, const BFunction& bf,
                       const SolverParams& p, const std::vector<TestFunction>& bank,
                       double* quadrature_estimate = nullptr);

/// Max over the bank of the weak residual of the transport identity for
/// B(rho) F([rho]^eta), with its mollifier-commutator source and eps terms.
double bf_transport_residual(const SpectralWorkspace& ws, const Trajectory& traj,
                             const BFunction& bf, const SolverParams& p,
                             const MollifierField& kernel, const std::vector<TestFunction>& bank);

/// Fill the replicated renorm residual columns (B = id and B = z log z);
/// optionally reports the quadrature estimate for the B = id residual.
void annotate_renorm_residuals(Trajectory& traj, const SpectralWorkspace& ws,
                               const SolverParams& p, const std::vector<TestFunction>& bank,
                               double* id_quadrature_estimate = nullptr);

// --- weak-continuity probe --------------------------------------------------------------

struct ProbeReport {
    // per run: max over the bank of |I_n[phi] - I*[phi]|
    std::vector<double> deviation;          // quotient form P/(2mu+lambda) - div u
    std::vector<double> deviation_product;  // product form P - (2mu+lambda) div u
};

/// I_n[phi] pairs phi with B(rho_n)[P(rho_n)/(2mu+lambda)([rho_n]^eta) - div u_n];
/// the limit proxy I*[phi] uses block-averaged B(rho), P(rho) of the last run
/// and that run's velocity.
ProbeReport evf_weak_continuity_probe(const SpectralWorkspace& ws,
                                      const std::vector<const Trajectory*>& runs,
                                      const BFunction& bf, const SolverParams& p,
                                      const MollifierField& kernel,
                                      const std::vector<TestFunction>& bank, std::size_t block);

// --- defect measures -------------------------------------------------------------------

/// max over the sequence of |T_M(rho_i) - T_M(rho_ref)|_{L^{gamma+1}}.
double oscillation_defect(const std::vector<const ScalarField*>& seq, const ScalarField& ref,
                          double M, double gamma);

/// integrate(coarse(Phi(f)) - Phi(coarse(f))) >= 0 for convex Phi (Jensen gap).
double convexity_defect(const ScalarField& f, const std::function<double(double)>& phi,
                        std::size_t block);

/// integrate(coarse(rho P) - coarse(rho) coarse(P)) >= 0 for P monotone in rho.
double weak_product_defect(const ScalarField& rho, const ScalarField& pressure_field,
                           std::size_t block);

// --- integrability monitors ---------------------------------------------------------------

struct IntegrabilityRecord {
    double gamma_p1 = 0.0;        // int_0^T int rho^{gamma+1}
    double beta_p1 = 0.0;         // int_0^T int rho^{beta+1}
    double gamma_omega = 0.0;     // int_0^T int rho^{gamma+omega}
    double delta_beta_omega = 0.0;  // delta int_0^T int rho^{beta+omega}
};

/// Requires 0 < omega < min{1/N, 2 gamma/N - 1}.
IntegrabilityRecord integrability_monitor(const Trajectory& traj, const SolverParams& p,
                                          double omega);

}  // namespace evfx
