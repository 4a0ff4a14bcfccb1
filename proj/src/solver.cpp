#include "evfx/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "evfx/diagnostics.hpp"

namespace evfx {

void SolverParams::validate(std::size_t ndim) const {
    pressure.validate(ndim);
    if (eps < 0.0) throw std::invalid_argument("solver: eps must be nonnegative");
    if (!(cfl > 0.0) || cfl > 1.0) throw std::invalid_argument("solver: CFL must be in (0,1]");
    if (!(rho_floor > 0.0)) throw std::invalid_argument("solver: rho_floor must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("solver: t_end must be positive");
}

VectorField velocity(const State& s, double rho_floor) {
    VectorField u(s.rho.grid);
    for (std::size_t a = 0; a < u.ndim(); ++a)
        for (std::size_t i = 0; i < s.rho.size(); ++i)
            u[a][i] = s.m[a][i] / std::max(s.rho[i], rho_floor);
    return u;
}

TensorField momentum_flux(const SpectralWorkspace& ws, const ScalarField& rho,
                          const VectorField& u) {
    const std::size_t n = u.ndim();
    TensorField flux(ws.grid());
    flux.symmetric = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            ScalarField f = dealias(ws, multiply(multiply(rho, u[i]), u[j]));
            if (j != i) flux.at(j, i) = f;
            flux.at(i, j) = std::move(f);
        }
    return flux;
}

Rhs rhs(const SpectralWorkspace& ws, const State& s, const SolverParams& p,
        const MollifierField& kernel, std::uint64_t* clip_count) {
    if (!s.rho.finite() || !s.m.finite()) throw std::runtime_error("rhs: non-finite state");
    const std::size_t n = s.m.ndim();
    const VectorField u = velocity(s, p.rho_floor);

    // continuity: -div(rho u) + eps Lap rho
    VectorField mom(ws.grid());
    for (std::size_t a = 0; a < n; ++a) mom[a] = multiply_dealiased(ws, s.rho, u[a]);
    ScalarField drho = -1.0 * divergence(ws, mom);
    if (p.eps > 0.0) drho.axpy(p.eps, laplacian(ws, s.rho));

    // momentum: -div(rho u x u) - grad P + div S - eps (grad u) grad rho
    const TensorField flux = momentum_flux(ws, s.rho, u);
    const VectorField div_flux = divergence(ws, flux);

    const ScalarField pr = pressure(s.rho, p.pressure, clip_count);
    const VectorField grad_p = gradient(ws, pr);

    const ScalarField rho_eta = mollify(ws, s.rho, kernel);
    auto [mu, lambda] = viscosity_fields(p.law, rho_eta);
    const VectorField div_s = divergence(ws, stress(ws, u, mu, lambda));

    Rhs out{std::move(drho), VectorField(ws.grid())};
    if (p.eps > 0.0) {
        const VectorField grad_rho = gradient(ws, s.rho);
        for (std::size_t i = 0; i < n; ++i) {
            const VectorField grad_ui = gradient(ws, u[i]);
            ScalarField eps_i(ws.grid());
            for (std::size_t j = 0; j < n; ++j) eps_i += multiply(grad_ui[j], grad_rho[j]);
            out.dm[i] = div_s[i] - div_flux[i] - grad_p[i];
            out.dm[i].axpy(-p.eps, eps_i);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) out.dm[i] = div_s[i] - div_flux[i] - grad_p[i];
    }
    return out;
}

namespace {

void repair_density(ScalarField& rho, double rho_floor, StepStats* stats) {
    std::uint64_t clipped = 0;
    for (auto& v : rho.data) {
        if (v < 0.0) {
            if (v < -1e-14) ++clipped;
            v = rho_floor;
        }
    }
    if (stats) {
        stats->clipped_cells += clipped;
        stats->min_rho = rho.min();
    }
}

}  // namespace

State step(const SpectralWorkspace& ws, const State& s, double dt, const SolverParams& p,
           const MollifierField& kernel, StepStats* stats) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    std::uint64_t clips = 0;

    // Shu-Osher SSP-RK3
    Rhs k1 = rhs(ws, s, p, kernel, &clips);
    State s1{s.t, s.rho, s.m};
    s1.rho.axpy(dt, k1.drho);
    s1.m.axpy(dt, k1.dm);

    Rhs k2 = rhs(ws, s1, p, kernel, &clips);
    State s2{s.t, s.rho, s.m};
    s2.rho *= 0.75;
    s2.rho.axpy(0.25, s1.rho);
    s2.rho.axpy(0.25 * dt, k2.drho);
    for (std::size_t a = 0; a < s.m.ndim(); ++a) {
        s2.m[a] *= 0.75;
        s2.m[a].axpy(0.25, s1.m[a]);
        s2.m[a].axpy(0.25 * dt, k2.dm[a]);
    }

    Rhs k3 = rhs(ws, s2, p, kernel, &clips);
    State out{s.t + dt, s.rho, s.m};
    const double c = 1.0 / 3.0, d = 2.0 / 3.0;
    out.rho *= c;
    out.rho.axpy(d, s2.rho);
    out.rho.axpy(d * dt, k3.drho);
    for (std::size_t a = 0; a < s.m.ndim(); ++a) {
        out.m[a] *= c;
        out.m[a].axpy(d, s2.m[a]);
        out.m[a].axpy(d * dt, k3.dm[a]);
    }

    if (!out.rho.finite() || !out.m.finite()) throw std::runtime_error("step: non-finite update");
    if (stats) stats->clipped_cells += clips;
    repair_density(out.rho, p.rho_floor, stats);
    return out;
}

double cfl_dt(const SpectralWorkspace& ws, const State& s, const SolverParams& p,
              const MollifierField& kernel) {
    const Grid& g = ws.grid();
    const std::size_t n = g.ndim();
    double h_min = g.spacing(0);
    for (std::size_t a = 0; a < n; ++a) h_min = std::min(h_min, g.spacing(a));

    const VectorField u = velocity(s, p.rho_floor);
    double umax = 0.0;
    for (std::size_t i = 0; i < s.rho.size(); ++i) {
        double v2 = 0.0;
        for (std::size_t a = 0; a < n; ++a) v2 += u[a][i] * u[a][i];
        umax = std::max(umax, std::sqrt(v2));
    }
    double c2max = 0.0;
    for (double r : s.rho.data) c2max = std::max(c2max, p.pressure.sound_speed_sq(r));
    double dt = h_min / (umax + std::sqrt(c2max));

    if (p.eps > 0.0) dt = std::min(dt, h_min * h_min / (2.0 * double(n) * p.eps));

    const ScalarField rho_eta = mollify(ws, s.rho, kernel);
    auto [mu, lambda] = viscosity_fields(p.law, rho_eta);
    // momentum diffusion is stiff where (lambda+2mu)/rho is large; the ratio
    // is taken pointwise, with the floor guarding collapsed cells
    double nu_max = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        nu_max = std::max(nu_max, (lambda[i] + 2.0 * mu[i]) / std::max(s.rho[i], p.rho_floor));
    dt = std::min(dt, h_min * h_min / (2.0 * double(n) * nu_max));

    dt *= p.cfl;
    if (!(dt > 0.0)) throw std::runtime_error("cfl_dt: nonpositive step");
    return dt;
}

Trajectory run(const SpectralWorkspace& ws, const State& init, const SolverParams& p,
               const RunOptions& opts) {
    p.validate(ws.grid().ndim());
    const MollifierField kernel = make_mollifier(ws, p.mollifier_radius);

    Trajectory traj;
    State cur = init;
    StepStats stats;
    stats.min_rho = cur.rho.min();

    if (opts.record_series) record_step(traj.series, ws, cur, p, kernel, stats);
    traj.snapshots.push_back(cur);
    traj.snapshot_rows.push_back(traj.series.rows() == 0 ? 0 : traj.series.rows() - 1);

    std::size_t steps = 0;
    while (cur.t < p.t_end - 1e-14) {
        double dt = (p.dt_fixed > 0.0) ? p.dt_fixed : cfl_dt(ws, cur, p, kernel);
        dt = std::min(dt, p.t_end - cur.t);
        try {
            cur = step(ws, cur, dt, p, kernel, &stats);
        } catch (const std::exception& e) {
            traj.aborted = true;
            traj.abort_reason = e.what();
            break;
        }
        ++steps;
        if (opts.record_series) record_step(traj.series, ws, cur, p, kernel, stats);
        const bool last = !(cur.t < p.t_end - 1e-14) || steps >= opts.max_steps;
        if (steps % opts.snapshot_every == 0 || last) {
            traj.snapshots.push_back(cur);
            traj.snapshot_rows.push_back(traj.series.rows() == 0 ? 0 : traj.series.rows() - 1);
        }
        if (steps >= opts.max_steps) {
            traj.aborted = true;
            traj.abort_reason = "max step budget reached";
            break;
        }
    }
    return traj;
}

State initial_uniform(const Grid& g, double rho_bar, const std::vector<double>& u0) {
    if (!(rho_bar > 0.0)) throw std::invalid_argument("initial data: rho_bar must be positive");
    State s;
    s.rho = ScalarField(g, rho_bar);
    s.m = VectorField(g);
    for (std::size_t a = 0; a < g.ndim() && a < u0.size(); ++a)
        s.m[a] = ScalarField(g, rho_bar * u0[a]);
    return s;
}

namespace {

VectorField taylor_green_velocity(const Grid& g, double u_amp) {
    VectorField u(g);
    u[0] = sample(g, [&](const std::array<double, 3>& x) {
        return u_amp * std::sin(2.0 * M_PI * x[0] / g.lengths[0]) *
               std::cos(2.0 * M_PI * x[1] / g.lengths[1]);
    });
    u[1] = sample(g, [&](const std::array<double, 3>& x) {
        return -u_amp * std::cos(2.0 * M_PI * x[0] / g.lengths[0]) *
               std::sin(2.0 * M_PI * x[1] / g.lengths[1]);
    });
    return u;
}

}  // namespace

State initial_perturbed(const Grid& g, double rho_bar, double amplitude, double u_amp) {
    State s;
    s.rho = sample(g, [&](const std::array<double, 3>& x) {
        return rho_bar + amplitude * std::cos(2.0 * M_PI * x[0] / g.lengths[0]);
    });
    if (!(s.rho.min() > 0.0))
        throw std::invalid_argument("initial data: perturbation drives density nonpositive");
    s.m = VectorField(g);
    if (u_amp != 0.0) {
        VectorField u = taylor_green_velocity(g, u_amp);
        for (std::size_t a = 0; a < g.ndim(); ++a) s.m[a] = multiply(s.rho, u[a]);
    }
    return s;
}

State initial_taylor_green(const Grid& g, double rho_bar, double u_amp) {
    State s = initial_uniform(g, rho_bar, {});
    VectorField u = taylor_green_velocity(g, u_amp);
    for (std::size_t a = 0; a < g.ndim(); ++a) s.m[a] = rho_bar * u[a];
    return s;
}

State initial_delta_approx(const SpectralWorkspace& ws, const ScalarField& rho0,
                           const VectorField& m0, double delta, double beta,
                           const MollifierField& kernel) {
    if (!(delta > 0.0) || delta >= 1.0)
        throw std::invalid_argument("delta approximation: need 0 < delta < 1");
    const double hi = std::pow(delta, -1.0 / (2.0 * beta));
    const Grid& g = rho0.grid;

    // The regularization scale must vanish with delta for the momentum ratio
    // to converge in L2; keep it a couple of cells wide at least.
    double min_sp = g.spacing(0);
    for (std::size_t a = 0; a < g.ndim(); ++a) min_sp = std::min(min_sp, g.spacing(a));
    const double radius = std::max(2.0 * min_sp, kernel.radius * std::sqrt(delta));
    const MollifierField fine = make_mollifier(ws, radius);

    // Smooth first, clamp last: the bounds bind exactly where the data
    // touches vacuum (min rho = delta there).
    ScalarField rho_d = map(mollify(ws, rho0, fine),
                            [&](double r) { return std::clamp(r, delta, hi); });

    State s;
    s.rho = rho_d;
    s.m = VectorField(g);
    for (std::size_t a = 0; a < m0.ndim(); ++a) {
        ScalarField scaled(g);
        for (std::size_t i = 0; i < rho0.size(); ++i) {
            const double ratio = (rho0[i] > 0.0) ? m0[a][i] / std::sqrt(rho0[i]) : 0.0;
            scaled[i] = std::sqrt(rho_d[i]) * ratio;
        }
        s.m[a] = mollify(ws, scaled, fine);
    }
    return s;
}

ScalarField advance_density_frozen(const SpectralWorkspace& ws, const ScalarField& rho0,
                                   const VectorField& u, double eps, double dt,
                                   std::size_t nsteps) {
    auto rhs_rho = [&](const ScalarField& r) {
        VectorField mom(ws.grid());
        for (std::size_t a = 0; a < u.ndim(); ++a) mom[a] = multiply_dealiased(ws, r, u[a]);
        ScalarField d = -1.0 * divergence(ws, mom);
        if (eps > 0.0) d.axpy(eps, laplacian(ws, r));
        return d;
    };
    ScalarField cur = rho0;
    for (std::size_t k = 0; k < nsteps; ++k) {
        ScalarField r1 = cur;
        r1.axpy(dt, rhs_rho(cur));
        ScalarField r2 = 0.75 * cur + 0.25 * r1;
        r2.axpy(0.25 * dt, rhs_rho(r1));
        ScalarField next = (1.0 / 3.0) * cur + (2.0 / 3.0) * r2;
        next.axpy((2.0 / 3.0) * dt, rhs_rho(r2));
        cur = std::move(next);
    }
    return cur;
}

}  // namespace evfx
