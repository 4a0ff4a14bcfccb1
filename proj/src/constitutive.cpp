#include "evfx/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evfx {

MollifierField make_mollifier(const SpectralWorkspace& ws, double radius) {
    const Grid& g = ws.grid();
    double min_len = g.lengths[0];
    double min_sp = g.spacing(0);
    for (std::size_t a = 0; a < g.ndim(); ++a) {
        min_len = std::min(min_len, g.lengths[a]);
        min_sp = std::min(min_sp, g.spacing(a));
    }
    // default 8 cells, clamped so it always fits on coarse grids
    const double h = (radius > 0.0) ? radius : std::min(8.0 * min_sp, min_len / 4.0);
    // The bump vanishes at r = h, so its positive part stays strictly inside
    // a quarter period when h <= min period / 4.
    if (h > min_len / 4.0)
        throw std::invalid_argument("mollifier: radius " + std::to_string(h) +
                                    " does not fit (needs <= min period / 4)");

    ScalarField kernel(g);
    for (std::size_t i = 0; i < kernel.size(); ++i) {
        double r2 = 0.0;
        for (std::size_t a = 0; a < g.ndim(); ++a) {
            double d = g.coord(i, a);
            d = std::min(d, g.lengths[a] - d);  // periodic distance to the origin
            r2 += d * d;
        }
        const double s2 = r2 / (h * h);
        kernel[i] = (s2 < 1.0) ? std::exp(-1.0 / (1.0 - s2)) : 0.0;
    }
    const double total = integrate(kernel);
    if (!(total > 0.0)) throw std::runtime_error("mollifier: empty kernel");
    kernel *= 1.0 / total;

    MollifierField out;
    out.radius = h;
    out.hat = ws.forward(kernel);
    const double vol = g.cell_volume();
    for (auto& c : out.hat) c *= vol;
    return out;
}

ScalarField mollify(const SpectralWorkspace& ws, const ScalarField& rho,
                    const MollifierField& kernel) {
    Spectrum s = ws.forward(rho);
    for (std::size_t c = 0; c < s.size(); ++c) s[c] *= kernel.hat[c];
    return ws.inverse(std::move(s));
}

ViscosityLaw constant_viscosity(double mu0, double lambda0) {
    if (!(mu0 > 0.0)) throw std::invalid_argument("viscosity: mu0 must be positive");
    ViscosityLaw law;
    law.name = "constant";
    law.mu = [mu0](double) { return mu0; };
    law.lambda = [lambda0](double) { return lambda0; };
    law.mu_prime = [](double) { return 0.0; };
    law.lambda_prime = [](double) { return 0.0; };
    law.mu_floor = mu0;
    law.is_constant = true;
    return law;
}

ViscosityLaw affine_viscosity(double mu0, double mu_slope, double lambda0, double lambda_slope) {
    if (!(mu0 > 0.0)) throw std::invalid_argument("viscosity: mu0 must be positive");
    ViscosityLaw law;
    law.name = "affine";
    law.mu = [mu0, mu_slope](double z) { return mu0 + mu_slope * z; };
    law.lambda = [lambda0, lambda_slope](double z) { return lambda0 + lambda_slope * z; };
    law.mu_prime = [mu_slope](double) { return mu_slope; };
    law.lambda_prime = [lambda_slope](double) { return lambda_slope; };
    law.mu_floor = mu0;
    law.is_constant = (mu_slope == 0.0 && lambda_slope == 0.0);
    return law;
}

ViscosityLaw power_viscosity(double mu0, double coeff, double exponent, double lambda0) {
    if (!(mu0 > 0.0)) throw std::invalid_argument("viscosity: mu0 must be positive");
    ViscosityLaw law;
    law.name = "power";
    law.mu = [mu0, coeff, exponent](double z) { return mu0 + coeff * std::pow(std::abs(z), exponent); };
    law.lambda = [lambda0](double) { return lambda0; };
    law.mu_prime = [coeff, exponent](double z) {
        const double s = (z >= 0.0) ? 1.0 : -1.0;
        return coeff * exponent * std::pow(std::abs(z), exponent - 1.0) * s;
    };
    law.lambda_prime = [](double) { return 0.0; };
    law.mu_floor = mu0;
    law.is_constant = (coeff == 0.0);
    return law;
}

std::pair<ScalarField, ScalarField> viscosity_fields(const ViscosityLaw& law,
                                                     const ScalarField& rho_eta) {
    const double n = double(rho_eta.grid.ndim());
    ScalarField mu(rho_eta.grid), lambda(rho_eta.grid);
    for (std::size_t i = 0; i < rho_eta.size(); ++i) {
        const double z = rho_eta[i];
        const double m = law.mu(z);
        const double l = law.lambda(z);
        if (!(m >= law.mu_floor - 1e-12) || !(m > 0.0))
            throw std::runtime_error("viscosity law violates mu >= mu0 > 0 at zeta = " +
                                     std::to_string(z));
        if (l + (2.0 / n) * m < -1e-12)
            throw std::runtime_error("viscosity law violates lambda + (2/N) mu >= 0 at zeta = " +
                                     std::to_string(z));
        mu[i] = m;
        lambda[i] = l;
    }
    return {std::move(mu), std::move(lambda)};
}

void PressureParams::validate(std::size_t ndim) const {
    if (!(A > 0.0)) throw std::invalid_argument("pressure: A must be positive");
    if (!(gamma > double(ndim) / 2.0))
        throw std::invalid_argument("pressure: gamma must exceed N/2");
    if (delta < 0.0) throw std::invalid_argument("pressure: delta must be nonnegative");
    if (delta > 0.0) {
        const double bound = std::max({4.0, 1.5 * double(ndim), gamma});
        if (!(beta > bound))
            throw std::invalid_argument("pressure: beta must exceed max{4, 3N/2, gamma} = " +
                                        std::to_string(bound));
    }
}

double PressureParams::sound_speed_sq(double rho) const {
    const double r = std::max(rho, 0.0);
    double c2 = A * gamma * std::pow(r, gamma - 1.0);
    if (delta > 0.0) c2 += delta * beta * std::pow(r, beta - 1.0);
    return c2;
}

ScalarField pressure(const ScalarField& rho, const PressureParams& p, std::uint64_t* clip_count) {
    ScalarField out(rho.grid);
    std::uint64_t clipped = 0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        double r = rho[i];
        if (r < 0.0) {
            r = 0.0;
            ++clipped;
        }
        double v = p.A * std::pow(r, p.gamma);
        if (p.delta > 0.0) v += p.delta * std::pow(r, p.beta);
        out[i] = v;
    }
    if (clip_count) *clip_count += clipped;
    return out;
}

ScalarField coeff_F(const ScalarField& mu, const ScalarField& lambda) {
    if (mu.grid != lambda.grid) throw std::invalid_argument("coeff_F: grid mismatch");
    ScalarField out(mu.grid);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double den = lambda[i] + 2.0 * mu[i];
        if (!(den > 0.0))
            throw std::runtime_error("coeff_F: nonpositive lambda + 2 mu = " + std::to_string(den));
        out[i] = 1.0 / den;
    }
    return out;
}

TensorField stress(const SpectralWorkspace& ws, const VectorField& u,
                   const ScalarField& mu, const ScalarField& lambda) {
    const std::size_t n = u.ndim();
    TensorField d = sym_gradient(ws, u);
    ScalarField divu = divergence(ws, u);
    ScalarField bulk = multiply_dealiased(ws, lambda, divu);

    TensorField s(ws.grid());
    s.symmetric = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            ScalarField sij = multiply_dealiased(ws, mu, d.at(i, j));
            sij *= 2.0;
            if (i == j) sij += bulk;
            if (j != i) s.at(j, i) = sij;
            s.at(i, j) = std::move(sij);
        }
    return s;
}

double TruncationFamily::base(double z) {
    if (z <= 1.0) return z;
    if (z >= 3.0) return 2.0;
    const double t = 0.5 * (z - 1.0);
    return 1.0 + 2.0 * (t - t * t * t + 0.5 * t * t * t * t);
}

double TruncationFamily::base_derivative(double z) {
    if (z <= 1.0) return 1.0;
    if (z >= 3.0) return 0.0;
    const double t = 0.5 * (z - 1.0);
    return 1.0 - 3.0 * t * t + 2.0 * t * t * t;  // (1-t)^2 (1+2t), in [0,1]
}

double truncate_value(double z, double M) {
    if (z <= M) return z;  // exact below the knee
    if (z >= 3.0 * M) return 2.0 * M;
    return M * TruncationFamily::base(z / M);
}

ScalarField truncate(const ScalarField& rho, double M) {
    if (!(M > 0.0)) throw std::invalid_argument("truncate: M must be positive");
    ScalarField out(rho.grid);
    for (std::size_t i = 0; i < rho.size(); ++i) out[i] = truncate_value(rho[i], M);
    return out;
}

}  // namespace evfx
