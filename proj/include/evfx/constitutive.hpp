/// @file constitutive.hpp
/// @brief Mollifier, viscosity laws, pressure with artificial term, the
/// coefficient 1/(lambda+2mu), stress assembly, and concave truncations.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "evfx/field.hpp"
#include "evfx/spectral.hpp"

namespace evfx {

// --- mollifier --------------------------------------------------------------

/// C-infinity bump of radius h, normalized so the discrete integral is one;
/// held as its Fourier transform (DC gain exactly 1).
struct MollifierField {
    Spectrum hat;
    double radius = 0.0;
};

/// radius <= 0 picks the default 8 * min spacing. Throws when the support
/// does not fit (radius must stay below min(lengths)/4).
MollifierField make_mollifier(const SpectralWorkspace& ws, double radius);

/// Periodic convolution with the kernel; preserves constants and integrals,
/// and keeps values inside [min rho, max rho] up to rounding.
ScalarField mollify(const SpectralWorkspace& ws, const ScalarField& rho,
                    const MollifierField& kernel);

// --- viscosity --------------------------------------------------------------

struct ViscosityLaw {
    std::string name;
    std::function<double(double)> mu;
    std::function<double(double)> lambda;
    std::function<double(double)> mu_prime;      // analytic derivatives, used by the
    std::function<double(double)> lambda_prime;  // transport-identity source terms
    double mu_floor = 0.0;   // mu(z) >= mu_floor > 0 demanded everywhere
    bool is_constant = false;
};

ViscosityLaw constant_viscosity(double mu0, double lambda0);
ViscosityLaw affine_viscosity(double mu0, double mu_slope, double lambda0, double lambda_slope);
ViscosityLaw power_viscosity(double mu0, double coeff, double exponent, double lambda0);

/// Pointwise evaluation on the mollified density, with the admissibility
/// conditions mu >= mu_floor and lambda + (2/N) mu >= 0 asserted on every
/// sampled value; violation raises with the offending value.
std::pair<ScalarField, ScalarField> viscosity_fields(const ViscosityLaw& law,
                                                     const ScalarField& rho_eta);

// --- pressure ---------------------------------------------------------------

struct PressureParams {
    double A = 1.0;
    double gamma = 2.0;
    double delta = 0.0;
    double beta = 4.5;

    void validate(std::size_t ndim) const;  // gamma > N/2; delta>0 => beta > max{4, 3N/2, gamma}
    double sound_speed_sq(double rho) const;  // d pressure / d rho at rho
};

/// A rho^gamma + delta rho^beta; negative samples clipped to zero, counted.
ScalarField pressure(const ScalarField& rho, const PressureParams& p,
                     std::uint64_t* clip_count = nullptr);

/// 1/(lambda + 2 mu) pointwise; throws on a non-positive denominator.
ScalarField coeff_F(const ScalarField& mu, const ScalarField& lambda);

/// S = lambda (div u) I + 2 mu D(u); products dealiased.
TensorField stress(const SpectralWorkspace& ws, const VectorField& u,
                   const ScalarField& mu, const ScalarField& lambda);

// --- truncation family --------------------------------------------------------

/// Base profile: T(z)=z below 1, T(z)=2 above 3, and a C^2 monotone concave
/// blend 1 + 2(t - t^3 + t^4/2), t=(z-1)/2, in between.
struct TruncationFamily {
    static double base(double z);
    static double base_derivative(double z);
};

double truncate_value(double z, double M);
ScalarField truncate(const ScalarField& rho, double M);

}  // namespace evfx
