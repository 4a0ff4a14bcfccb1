/// @file spectral.hpp
/// @brief Fourier-multiplier operators on the periodic grid.
///
/// Conventions, fixed once here:
///  - Riesz transform R_a has symbol -i xi_a/|xi|, so the composition
///    R_i R_j has symbol -xi_i xi_j/|xi|^2 (riesz_pair).
///  - inv_laplacian_gradient realises Delta^{-1} grad with symbol
///    -i xi_a/|xi|^2, hence div(inv_laplacian_gradient(f)) = f - mean(f).
///  - double_riesz_contract realises the matrix grad Delta^{-1} grad,
///    entries +xi_i xi_j/|xi|^2, hence contracting D(u) returns div u.
///    Note grad Delta^{-1} grad = -[R_i R_j] entrywise.
///  - Every inverse operator projects the mean mode to zero.
///  - Nyquist columns are zeroed wherever a multiplier is odd in an axis.
///
/// The workspace caches FFTW plans and the wavenumber/dealias tables; it is
/// immutable after construction and safe to share across threads.

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "evfx/field.hpp"

namespace evfx {

using Spectrum = std::vector<std::complex<double>>;

class SpectralWorkspace {
  public:
    explicit SpectralWorkspace(Grid g);
    ~SpectralWorkspace();
    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    const Grid& grid() const { return grid_; }
    std::size_t spectrum_size() const { return modes_; }

    Spectrum forward(const ScalarField& f) const;
    ScalarField inverse(Spectrum s) const;   // consumes its argument (c2r scratch)

    /// Signed physical wavenumber of mode c along axis a; zero when flagged
    /// for odd multipliers (Nyquist column).
    double xi(std::size_t c, std::size_t a) const { return xi_[c * nd_ + a]; }
    /// Same with the Nyquist column kept at +dim/2 (even multipliers only).
    double xi_full(std::size_t c, std::size_t a) const { return xi_full_[c * nd_ + a]; }
    double xi_norm2(std::size_t c) const { return xi2_[c]; }
    bool dealias_keep(std::size_t c) const { return keep_[c] != 0; }

    /// Spectrum-level derivative d/dx_a (multiplier i xi_a).
    void deriv_inplace(Spectrum& s, std::size_t a) const;
    void mask_inplace(Spectrum& s) const;

  private:
    Grid grid_;
    std::size_t nd_ = 0;
    std::size_t modes_ = 0;
    std::vector<double> xi_, xi_full_, xi2_;
    std::vector<unsigned char> keep_;
    struct Plans;
    std::unique_ptr<Plans> plans_;
};

// --- first-order operators ------------------------------------------------

VectorField gradient(const SpectralWorkspace& ws, const ScalarField& f);
ScalarField divergence(const SpectralWorkspace& ws, const VectorField& v);
ScalarField laplacian(const SpectralWorkspace& ws, const ScalarField& f);
TensorField sym_gradient(const SpectralWorkspace& ws, const VectorField& v);

/// Divergence of a tensor, row i -> sum_j d_j T_ij.
VectorField divergence(const SpectralWorkspace& ws, const TensorField& t);

// --- singular integral operators -------------------------------------------

ScalarField riesz(const SpectralWorkspace& ws, const ScalarField& f, std::size_t axis);

/// R_i R_j composition, symbol -xi_i xi_j/|xi|^2.
ScalarField riesz_pair(const SpectralWorkspace& ws, const ScalarField& f,
                       std::size_t i, std::size_t j);

/// Delta^{-1} grad; div of the result reproduces f - mean(f).
VectorField inv_laplacian_gradient(const SpectralWorkspace& ws, const ScalarField& f);

/// div Delta^{-1} acting on a vector field (scalar result).
ScalarField div_inv_laplacian(const SpectralWorkspace& ws, const VectorField& v);

/// (grad Delta^{-1} grad) : T, i.e. div Delta^{-1} div of a tensor.
ScalarField double_riesz_contract(const SpectralWorkspace& ws, const TensorField& t);

/// Right inverse of the divergence on mean-free data: a curl-free field w
/// with div w = f - mean(f).
VectorField inverse_divergence(const SpectralWorkspace& ws, const ScalarField& f);

// --- commutators ------------------------------------------------------------

/// [b; R_iR_j](f) = b R_iR_j f - R_iR_j(bf); both products dealiased.
ScalarField commutator_riesz(const SpectralWorkspace& ws, const ScalarField& b,
                             const ScalarField& f, std::size_t i, std::size_t j);

/// sum_ij [b; R_iR_j](T_ij).
ScalarField commutator_contract(const SpectralWorkspace& ws, const ScalarField& b,
                                const TensorField& t);

// --- dealiasing and helpers --------------------------------------------------

/// Zero all modes outside the 2/3 mask (|k_a| > floor(dim_a/3)).
ScalarField dealias(const SpectralWorkspace& ws, const ScalarField& f);

/// dealias(a * b): the product form every nonlinear term feeds to a multiplier.
ScalarField multiply_dealiased(const SpectralWorkspace& ws, const ScalarField& a,
                               const ScalarField& b);

double mean(const ScalarField& f);

/// L2 norm of (-Delta)^{-1/2} f on the mean-free part (negative-order proxy).
double hminus1_norm(const SpectralWorkspace& ws, const ScalarField& f);

}  // namespace evfx
