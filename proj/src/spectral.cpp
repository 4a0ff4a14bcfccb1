#include "evfx/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace evfx {

namespace {
// FFTW plan creation is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

struct SpectralWorkspace::Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    ~Plans() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

SpectralWorkspace::SpectralWorkspace(Grid g) : grid_(std::move(g)) {
    nd_ = grid_.ndim();
    const std::size_t last = nd_ - 1;
    const std::size_t half = grid_.dims[last] / 2 + 1;
    modes_ = half;
    for (std::size_t a = 0; a < last; ++a) modes_ *= grid_.dims[a];

    xi_.resize(modes_ * nd_);
    xi_full_.resize(modes_ * nd_);
    xi2_.resize(modes_);
    keep_.resize(modes_);

    for (std::size_t c = 0; c < modes_; ++c) {
        std::size_t rem = c;
        double n2 = 0.0;
        bool keep = true;
        for (std::size_t a = nd_; a-- > 0;) {
            const std::size_t dim = grid_.dims[a];
            const std::size_t ext = (a == last) ? half : dim;
            const std::size_t k = rem % ext;
            rem /= ext;
            const long ks = (a == last) ? long(k) : (k <= dim / 2 ? long(k) : long(k) - long(dim));
            const double w = kTwoPi / grid_.lengths[a];
            const bool nyq = (std::size_t(std::labs(ks)) == dim / 2);
            xi_full_[c * nd_ + a] = double(ks) * w;
            xi_[c * nd_ + a] = nyq ? 0.0 : double(ks) * w;
            n2 += double(ks) * w * double(ks) * w;
            if (std::size_t(std::labs(ks)) > dim / 3) keep = false;
        }
        xi2_[c] = n2;
        keep_[c] = keep ? 1 : 0;
    }

    plans_ = std::make_unique<Plans>();
    std::vector<double> rbuf(grid_.size());
    std::vector<std::complex<double>> cbuf(modes_);
    int n[3] = {0, 0, 0};
    for (std::size_t a = 0; a < nd_; ++a) n[a] = int(grid_.dims[a]);
    std::lock_guard<std::mutex> lock(planner_mutex());
    plans_->fwd = fftw_plan_dft_r2c(int(nd_), n, rbuf.data(),
                                    reinterpret_cast<fftw_complex*>(cbuf.data()),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_->bwd = fftw_plan_dft_c2r(int(nd_), n, reinterpret_cast<fftw_complex*>(cbuf.data()),
                                    rbuf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plans_->fwd || !plans_->bwd) throw std::runtime_error("fftw planning failed");
}

SpectralWorkspace::~SpectralWorkspace() = default;

Spectrum SpectralWorkspace::forward(const ScalarField& f) const {
    if (f.grid != grid_) throw std::invalid_argument("spectral: grid mismatch");
    std::vector<double> rbuf(f.data);
    Spectrum out(modes_);
    fftw_execute_dft_r2c(plans_->fwd, rbuf.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

ScalarField SpectralWorkspace::inverse(Spectrum s) const {
    if (s.size() != modes_) throw std::invalid_argument("spectral: spectrum size mismatch");
    ScalarField out(grid_);
    fftw_execute_dft_c2r(plans_->bwd, reinterpret_cast<fftw_complex*>(s.data()), out.data.data());
    const double scale = 1.0 / double(grid_.size());
    for (auto& v : out.data) v *= scale;
    return out;
}

void SpectralWorkspace::deriv_inplace(Spectrum& s, std::size_t a) const {
    for (std::size_t c = 0; c < modes_; ++c)
        s[c] *= std::complex<double>(0.0, xi(c, a));
}

void SpectralWorkspace::mask_inplace(Spectrum& s) const {
    for (std::size_t c = 0; c < modes_; ++c)
        if (!keep_[c]) s[c] = 0.0;
}

// --------------------------------------------------------------------------

VectorField gradient(const SpectralWorkspace& ws, const ScalarField& f) {
    const Spectrum base = ws.forward(f);
    VectorField out(ws.grid());
    for (std::size_t a = 0; a < ws.grid().ndim(); ++a) {
        Spectrum s = base;
        ws.deriv_inplace(s, a);
        out[a] = ws.inverse(std::move(s));
    }
    return out;
}

ScalarField divergence(const SpectralWorkspace& ws, const VectorField& v) {
    Spectrum acc(ws.spectrum_size(), 0.0);
    for (std::size_t a = 0; a < v.ndim(); ++a) {
        Spectrum s = ws.forward(v[a]);
        for (std::size_t c = 0; c < acc.size(); ++c)
            acc[c] += std::complex<double>(0.0, ws.xi(c, a)) * s[c];
    }
    return ws.inverse(std::move(acc));
}

ScalarField laplacian(const SpectralWorkspace& ws, const ScalarField& f) {
    Spectrum s = ws.forward(f);
    for (std::size_t c = 0; c < s.size(); ++c) s[c] *= -ws.xi_norm2(c);
    return ws.inverse(std::move(s));
}

TensorField sym_gradient(const SpectralWorkspace& ws, const VectorField& v) {
    const std::size_t n = v.ndim();
    std::vector<Spectrum> hat(n);
    for (std::size_t a = 0; a < n; ++a) hat[a] = ws.forward(v[a]);

    TensorField out(ws.grid());
    out.symmetric = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Spectrum s(ws.spectrum_size());
            for (std::size_t c = 0; c < s.size(); ++c)
                s[c] = 0.5 * (std::complex<double>(0.0, ws.xi(c, i)) * hat[j][c] +
                              std::complex<double>(0.0, ws.xi(c, j)) * hat[i][c]);
            ScalarField d = ws.inverse(std::move(s));
            if (j != i) out.at(j, i) = d;
            out.at(i, j) = std::move(d);
        }
    return out;
}

VectorField divergence(const SpectralWorkspace& ws, const TensorField& t) {
    const std::size_t n = t.n;
    VectorField out(ws.grid());
    for (std::size_t i = 0; i < n; ++i) {
        Spectrum acc(ws.spectrum_size(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            Spectrum s = ws.forward(t.at(i, j));
            for (std::size_t c = 0; c < acc.size(); ++c)
                acc[c] += std::complex<double>(0.0, ws.xi(c, j)) * s[c];
        }
        out[i] = ws.inverse(std::move(acc));
    }
    return out;
}

ScalarField riesz(const SpectralWorkspace& ws, const ScalarField& f, std::size_t axis) {
    Spectrum s = ws.forward(f);
    for (std::size_t c = 0; c < s.size(); ++c) {
        const double n2 = ws.xi_norm2(c);
        s[c] = (n2 == 0.0) ? 0.0
                           : s[c] * std::complex<double>(0.0, -ws.xi(c, axis) / std::sqrt(n2));
    }
    return ws.inverse(std::move(s));
}

ScalarField riesz_pair(const SpectralWorkspace& ws, const ScalarField& f,
                       std::size_t i, std::size_t j) {
    Spectrum s = ws.forward(f);
    for (std::size_t c = 0; c < s.size(); ++c) {
        const double n2 = ws.xi_norm2(c);
        s[c] = (n2 == 0.0) ? 0.0 : s[c] * (-ws.xi(c, i) * ws.xi(c, j) / n2);
    }
    return ws.inverse(std::move(s));
}

VectorField inv_laplacian_gradient(const SpectralWorkspace& ws, const ScalarField& f) {
    const Spectrum base = ws.forward(f);
    VectorField out(ws.grid());
    for (std::size_t a = 0; a < ws.grid().ndim(); ++a) {
        Spectrum s = base;
        for (std::size_t c = 0; c < s.size(); ++c) {
            const double n2 = ws.xi_norm2(c);
            s[c] = (n2 == 0.0) ? 0.0 : s[c] * std::complex<double>(0.0, -ws.xi(c, a) / n2);
        }
        out[a] = ws.inverse(std::move(s));
    }
    return out;
}

ScalarField div_inv_laplacian(const SpectralWorkspace& ws, const VectorField& v) {
    Spectrum acc(ws.spectrum_size(), 0.0);
    for (std::size_t a = 0; a < v.ndim(); ++a) {
        Spectrum s = ws.forward(v[a]);
        for (std::size_t c = 0; c < acc.size(); ++c) {
            const double n2 = ws.xi_norm2(c);
            if (n2 != 0.0) acc[c] += s[c] * std::complex<double>(0.0, -ws.xi(c, a) / n2);
        }
    }
    return ws.inverse(std::move(acc));
}

ScalarField double_riesz_contract(const SpectralWorkspace& ws, const TensorField& t) {
    const std::size_t n = t.n;
    Spectrum acc(ws.spectrum_size(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Spectrum s = ws.forward(t.at(i, j));
            for (std::size_t c = 0; c < acc.size(); ++c) {
                const double n2 = ws.xi_norm2(c);
                if (n2 != 0.0) acc[c] += s[c] * (ws.xi(c, i) * ws.xi(c, j) / n2);
            }
        }
    return ws.inverse(std::move(acc));
}

VectorField inverse_divergence(const SpectralWorkspace& ws, const ScalarField& f) {
    return inv_laplacian_gradient(ws, f);
}

ScalarField commutator_riesz(const SpectralWorkspace& ws, const ScalarField& b,
                             const ScalarField& f, std::size_t i, std::size_t j) {
    ScalarField lhs = multiply_dealiased(ws, b, riesz_pair(ws, f, i, j));
    ScalarField rhs = riesz_pair(ws, multiply_dealiased(ws, b, f), i, j);
    lhs -= rhs;
    return lhs;
}

ScalarField commutator_contract(const SpectralWorkspace& ws, const ScalarField& b,
                                const TensorField& t) {
    ScalarField acc(ws.grid());
    for (std::size_t i = 0; i < t.n; ++i)
        for (std::size_t j = 0; j < t.n; ++j)
            acc += commutator_riesz(ws, b, t.at(i, j), i, j);
    return acc;
}

ScalarField dealias(const SpectralWorkspace& ws, const ScalarField& f) {
    Spectrum s = ws.forward(f);
    ws.mask_inplace(s);
    return ws.inverse(std::move(s));
}

ScalarField multiply_dealiased(const SpectralWorkspace& ws, const ScalarField& a,
                               const ScalarField& b) {
    return dealias(ws, multiply(a, b));
}

double mean(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.data) s += v;
    return s / double(f.size());
}

double hminus1_norm(const SpectralWorkspace& ws, const ScalarField& f) {
    Spectrum s = ws.forward(f);
    for (std::size_t c = 0; c < s.size(); ++c) {
        const double n2 = ws.xi_norm2(c);
        s[c] = (n2 == 0.0) ? 0.0 : s[c] / std::sqrt(n2);
    }
    return lp_norm(ws.inverse(std::move(s)), 2.0);
}

}  // namespace evfx
