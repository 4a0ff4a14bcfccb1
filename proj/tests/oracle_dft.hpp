/// @file oracle_dft.hpp
/// @brief Dense-DFT oracle for multiplier operators, independent of the FFTW
/// path: full complex transform by direct summation with per-axis twiddle
/// tables, multipliers evaluated at signed integer frequencies. Slow and
/// simple on purpose; use small grids.

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "evfx/field.hpp"

namespace evfx::oracle {

using cplx = std::complex<double>;

struct Dft {
    Grid grid;
    std::vector<cplx> coef;  // full spectrum, flat row-major over all axes

    static std::vector<long> signed_freqs(const Grid& g, std::size_t flat) {
        std::vector<long> k(g.ndim());
        std::size_t rem = flat;
        for (std::size_t a = g.ndim(); a-- > 0;) {
            const std::size_t d = g.dims[a];
            const std::size_t i = rem % d;
            rem /= d;
            k[a] = (i <= d / 2) ? long(i) : long(i) - long(d);
        }
        return k;
    }
};

inline Dft forward(const ScalarField& f) {
    const Grid& g = f.grid;
    const std::size_t n = g.ndim();
    const std::size_t total = g.size();
    // twiddle[a][m] = exp(-2*pi*i*m/dims[a])
    std::vector<std::vector<cplx>> tw(n);
    for (std::size_t a = 0; a < n; ++a) {
        tw[a].resize(g.dims[a]);
        for (std::size_t m = 0; m < g.dims[a]; ++m) {
            const double ph = -2.0 * M_PI * double(m) / double(g.dims[a]);
            tw[a][m] = cplx(std::cos(ph), std::sin(ph));
        }
    }
    Dft out{g, std::vector<cplx>(total, cplx(0.0, 0.0))};
    std::vector<std::size_t> ki(n), xi(n);
    for (std::size_t kf = 0; kf < total; ++kf) {
        std::size_t rem = kf;
        for (std::size_t a = n; a-- > 0;) {
            ki[a] = rem % g.dims[a];
            rem /= g.dims[a];
        }
        cplx acc(0.0, 0.0);
        for (std::size_t xf = 0; xf < total; ++xf) {
            std::size_t rx = xf;
            cplx w(1.0, 0.0);
            for (std::size_t a = n; a-- > 0;) {
                xi[a] = rx % g.dims[a];
                rx /= g.dims[a];
                w *= tw[a][(ki[a] * xi[a]) % g.dims[a]];
            }
            acc += f[xf] * w;
        }
        out.coef[kf] = acc;
    }
    return out;
}

inline ScalarField inverse(const Dft& d) {
    const Grid& g = d.grid;
    const std::size_t n = g.ndim();
    const std::size_t total = g.size();
    std::vector<std::vector<cplx>> tw(n);
    for (std::size_t a = 0; a < n; ++a) {
        tw[a].resize(g.dims[a]);
        for (std::size_t m = 0; m < g.dims[a]; ++m) {
            const double ph = 2.0 * M_PI * double(m) / double(g.dims[a]);
            tw[a][m] = cplx(std::cos(ph), std::sin(ph));
        }
    }
    ScalarField out(g);
    std::vector<std::size_t> ki(n), xi(n);
    for (std::size_t xf = 0; xf < total; ++xf) {
        std::size_t rx = xf;
        for (std::size_t a = n; a-- > 0;) {
            xi[a] = rx % g.dims[a];
            rx /= g.dims[a];
        }
        cplx acc(0.0, 0.0);
        for (std::size_t kf = 0; kf < total; ++kf) {
            std::size_t rem = kf;
            cplx w(1.0, 0.0);
            for (std::size_t a = n; a-- > 0;) {
                ki[a] = rem % g.dims[a];
                rem /= g.dims[a];
                w *= tw[a][(ki[a] * xi[a]) % g.dims[a]];
            }
            acc += d.coef[kf] * w;
        }
        out[xf] = acc.real() / double(total);
    }
    return out;
}

/// Apply m(xi) where xi is the signed physical wavenumber vector.
inline ScalarField apply_multiplier(const ScalarField& f,
                                    const std::function<cplx(const std::vector<double>&)>& m) {
    Dft d = forward(f);
    const Grid& g = f.grid;
    for (std::size_t kf = 0; kf < d.coef.size(); ++kf) {
        const auto k = Dft::signed_freqs(g, kf);
        std::vector<double> xi(g.ndim());
        for (std::size_t a = 0; a < g.ndim(); ++a)
            xi[a] = 2.0 * M_PI * double(k[a]) / g.lengths[a];
        d.coef[kf] *= m(xi);
    }
    return inverse(d);
}

inline ScalarField riesz_pair(const ScalarField& f, std::size_t i, std::size_t j) {
    return apply_multiplier(f, [i, j](const std::vector<double>& xi) {
        double n2 = 0.0;
        for (double x : xi) n2 += x * x;
        return (n2 == 0.0) ? cplx(0.0, 0.0) : cplx(-xi[i] * xi[j] / n2, 0.0);
    });
}

inline ScalarField grad_inv_grad_entry(const ScalarField& f, std::size_t i, std::size_t j) {
    return apply_multiplier(f, [i, j](const std::vector<double>& xi) {
        double n2 = 0.0;
        for (double x : xi) n2 += x * x;
        return (n2 == 0.0) ? cplx(0.0, 0.0) : cplx(xi[i] * xi[j] / n2, 0.0);
    });
}

inline ScalarField dealias_23(const ScalarField& f) {
    const Grid& g = f.grid;
    Dft d = forward(f);
    for (std::size_t kf = 0; kf < d.coef.size(); ++kf) {
        const auto k = Dft::signed_freqs(g, kf);
        for (std::size_t a = 0; a < g.ndim(); ++a)
            if (std::size_t(std::labs(k[a])) > g.dims[a] / 3) d.coef[kf] = 0.0;
    }
    return inverse(d);
}

inline ScalarField commutator(const ScalarField& b, const ScalarField& f,
                              std::size_t i, std::size_t j) {
    ScalarField lhs = dealias_23(multiply(b, riesz_pair(f, i, j)));
    ScalarField rhs = riesz_pair(dealias_23(multiply(b, f)), i, j);
    lhs -= rhs;
    return lhs;
}

}  // namespace evfx::oracle
