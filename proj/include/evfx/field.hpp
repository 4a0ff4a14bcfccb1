/// @file field.hpp
/// @brief Uniform periodic grids and scalar/vector/tensor field containers.
///
/// Fields are value types: plain row-major sample arrays on a periodic
/// lattice, samples at x_k = k * spacing per axis. All operations here are
/// pure; nothing mutates shared state.

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace evfx {

struct Grid {
    std::vector<std::size_t> dims;    // points per axis, N in {2,3}
    std::vector<double> lengths;      // domain period per axis

    Grid() = default;
    Grid(std::vector<std::size_t> d, std::vector<double> l);

    std::size_t ndim() const { return dims.size(); }
    std::size_t size() const;                 // total sample count
    double spacing(std::size_t axis) const { return lengths[axis] / double(dims[axis]); }
    double cell_volume() const;
    double coord(std::size_t flat, std::size_t axis) const;  // x_k of a flat index

    bool operator==(const Grid& o) const { return dims == o.dims && lengths == o.lengths; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

    std::string describe() const;             // "64x64"
};

struct ScalarField {
    Grid grid;
    std::vector<double> data;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0);

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }
    std::size_t size() const { return data.size(); }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);
    ScalarField& axpy(double a, const ScalarField& x);   // this += a*x

    double min() const;
    double max() const;
    bool finite() const;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Pointwise product (no dealiasing here; see spectral.hpp for masked products).
ScalarField multiply(const ScalarField& a, const ScalarField& b);

/// Pointwise map f -> fn(f).
ScalarField map(const ScalarField& f, const std::function<double(double)>& fn);

/// Field sampled from a function of the space point.
ScalarField sample(const Grid& g, const std::function<double(const std::array<double, 3>&)>& fn);

struct VectorField {
    std::vector<ScalarField> comp;   // N components sharing one grid

    VectorField() = default;
    explicit VectorField(const Grid& g);

    const Grid& grid() const { return comp.front().grid; }
    std::size_t ndim() const { return comp.size(); }
    ScalarField& operator[](std::size_t a) { return comp[a]; }
    const ScalarField& operator[](std::size_t a) const { return comp[a]; }

    VectorField& operator+=(const VectorField& o);
    VectorField& operator*=(double s);
    VectorField& axpy(double a, const VectorField& x);
    bool finite() const;
};

struct TensorField {
    std::size_t n = 0;               // rank per axis (N)
    std::vector<ScalarField> comp;   // N*N components, row-major (i*n + j)
    bool symmetric = false;

    TensorField() = default;
    explicit TensorField(const Grid& g);

    const Grid& grid() const { return comp.front().grid; }
    ScalarField& at(std::size_t i, std::size_t j) { return comp[i * n + j]; }
    const ScalarField& at(std::size_t i, std::size_t j) const { return comp[i * n + j]; }
};

// --- integrals and norms -------------------------------------------------

/// Lattice sum times cell volume; spectrally accurate for smooth periodic f.
double integrate(const ScalarField& f);

/// (integrate |f|^p)^(1/p); rejects p < 1.
double lp_norm(const ScalarField& f, double p);

double linf_norm(const ScalarField& f);
double l2_distance(const ScalarField& a, const ScalarField& b);

/// Replace each block^N cells by their mean, returned at full resolution.
/// block must divide every dim.
ScalarField coarse_average(const ScalarField& f, std::size_t block);

}  // namespace evfx
