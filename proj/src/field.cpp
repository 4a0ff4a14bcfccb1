#include "evfx/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evfx {

Grid::Grid(std::vector<std::size_t> d, std::vector<double> l)
    : dims(std::move(d)), lengths(std::move(l)) {
    if (dims.size() < 2 || dims.size() > 3)
        throw std::invalid_argument("grid: need 2 or 3 axes, got " + std::to_string(dims.size()));
    if (lengths.size() != dims.size())
        throw std::invalid_argument("grid: dims/lengths size mismatch");
    for (std::size_t a = 0; a < dims.size(); ++a) {
        if (dims[a] < 8 || dims[a] % 2 != 0)
            throw std::invalid_argument("grid: dims must be even and >= 8");
        if (!(lengths[a] > 0.0))
            throw std::invalid_argument("grid: lengths must be positive");
    }
}

std::size_t Grid::size() const {
    std::size_t s = 1;
    for (auto d : dims) s *= d;
    return s;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (std::size_t a = 0; a < dims.size(); ++a) v *= spacing(a);
    return v;
}

double Grid::coord(std::size_t flat, std::size_t axis) const {
    // row-major: last axis fastest
    std::size_t stride = 1;
    for (std::size_t a = dims.size(); a-- > axis + 1;) stride *= dims[a];
    const std::size_t idx = (flat / stride) % dims[axis];
    return double(idx) * spacing(axis);
}

std::string Grid::describe() const {
    std::string s;
    for (std::size_t a = 0; a < dims.size(); ++a) {
        if (a) s += "x";
        s += std::to_string(dims[a]);
    }
    return s;
}

ScalarField::ScalarField(const Grid& g, double fill) : grid(g), data(g.size(), fill) {}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    if (grid != o.grid) throw std::invalid_argument("field +=: grid mismatch");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    if (grid != o.grid) throw std::invalid_argument("field -=: grid mismatch");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (auto& v : data) v *= s;
    return *this;
}

ScalarField& ScalarField::axpy(double a, const ScalarField& x) {
    if (grid != x.grid) throw std::invalid_argument("field axpy: grid mismatch");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += a * x.data[i];
    return *this;
}

double ScalarField::min() const { return *std::min_element(data.begin(), data.end()); }
double ScalarField::max() const { return *std::max_element(data.begin(), data.end()); }

bool ScalarField::finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { a += b; return a; }
ScalarField operator-(ScalarField a, const ScalarField& b) { a -= b; return a; }
ScalarField operator*(double s, ScalarField a) { a *= s; return a; }

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
    if (a.grid != b.grid) throw std::invalid_argument("multiply: grid mismatch");
    ScalarField out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

ScalarField map(const ScalarField& f, const std::function<double(double)>& fn) {
    ScalarField out(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = fn(f[i]);
    return out;
}

ScalarField sample(const Grid& g, const std::function<double(const std::array<double, 3>&)>& fn) {
    ScalarField out(g);
    const std::size_t n = g.ndim();
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t a = 0; a < n; ++a) x[a] = g.coord(i, a);
        out[i] = fn(x);
    }
    return out;
}

VectorField::VectorField(const Grid& g) : comp(g.ndim(), ScalarField(g)) {}

VectorField& VectorField::operator+=(const VectorField& o) {
    for (std::size_t a = 0; a < comp.size(); ++a) comp[a] += o.comp[a];
    return *this;
}

VectorField& VectorField::operator*=(double s) {
    for (auto& c : comp) c *= s;
    return *this;
}

VectorField& VectorField::axpy(double a, const VectorField& x) {
    for (std::size_t c = 0; c < comp.size(); ++c) comp[c].axpy(a, x.comp[c]);
    return *this;
}

bool VectorField::finite() const {
    for (const auto& c : comp)
        if (!c.finite()) return false;
    return true;
}

TensorField::TensorField(const Grid& g) : n(g.ndim()), comp(g.ndim() * g.ndim(), ScalarField(g)) {}

double integrate(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.data) s += v;
    return s * f.grid.cell_volume();
}

double lp_norm(const ScalarField& f, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    double s = 0.0;
    for (double v : f.data) s += std::pow(std::abs(v), p);
    return std::pow(s * f.grid.cell_volume(), 1.0 / p);
}

double linf_norm(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.data) m = std::max(m, std::abs(v));
    return m;
}

double l2_distance(const ScalarField& a, const ScalarField& b) {
    if (a.grid != b.grid) throw std::invalid_argument("l2_distance: grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s * a.grid.cell_volume());
}

ScalarField coarse_average(const ScalarField& f, std::size_t block) {
    const Grid& g = f.grid;
    if (block == 0) throw std::invalid_argument("coarse_average: block must be positive");
    for (auto d : g.dims)
        if (d % block != 0)
            throw std::invalid_argument("coarse_average: block must divide every dim");

    const std::size_t n = g.ndim();
    ScalarField out(g);
    // strides of the row-major layout
    std::array<std::size_t, 3> stride{};
    {
        std::size_t s = 1;
        for (std::size_t a = n; a-- > 0;) {
            stride[a] = s;
            s *= g.dims[a];
        }
    }
    std::array<std::size_t, 3> nblocks{};
    std::size_t total_blocks = 1;
    for (std::size_t a = 0; a < n; ++a) {
        nblocks[a] = g.dims[a] / block;
        total_blocks *= nblocks[a];
    }
    const double cells_per_block = std::pow(double(block), double(n));

    std::array<std::size_t, 3> bi{0, 0, 0};
    for (std::size_t b = 0; b < total_blocks; ++b) {
        // decode block multi-index
        std::size_t rem = b;
        for (std::size_t a = n; a-- > 0;) {
            bi[a] = rem % nblocks[a];
            rem /= nblocks[a];
        }
        std::size_t base = 0;
        for (std::size_t a = 0; a < n; ++a) base += bi[a] * block * stride[a];

        double sum = 0.0;
        std::array<std::size_t, 3> ci{0, 0, 0};
        const std::size_t cells = std::size_t(cells_per_block);
        for (std::size_t c = 0; c < cells; ++c) {
            std::size_t rc = c;
            for (std::size_t a = n; a-- > 0;) {
                ci[a] = rc % block;
                rc /= block;
            }
            std::size_t off = base;
            for (std::size_t a = 0; a < n; ++a) off += ci[a] * stride[a];
            sum += f[off];
        }
        const double mean = sum / cells_per_block;
        for (std::size_t c = 0; c < cells; ++c) {
            std::size_t rc = c;
            for (std::size_t a = n; a-- > 0;) {
                ci[a] = rc % block;
                rc /= block;
            }
            std::size_t off = base;
            for (std::size_t a = 0; a < n; ++a) off += ci[a] * stride[a];
            out[off] = mean;
        }
    }
    return out;
}

}  // namespace evfx
