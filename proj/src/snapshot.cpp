#include "evfx/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace evfx {

namespace {

constexpr char kMagic[4] = {'E', 'V', 'F', 'X'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "snapshot writer assumes a little-endian host");

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("snapshot: truncated file (size mismatch)");
    return v;
}

void put_array(std::ofstream& out, const std::vector<double>& a) {
    out.write(reinterpret_cast<const char*>(a.data()),
              std::streamsize(a.size() * sizeof(double)));
}

void get_array(std::ifstream& in, std::vector<double>& a) {
    in.read(reinterpret_cast<char*>(a.data()), std::streamsize(a.size() * sizeof(double)));
    if (!in) throw std::runtime_error("snapshot: truncated file (size mismatch)");
}

}  // namespace

void write_snapshot(const State& s, const std::string& path) {
    if (!s.rho.finite() || !s.m.finite())
        throw std::runtime_error("snapshot: refusing to write non-finite payload");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("snapshot: cannot open " + path + " for writing");

    const Grid& g = s.rho.grid;
    out.write(kMagic, 4);
    put<std::uint32_t>(out, kVersion);
    put<std::uint32_t>(out, std::uint32_t(g.ndim()));
    for (auto d : g.dims) put<std::uint64_t>(out, std::uint64_t(d));
    for (auto l : g.lengths) put<double>(out, l);
    put<double>(out, s.t);
    put_array(out, s.rho.data);
    for (std::size_t a = 0; a < s.m.ndim(); ++a) put_array(out, s.m[a].data);
    if (!out) throw std::runtime_error("snapshot: write failed for " + path);
}

State read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("snapshot: cannot open " + path);

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("snapshot: bad magic in " + path);
    const auto version = get<std::uint32_t>(in);
    if (version != kVersion)
        throw std::runtime_error("snapshot: unsupported version " + std::to_string(version));

    const auto n = get<std::uint32_t>(in);
    if (n < 2 || n > 3) throw std::runtime_error("snapshot: bad dimension count");
    std::vector<std::size_t> dims(n);
    for (auto& d : dims) d = std::size_t(get<std::uint64_t>(in));
    std::vector<double> lengths(n);
    for (auto& l : lengths) l = get<double>(in);

    State s;
    s.rho = ScalarField(Grid(dims, lengths));
    s.m = VectorField(s.rho.grid);
    s.t = get<double>(in);
    get_array(in, s.rho.data);
    for (std::uint32_t a = 0; a < n; ++a) get_array(in, s.m[a].data);

    // exactly at end of file?
    in.peek();
    if (!in.eof()) throw std::runtime_error("snapshot: trailing bytes (size mismatch)");
    if (!s.rho.finite() || !s.m.finite())
        throw std::runtime_error("snapshot: non-finite payload in " + path);
    return s;
}

}  // namespace evfx
