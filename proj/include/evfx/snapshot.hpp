/// @file snapshot.hpp
/// @brief Binary state snapshots, bit-exact and language-neutral.
///
/// Layout (little-endian): magic "EVFX", version u32 = 1, N u32,
/// dims N x u64, lengths N x f64, time f64, rho array f64, then N momentum
/// component arrays f64, all row-major.

#pragma once

#include <string>

#include "evfx/solver.hpp"

namespace evfx {

void write_snapshot(const State& s, const std::string& path);

/// Throws on magic/version mismatch, size mismatch, or non-finite payload.
State read_snapshot(const std::string& path);

}  // namespace evfx
