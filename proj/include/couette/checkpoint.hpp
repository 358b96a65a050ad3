/// @file checkpoint.hpp
/// @brief Binary little-endian snapshot of a perturbation state.
///
/// Layout: "CLMC", u32 version, u32 n1, u32 n2, f64 time, then phi, psi1, psi2, theta as
/// contiguous f64 blocks with i (x1) outer and j (x2) inner.
#pragma once

#include <cstdint>
#include <string>

#include "couette/state.hpp"

namespace couette {

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(const PerturbationState& state, const std::string& path);

/// Throws CheckpointError (bad_magic, version_mismatch, truncated, shape, io).
PerturbationState read_checkpoint(const std::string& path);

std::string encode_checkpoint(const PerturbationState& state);
PerturbationState decode_checkpoint(const std::string& bytes);

}  // namespace couette
