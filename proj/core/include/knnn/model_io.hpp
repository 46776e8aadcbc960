#pragma once

#include <filesystem>

#include "knnn/index.hpp"

namespace knnn {

// Model file, all integers and doubles little-endian:
//   magic "KNNN" | version u16 | D u32 | N u32 | L u32 | S u32 |
//   k_nnn u32 | n u32 | floor-policy u32 | permutation D*u32 |
//   train rows N*D f64 | packs N*S blocks | checksum u64
// Each pack block stores min(n, set width) eigenvalues followed by the
// matching eigenvectors (set-width doubles each). The checksum is
// FNV-1a 64 over every preceding byte.

/// Writes the model; load(save(m)) reproduces m bit-exactly.
void save_model(const TrainedModel& model, const std::filesystem::path& path);

/// Throws TruncatedFile on short/structurally impossible input,
/// UnsupportedVersion on bad magic or unknown version/floor policy,
/// ChecksumMismatch when the trailing FNV-1a does not validate.
TrainedModel load_model(const std::filesystem::path& path);

} // namespace knnn
