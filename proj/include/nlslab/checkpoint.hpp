#pragma once

// Bit-exact run checkpoints: a versioned JSON header (grid, t, step)
// with the v-array serialized as base-16 IEEE-754 doubles (little
// endian), restorable by `evolve --resume`.

#include "nlslab/morawetz.hpp"

#include <string>

namespace nlslab {

inline constexpr const char* kCheckpointFormat = "nlslab-ckpt-v1";

void save_checkpoint(const std::string& path, const SimState& state);

/// Restores the state (including the grid).  Throws on version or
/// payload mismatch.
SimState load_checkpoint(const std::string& path);

}  // namespace nlslab
