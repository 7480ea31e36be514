#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "leakaudit/adversary.hpp"

namespace leakaudit::adversary::detail {

// Single-precision snapshot of the best epoch of one restart.
struct RestartOutcome {
  std::vector<float> a;
  std::vector<float> b;
  std::vector<float> c;
  float c0 = 0.0f;
  double tracked_loss = 0.0;  // full-dataset loss of the snapshot (float path)
  bool has_snapshot = false;
};

// Runs one randomly initialized training restart on its own RNG stream.
// Compiled in a separate translation unit with reassociation-friendly flags;
// float precision is used for speed, final losses are re-evaluated in double
// by the caller.
RestartOutcome run_restart(std::span<const float> t, std::span<const float> s,
                           int k, const TrainConfig& cfg, std::uint64_t restart_index);

}  // namespace leakaudit::adversary::detail
