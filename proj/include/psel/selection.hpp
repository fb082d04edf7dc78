#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psel/kernels.hpp"
#include "psel/matrix.hpp"

namespace psel {

// Wall-clock phase breakdown of a kernel selection run, in milliseconds.
struct PhaseTimings {
  double k_yx_ms = 0.0;  // cross-kernel assembly
  double k_yy_ms = 0.0;  // reference Gram assembly
  double eig_ms = 0.0;   // Gram eigendecomposition
  double loop_ms = 0.0;  // R setup and greedy selection loop
};

// Ordered selection outcome.  scores[t] is the squared projection norm of
// the winning candidate at step t; margins[t] is its lead over the best
// non-selected runner-up (the score itself when no runner-up remains).
struct SelectionResult {
  std::vector<Index> indices;
  std::vector<double> scores;
  std::vector<double> margins;
  Index requested = 0;
  bool stopped_early = false;
  std::string reason;
  std::optional<KernelSpec> kernel;  // resolved spec; absent on explicit runs
  PhaseTimings timings;

  Index achieved() const { return static_cast<Index>(indices.size()); }
};

}  // namespace psel
