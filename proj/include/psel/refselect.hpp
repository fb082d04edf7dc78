#pragma once

#include "psel/selection.hpp"

namespace psel {

// Greedy selection with explicit m x m projectors: start from the projector
// onto span(Y), repeatedly pick the candidate column with the largest
// projection energy and deflate its projected direction away.  Quadratic in
// the sample count; serves as the correctness oracle for select_kernel.
// max_rows guards against accidental huge allocations.
SelectionResult select_explicit(const ColMatrix& y, const ColMatrix& x, Index d,
                                double rank_tol = 1e-10, double score_tol = 1e-12,
                                Index max_rows = 5000);

}  // namespace psel
