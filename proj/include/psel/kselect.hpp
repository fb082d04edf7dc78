#pragma once

#include <cstdint>
#include <string>

#include "psel/selection.hpp"

namespace psel {

// Kernelized greedy selection.  Builds the reference Gram and cross-kernel
// blocks, factors the Gram, and runs the recursive R-matrix loop; cost is
// O(m * n_y * max(n_x, n_y)) plus the n_y^3 eigendecomposition.  An automatic
// rbf bandwidth is resolved before any kernel value is computed (sigma_seed
// drives the pair sampling for very wide inputs).
SelectionResult select_kernel(const ColMatrix& y, const ColMatrix& x, Index d,
                              const KernelSpec& spec, double rank_tol = 1e-10,
                              double score_tol = 1e-12, std::uint64_t sigma_seed = 0);

// Same selection over PSELMAT1 files, accumulating the kernel blocks across
// row chunks; peak memory is O(chunk_rows * (n_x + n_y) + n_y * n_x).  With
// a single chunk the arithmetic is identical to select_kernel.  unit_norm
// additionally scales every column to norm 1 using a preliminary stats pass
// (column centering is controlled by spec.center_columns, as in-memory).
SelectionResult select_streaming(const std::string& y_path, const std::string& x_path, Index d,
                                 const KernelSpec& spec, Index chunk_rows,
                                 double rank_tol = 1e-10, double score_tol = 1e-12,
                                 bool unit_norm = false, std::uint64_t sigma_seed = 0);

}  // namespace psel
