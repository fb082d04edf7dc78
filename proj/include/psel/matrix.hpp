#pragma once

#include <Eigen/Core>

namespace psel {

// Data matrices are sample-by-variable: entry (i, j) holds sample i of
// variable j.  Eigen's default column-major storage keeps each variable
// contiguous in memory, which the kernel assembly relies on.
using ColMatrix = Eigen::MatrixXd;

using Index = Eigen::Index;

struct PreprocessSpec {
  bool center = false;     // subtract the per-column mean
  bool unit_norm = false;  // scale each column to Euclidean norm 1
};

// Per-column statistics gathered in one or two passes.  `inv_norm` holds
// reciprocals so that applying the transform multiplies instead of divides;
// both the in-memory and the chunked path share these exact operations.
struct ColumnStats {
  Eigen::VectorXd mean;      // empty when centering is off
  Eigen::VectorXd inv_norm;  // empty when normalization is off
  bool center = false;
  bool unit_norm = false;
};

// Accumulators used to build ColumnStats incrementally from row chunks.
struct StatsAccumulator {
  Eigen::VectorXd col_sum;     // pass 1: per-column sums
  Eigen::VectorXd col_sq;      // pass 2: per-column squared norms after centering
  Eigen::VectorXd col_absmax;  // running max |entry| before any transform
  Index rows = 0;

  explicit StatsAccumulator(Index cols);
  void add_sums(const Eigen::Ref<const ColMatrix>& chunk);
  void add_squares(const Eigen::Ref<const ColMatrix>& chunk, const Eigen::VectorXd& mean);
  // Mean to subtract during the squares pass; empty when centering is off.
  Eigen::VectorXd mean_for_squares(bool center) const;
};

// Finalizes accumulated sums into a transform.  Throws DegenerateInputError
// listing every column whose (centered) norm falls at or below
// 1e-12 * sqrt(rows) * max|entry|.  `what` names the matrix in diagnostics.
ColumnStats finalize_stats(const StatsAccumulator& acc, const PreprocessSpec& spec,
                           const char* what);

// Applies the transform in place to a row chunk of the full matrix.
void apply_stats(Eigen::Ref<ColMatrix> chunk, const ColumnStats& stats);

// Computes the transform for a whole in-memory matrix (single chunk).
ColumnStats compute_stats(const ColMatrix& m, const PreprocessSpec& spec,
                          const char* what = "matrix");

// Returns a centered and/or column-normalized copy.  Idempotent within
// floating-point roundoff.  Throws DegenerateInputError on columns that
// cannot be normalized.
ColMatrix preprocess(const ColMatrix& m, const PreprocessSpec& spec);

}  // namespace psel
