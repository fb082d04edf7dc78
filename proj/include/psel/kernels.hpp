#pragma once

#include <cstdint>
#include <string>

#include "psel/matrix.hpp"

namespace psel {

enum class KernelFamily { Linear, Poly3, Rbf };

const char* to_string(KernelFamily family);
KernelFamily family_from_string(const std::string& name);

// Kernel on variable vectors (matrix columns).  rbf_sigma <= 0 requests the
// automatic bandwidth (mean pairwise column distance); selection resolves it
// before any kernel value is computed.
struct KernelSpec {
  KernelFamily family = KernelFamily::Linear;
  double rbf_sigma = 0.0;
  bool cosine_normalize = false;
  bool center_columns = false;

  KernelSpec() = default;
  // The degree-3 kernel is cosine-normalized by default so that k(x,x) = 1.
  explicit KernelSpec(KernelFamily f)
      : family(f), cosine_normalize(f == KernelFamily::Poly3) {}

  bool sigma_resolved() const { return family != KernelFamily::Rbf || rbf_sigma > 0.0; }
};

// Scalar kernel value; reference semantics for the matrix assemblers.
double kernel_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& z, const KernelSpec& spec);

// Gram matrix over the columns of y (symmetric PSD) and cross-Gram between
// the columns of y and x.  center_columns is honored internally.
Eigen::MatrixXd gram(const ColMatrix& y, const KernelSpec& spec);
Eigen::MatrixXd cross_gram(const ColMatrix& y, const ColMatrix& x, const KernelSpec& spec);

// Which column set the automatic bandwidth averages over.
enum class SigmaSource { Both, ReferenceOnly, CandidateOnly };

// Mean Euclidean distance over distinct column pairs of the chosen set.
// When the pair count exceeds cap, pairs are sampled with a seeded
// generator; the result is deterministic given (cap, seed).
double auto_sigma(const ColMatrix& y, const ColMatrix& x, std::size_t cap = 100000,
                  std::uint64_t seed = 0, SigmaSource source = SigmaSource::Both);

// Eigendecomposition artifacts of a reference Gram matrix: K = V diag(s^2) V^T
// with s descending.  s_pinv holds reciprocals above the rank cutoff, 0 below.
struct GramFactor {
  Eigen::MatrixXd V;
  Eigen::VectorXd s;
  Eigen::VectorXd s_pinv;
  Index rank = 0;
};

GramFactor gram_factor(const Eigen::MatrixXd& k_yy, double rank_tol = 1e-10);

// Coordinates of an implicitly mapped candidate in the reference basis:
// diag(s_pinv) V^T kyx_col.  Its squared norm is the projection energy.
Eigen::VectorXd project_coords(const GramFactor& gf, const Eigen::VectorXd& kyx_col);

// Double centering H K H with H = I - (1/n) 1 1^T.
Eigen::MatrixXd center_gram(const Eigen::MatrixXd& k);

// ---- shared assembly machinery ------------------------------------------
// Selection builds kernels from raw dot-product blocks so that the in-memory
// and the row-chunked streaming paths run the exact same arithmetic: chunks
// only ever contribute additive updates to these blocks.

struct DotBlocks {
  Eigen::MatrixXd yy;    // Y^T Y
  Eigen::MatrixXd yx;    // Y^T X
  Eigen::MatrixXd xx;    // X^T X, tracked only when needed (auto bandwidth)
  Eigen::VectorXd sq_x;  // squared norms of candidate columns
  bool has_xx = false;

  DotBlocks(Index n_y, Index n_x, bool need_xx);
};

// Adds one row chunk's contribution.  Wall time of the Y^T Y update is added
// to *yy_ms and of the cross/candidate updates to *yx_ms when non-null.
void accumulate_dots(DotBlocks& blocks, const Eigen::Ref<const ColMatrix>& y_chunk,
                     const Eigen::Ref<const ColMatrix>& x_chunk, double* yy_ms, double* yx_ms);

// Applies the kernel map to a block of raw dot products.  sq_rows/sq_cols
// are the squared norms of the row-side and column-side columns; symmetric
// blocks pass the Gram diagonal for both so that rbf diagonals are exactly 1.
// row_name/col_name label the two sides in degenerate-column diagnostics.
Eigen::MatrixXd kernel_from_dots(const Eigen::MatrixXd& dots, const Eigen::VectorXd& sq_rows,
                                 const Eigen::VectorXd& sq_cols, const KernelSpec& spec,
                                 const char* row_name, const char* col_name);

// Automatic bandwidth evaluated on dot blocks (the streaming path never
// materializes columns).  Requires blocks.has_xx unless source is
// ReferenceOnly.
double sigma_from_dots(const DotBlocks& blocks, std::size_t cap, std::uint64_t seed,
                       SigmaSource source);

}  // namespace psel
