#pragma once

#include <cstdint>
#include <vector>

#include "psel/matrix.hpp"

namespace psel {

// Largest canonical correlation between the column spaces of a and b.
// Columns are centered internally; reg adds a trace-scaled ridge to each
// covariance before whitening (reg = 0 falls back to a pseudo-inverse
// square root with a 1e-12 relative eigenvalue cutoff).
double cca_first(const ColMatrix& a, const ColMatrix& b, double reg = 1e-8);

// Frobenius cosine of the double-centered kernel matrices.
double kernel_alignment(const Eigen::MatrixXd& k, const Eigen::MatrixXd& kp);

// One selection outcome in a stability study.  relevance is a length
// n_total score vector (used only by pearson_relevance).
struct SelectionRun {
  std::vector<Index> indices;
  Eigen::VectorXd relevance;
};

struct SelectionRuns {
  std::vector<SelectionRun> runs;
  Index n_total = 0;
  Index k = 0;
};

// Unbiased-variance stability index over the selection indicator matrix:
// 1 - mean_f var_f / ((k/n)(1 - k/n)).  Equals 1 iff all runs agree.
double stability_index(const SelectionRuns& runs);

// Mean Pearson correlation of relevance vectors over unordered run pairs.
double pearson_relevance(const SelectionRuns& runs);

struct KmeansOptions {
  int restarts = 1;
  std::uint64_t seed = 0;
  int max_iter = 300;
  double rel_tol = 1e-6;  // relative inertia change that stops Lloyd steps
};

// Seeded k-means (plus-plus initialization, Lloyd iterations) on the rows
// of data, scored as normalized mutual information against labels; the mean
// over restarts is returned.  Entropy normalization is the arithmetic mean;
// a zero-entropy pairing yields 0.
double kmeans_nmi(const ColMatrix& data, const std::vector<int>& labels, int n_clusters,
                  const KmeansOptions& opts = {});

}  // namespace psel
