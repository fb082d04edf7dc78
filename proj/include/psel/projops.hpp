#pragma once

#include <vector>

#include "psel/matrix.hpp"

namespace psel {

// Symmetric idempotent matrix representing an orthogonal projection.
// Invariants (checked by is_projector, maintained by every constructor
// here): max|P - P^T| <= 1e-10 and max|P*P - P| <= 1e-8.
struct Projector {
  Index dim = 0;
  Eigen::MatrixXd P;
};

bool is_projector(const Projector& p, double sym_tol = 1e-10, double idem_tol = 1e-8);

// Moore-Penrose inverse of a symmetric matrix via eigendecomposition with a
// relative eigenvalue cutoff.
Eigen::MatrixXd pinv_sym(const Eigen::MatrixXd& m, double rel_tol = 1e-10);

// Orthogonal projector onto the column span of a.  Linear independence of
// the columns is not required; an all-zero a yields the zero projector.
Projector projector_from_matrix(const ColMatrix& a, double rank_tol = 1e-10);

// Projector onto the orthogonal complement of range(p).
Projector complement(const Projector& p);

// Correlation of a variable vector with the subspace of p: |P (x/|x|)|,
// a value in [0, 1] up to roundoff.
double corr(const Eigen::VectorXd& x, const Projector& p);

// Removes the direction P*x from the range of p:
//   alpha = x^T P x;  if alpha > alpha_tol:  P - (1/alpha) P x x^T P
// and p unchanged otherwise (x orthogonal to range(p)).
// Requires |x| = 1 within 1e-10.
Projector deflate(const Projector& p, const Eigen::VectorXd& x, double alpha_tol = 1e-12);

// Anderson-Duffin formula for the projector onto range(p1) n range(p2):
//   2 * P1 * pinv(P1 + P2) * P2.
Projector intersect_anderson(const Projector& p1, const Projector& p2, double pinv_tol = 1e-10);

struct BenIsraelConfig {
  std::vector<double> lambdas;  // positive weights summing to 1; empty = uniform
  double pinv_tol = 1e-10;
};

// Ben-Israel construction: Q = sum_i lambda_i (I - P_i); the intersection
// projector is I - Q^+ Q (the projector onto null(Q)).
Projector intersect_ben_israel(const std::vector<Projector>& ps, const BenIsraelConfig& cfg = {});

struct VonNeumannResult {
  Projector projector;
  int iterations = 0;
  bool converged = false;
};

// Alternating-product limit lim_n (P1 P2)^n.  Iterates T <- P1 P2 T until
// the max-norm step difference falls below conv_tol, then symmetrizes.
// Slow convergence (small principal angles) is reported, not thrown.
VonNeumannResult intersect_von_neumann(const Projector& p1, const Projector& p2,
                                       int max_iter = 10000, double conv_tol = 1e-10);

}  // namespace psel
