#include "psel/projops.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "psel/errors.hpp"

namespace psel {

namespace {

void require_same_dim(const Projector& a, const Projector& b) {
  if (a.dim != b.dim) throw ContractError("projector dimensions differ");
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

bool is_projector(const Projector& p, double sym_tol, double idem_tol) {
  if (p.P.rows() != p.dim || p.P.cols() != p.dim) return false;
  if ((p.P - p.P.transpose()).cwiseAbs().maxCoeff() > sym_tol) return false;
  return (p.P * p.P - p.P).cwiseAbs().maxCoeff() <= idem_tol;
}

Eigen::MatrixXd pinv_sym(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.rows() != m.cols()) throw ContractError("pinv_sym requires a square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrized(m));
  const Eigen::VectorXd& vals = eig.eigenvalues();
  const double cutoff = rel_tol * vals.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(vals.size());
  for (Index i = 0; i < vals.size(); ++i)
    if (std::abs(vals[i]) > cutoff) inv[i] = 1.0 / vals[i];
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

Projector projector_from_matrix(const ColMatrix& a, double rank_tol) {
  if (a.rows() < 1 || a.cols() < 1) throw ContractError("projector source matrix is empty");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = rank_tol * (sv.size() > 0 ? sv[0] : 0.0);
  Index rank = 0;
  while (rank < sv.size() && sv[rank] > cutoff && sv[rank] > 0.0) ++rank;
  Projector p{a.rows(), Eigen::MatrixXd::Zero(a.rows(), a.rows())};
  if (rank > 0) {
    const auto u = svd.matrixU().leftCols(rank);
    p.P.noalias() = u * u.transpose();
  }
  return p;
}

Projector complement(const Projector& p) {
  return {p.dim, Eigen::MatrixXd::Identity(p.dim, p.dim) - p.P};
}

double corr(const Eigen::VectorXd& x, const Projector& p) {
  if (x.size() != p.dim) throw ContractError("vector length does not match projector dimension");
  const double norm = x.stableNorm();
  if (norm == 0.0) throw DegenerateInputError("corr of a zero vector is undefined");
  return (p.P * (x / norm)).stableNorm();
}

Projector deflate(const Projector& p, const Eigen::VectorXd& x, double alpha_tol) {
  if (x.size() != p.dim) throw ContractError("vector length does not match projector dimension");
  if (std::abs(x.stableNorm() - 1.0) > 1e-10)
    throw ContractError("deflate requires a unit-norm direction");
  Eigen::VectorXd px = p.P * x;
  const double alpha = x.dot(px);
  if (alpha <= alpha_tol) return p;
  Projector out{p.dim, p.P};
  out.P.noalias() -= px * (px.transpose() / alpha);
  return out;
}

Projector intersect_anderson(const Projector& p1, const Projector& p2, double pinv_tol) {
  require_same_dim(p1, p2);
  const Eigen::MatrixXd inv = pinv_sym(p1.P + p2.P, pinv_tol);
  return {p1.dim, symmetrized(2.0 * p1.P * inv * p2.P)};
}

Projector intersect_ben_israel(const std::vector<Projector>& ps, const BenIsraelConfig& cfg) {
  if (ps.empty()) throw ContractError("intersection of zero subspaces is undefined");
  const std::size_t n = ps.size();
  std::vector<double> lambdas = cfg.lambdas;
  if (lambdas.empty()) lambdas.assign(n, 1.0 / static_cast<double>(n));
  if (lambdas.size() != n) throw ContractError("one weight per projector required");
  double sum = 0.0;
  for (double l : lambdas) {
    if (l <= 0.0) throw ContractError("weights must be positive");
    sum += l;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ContractError("weights must sum to 1");

  const Index dim = ps[0].dim;
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    if (ps[i].dim != dim) throw ContractError("projector dimensions differ");
    q += lambdas[i] * (ident - ps[i].P);
  }
  // Q^+ Q is the projector onto range(Q); build it from the eigenvectors of
  // Q with eigenvalues above the cutoff, then subtract from the identity.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrized(q));
  const Eigen::VectorXd& vals = eig.eigenvalues();
  const double cutoff = cfg.pinv_tol * vals.cwiseAbs().maxCoeff();
  Eigen::MatrixXd result = ident;
  for (Index i = 0; i < vals.size(); ++i) {
    if (std::abs(vals[i]) > cutoff) {
      const auto v = eig.eigenvectors().col(i);
      result.noalias() -= v * v.transpose();
    }
  }
  return {dim, symmetrized(result)};
}

VonNeumannResult intersect_von_neumann(const Projector& p1, const Projector& p2, int max_iter,
                                       double conv_tol) {
  require_same_dim(p1, p2);
  if (max_iter < 1) throw ContractError("max_iter must be >= 1");
  const Eigen::MatrixXd step = p1.P * p2.P;
  Eigen::MatrixXd t = step;
  VonNeumannResult res;
  res.iterations = max_iter;
  for (int i = 1; i <= max_iter; ++i) {
    Eigen::MatrixXd next = step * t;
    const double diff = (next - t).cwiseAbs().maxCoeff();
    t.swap(next);
    if (diff <= conv_tol) {
      res.iterations = i;
      res.converged = true;
      break;
    }
  }
  res.projector = {p1.dim, symmetrized(t)};
  return res;
}

}  // namespace psel
