#include "psel/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <vector>

#include "psel/errors.hpp"
#include "psel/rng.hpp"

namespace psel {

namespace {

constexpr std::uint64_t kSigmaStreamTag = 7;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void require_resolved(const KernelSpec& spec) {
  if (!spec.sigma_resolved())
    throw ContractError("rbf bandwidth not resolved (sigma must be positive)");
}

// Columns with exactly zero squared norm cannot be cosine-normalized.
void check_nonzero(const Eigen::VectorXd& sq, const char* name) {
  std::vector<Index> bad;
  for (Index i = 0; i < sq.size(); ++i)
    if (sq[i] <= 0.0) bad.push_back(i);
  if (bad.empty()) return;
  std::ostringstream os;
  os << name << ": cannot cosine-normalize zero-norm column(s)";
  for (std::size_t i = 0; i < bad.size(); ++i) os << (i ? "," : " ") << bad[i];
  throw DegenerateInputError(os.str());
}

}  // namespace

const char* to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Linear: return "linear";
    case KernelFamily::Poly3: return "poly3";
    case KernelFamily::Rbf: return "rbf";
  }
  return "unknown";
}

KernelFamily family_from_string(const std::string& name) {
  if (name == "linear") return KernelFamily::Linear;
  if (name == "poly3") return KernelFamily::Poly3;
  if (name == "rbf") return KernelFamily::Rbf;
  throw ContractError("unknown kernel family '" + name + "'");
}

double kernel_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& z, const KernelSpec& spec) {
  if (x.size() != z.size()) throw ContractError("kernel arguments must have equal length");
  Eigen::VectorXd xc = x;
  Eigen::VectorXd zc = z;
  if (spec.center_columns) {
    xc.array() -= xc.mean();
    zc.array() -= zc.mean();
  }
  switch (spec.family) {
    case KernelFamily::Linear:
    case KernelFamily::Poly3: {
      double value = xc.dot(zc);
      if (spec.cosine_normalize) {
        const double sx = xc.squaredNorm();
        const double sz = zc.squaredNorm();
        if (sx <= 0.0 || sz <= 0.0)
          throw DegenerateInputError("cannot cosine-normalize a zero-norm vector");
        value /= std::sqrt(sx * sz);
      }
      return spec.family == KernelFamily::Poly3 ? value * value * value : value;
    }
    case KernelFamily::Rbf: {
      require_resolved(spec);
      const double d2 = (xc - zc).squaredNorm();
      return std::exp(-d2 / (2.0 * spec.rbf_sigma * spec.rbf_sigma));
    }
  }
  throw ContractError("unknown kernel family");
}

DotBlocks::DotBlocks(Index n_y, Index n_x, bool need_xx)
    : yy(Eigen::MatrixXd::Zero(n_y, n_y)),
      yx(Eigen::MatrixXd::Zero(n_y, n_x)),
      xx(need_xx ? Eigen::MatrixXd::Zero(n_x, n_x) : Eigen::MatrixXd()),
      sq_x(Eigen::VectorXd::Zero(n_x)),
      has_xx(need_xx) {}

void accumulate_dots(DotBlocks& blocks, const Eigen::Ref<const ColMatrix>& y_chunk,
                     const Eigen::Ref<const ColMatrix>& x_chunk, double* yy_ms, double* yx_ms) {
  if (y_chunk.rows() != x_chunk.rows()) throw ContractError("chunk row counts differ");
  if (y_chunk.cols() != blocks.yy.rows() || x_chunk.cols() != blocks.yx.cols())
    throw ContractError("chunk column counts do not match the accumulator");
  auto start = Clock::now();
  blocks.yy.noalias() += y_chunk.transpose() * y_chunk;
  if (yy_ms) *yy_ms += ms_since(start);
  start = Clock::now();
  blocks.yx.noalias() += y_chunk.transpose() * x_chunk;
  blocks.sq_x += x_chunk.colwise().squaredNorm().transpose();
  if (blocks.has_xx) blocks.xx.noalias() += x_chunk.transpose() * x_chunk;
  if (yx_ms) *yx_ms += ms_since(start);
}

Eigen::MatrixXd kernel_from_dots(const Eigen::MatrixXd& dots, const Eigen::VectorXd& sq_rows,
                                 const Eigen::VectorXd& sq_cols, const KernelSpec& spec,
                                 const char* row_name, const char* col_name) {
  if (sq_rows.size() != dots.rows() || sq_cols.size() != dots.cols())
    throw ContractError("squared-norm vectors do not match the dot block");
  switch (spec.family) {
    case KernelFamily::Linear:
    case KernelFamily::Poly3: {
      Eigen::MatrixXd k = dots;
      if (spec.cosine_normalize) {
        check_nonzero(sq_rows, row_name);
        check_nonzero(sq_cols, col_name);
        const Eigen::VectorXd inv_r = sq_rows.cwiseSqrt().cwiseInverse();
        const Eigen::VectorXd inv_c = sq_cols.cwiseSqrt().cwiseInverse();
        k = inv_r.asDiagonal() * k * inv_c.asDiagonal();
      }
      if (spec.family == KernelFamily::Poly3) k = k.array().cube().matrix();
      return k;
    }
    case KernelFamily::Rbf: {
      require_resolved(spec);
      // Squared distances via |a - b|^2 = |a|^2 + |b|^2 - 2 a.b; when both
      // squared-norm vectors are the Gram diagonal the result has an exact
      // zero diagonal, hence unit kernel diagonal.
      Eigen::MatrixXd d2 = (-2.0 * dots).colwise() + sq_rows;
      d2.rowwise() += sq_cols.transpose();
      d2 = d2.cwiseMax(0.0);
      const double denom = 2.0 * spec.rbf_sigma * spec.rbf_sigma;
      return (-d2 / denom).array().exp().matrix();
    }
  }
  throw ContractError("unknown kernel family");
}

Eigen::MatrixXd gram(const ColMatrix& y, const KernelSpec& spec) {
  const ColMatrix yc =
      spec.center_columns ? preprocess(y, PreprocessSpec{true, false}) : y;
  KernelSpec resolved = spec;
  if (!resolved.sigma_resolved())
    resolved.rbf_sigma = auto_sigma(yc, yc, 100000, 0, SigmaSource::ReferenceOnly);
  Eigen::MatrixXd dots = yc.transpose() * yc;
  const Eigen::VectorXd diag = dots.diagonal();
  return kernel_from_dots(dots, diag, diag, resolved, "columns", "columns");
}

Eigen::MatrixXd cross_gram(const ColMatrix& y, const ColMatrix& x, const KernelSpec& spec) {
  if (y.rows() != x.rows()) throw ContractError("views must share the sample count");
  const ColMatrix yc =
      spec.center_columns ? preprocess(y, PreprocessSpec{true, false}) : y;
  const ColMatrix xc =
      spec.center_columns ? preprocess(x, PreprocessSpec{true, false}) : x;
  KernelSpec resolved = spec;
  if (!resolved.sigma_resolved())
    resolved.rbf_sigma = auto_sigma(yc, xc, 100000, 0, SigmaSource::Both);
  const Eigen::MatrixXd dots = yc.transpose() * xc;
  const Eigen::VectorXd sq_y = yc.colwise().squaredNorm().transpose();
  const Eigen::VectorXd sq_x = xc.colwise().squaredNorm().transpose();
  return kernel_from_dots(dots, sq_y, sq_x, resolved, "reference columns", "candidate columns");
}

double sigma_from_dots(const DotBlocks& blocks, std::size_t cap, std::uint64_t seed,
                       SigmaSource source) {
  const Index n_y = blocks.yy.rows();
  const Index n_x = blocks.yx.cols();
  if (source != SigmaSource::ReferenceOnly && !blocks.has_xx)
    throw ContractError("candidate self-products required for this bandwidth source");

  const Index offset = source == SigmaSource::CandidateOnly ? n_y : 0;
  const Index n = source == SigmaSource::ReferenceOnly ? n_y
                  : source == SigmaSource::CandidateOnly ? n_x
                                                         : n_y + n_x;
  if (n < 2) throw ContractError("bandwidth needs at least 2 columns");

  const auto sq_of = [&](Index i) {
    return i < n_y ? blocks.yy(i, i) : blocks.xx(i - n_y, i - n_y);
  };
  const auto dot_of = [&](Index i, Index j) {
    if (j < i) std::swap(i, j);
    if (j < n_y) return blocks.yy(i, j);
    if (i >= n_y) return blocks.xx(i - n_y, j - n_y);
    return blocks.yx(i, j - n_y);
  };
  const auto dist = [&](Index i, Index j) {
    const double d2 = sq_of(i) + sq_of(j) - 2.0 * dot_of(i, j);
    return std::sqrt(std::max(d2, 0.0));
  };

  double sum = 0.0;
  std::uint64_t count = 0;
  const std::uint64_t pairs =
      static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
  if (pairs <= cap) {
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) sum += dist(offset + i, offset + j);
    count = pairs;
  } else {
    Xoshiro256 rng(derive_seed(seed, kSigmaStreamTag, 0));
    for (std::size_t draw = 0; draw < cap; ++draw) {
      const Index i = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n)));
      Index j = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n - 1)));
      if (j >= i) ++j;
      sum += dist(offset + i, offset + j);
    }
    count = cap;
  }
  const double sigma = sum / static_cast<double>(count);
  if (sigma <= 0.0)
    throw DegenerateInputError("all columns identical: bandwidth would be zero");
  return sigma;
}

double auto_sigma(const ColMatrix& y, const ColMatrix& x, std::size_t cap, std::uint64_t seed,
                  SigmaSource source) {
  if (y.rows() != x.rows()) throw ContractError("views must share the sample count");
  const bool need_xx = source != SigmaSource::ReferenceOnly;
  DotBlocks blocks(y.cols(), x.cols(), need_xx);
  accumulate_dots(blocks, y, x, nullptr, nullptr);
  return sigma_from_dots(blocks, cap, seed, source);
}

GramFactor gram_factor(const Eigen::MatrixXd& k_yy, double rank_tol) {
  if (k_yy.rows() != k_yy.cols()) throw ContractError("Gram matrix must be square");
  const double scale = std::max(1.0, k_yy.cwiseAbs().maxCoeff());
  if ((k_yy - k_yy.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw ContractError("Gram matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (k_yy + k_yy.transpose()));
  if (eig.info() != Eigen::Success) throw Error("Gram eigendecomposition failed");

  const Index n = k_yy.rows();
  GramFactor gf;
  gf.V.resize(n, n);
  gf.s.resize(n);
  gf.s_pinv = Eigen::VectorXd::Zero(n);
  // Reorder to descending eigenvalues; the sort is stable so exact ties keep
  // the solver's basis (an identity Gram factors as V = I), and negative
  // roundoff is clamped to zero.
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return eig.eigenvalues()[a] > eig.eigenvalues()[b];
  });
  for (Index i = 0; i < n; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    gf.V.col(i) = eig.eigenvectors().col(src);
    gf.s[i] = std::sqrt(std::max(eig.eigenvalues()[src], 0.0));
  }
  const double cutoff = rank_tol * gf.s[0];
  Index rank = 0;
  while (rank < n && gf.s[rank] > cutoff && gf.s[rank] > 0.0) ++rank;
  gf.rank = rank;
  for (Index i = 0; i < rank; ++i) gf.s_pinv[i] = 1.0 / gf.s[i];
  return gf;
}

Eigen::VectorXd project_coords(const GramFactor& gf, const Eigen::VectorXd& kyx_col) {
  if (kyx_col.size() != gf.V.rows())
    throw ContractError("coordinate vector does not match the Gram dimension");
  return gf.s_pinv.asDiagonal() * (gf.V.transpose() * kyx_col);
}

Eigen::MatrixXd center_gram(const Eigen::MatrixXd& k) {
  if (k.rows() != k.cols()) throw ContractError("kernel matrix must be square");
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  if ((k - k.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw ContractError("kernel matrix is not symmetric");
  const Eigen::VectorXd mu = k.rowwise().mean();
  const double grand = k.mean();
  Eigen::MatrixXd out = k;
  out.colwise() -= mu;
  out.rowwise() -= mu.transpose();
  out.array() += grand;
  return out;
}

}  // namespace psel
