#include "psel/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "psel/errors.hpp"
#include "psel/kernels.hpp"
#include "psel/rng.hpp"

namespace psel {

namespace {

constexpr std::uint64_t kKmeansStreamTag = 11;

// (C + ridge I)^(-1/2) for symmetric PSD C, with a relative eigenvalue
// cutoff guarding the ridge-free case.
Eigen::MatrixXd inv_sqrt_psd(const Eigen::MatrixXd& c, double ridge) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  const Eigen::VectorXd& vals = eig.eigenvalues();
  const double top = std::max(vals.cwiseAbs().maxCoeff() , 0.0);
  const double cutoff = 1e-12 * top;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(vals.size());
  for (Index i = 0; i < vals.size(); ++i) {
    const double v = vals[i] + ridge;
    if (v > cutoff && v > 0.0) inv[i] = 1.0 / std::sqrt(v);
  }
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::MatrixXd centered(const ColMatrix& m) {
  return m.rowwise() - m.colwise().mean();
}

void check_runs(const SelectionRuns& rs, bool need_relevance) {
  if (rs.runs.size() < 2) throw ContractError("at least 2 selection runs required");
  if (rs.n_total < 1) throw ContractError("candidate pool size must be >= 1");
  if (rs.k <= 0 || rs.k >= rs.n_total)
    throw ContractError("selection size must satisfy 0 < k < n_total");
  for (std::size_t r = 0; r < rs.runs.size(); ++r) {
    const auto& run = rs.runs[r];
    if (static_cast<Index>(run.indices.size()) != rs.k)
      throw ContractError("every run must select exactly k variables");
    std::vector<char> seen(static_cast<std::size_t>(rs.n_total), 0);
    for (Index idx : run.indices) {
      if (idx < 0 || idx >= rs.n_total) throw ContractError("selection index out of range");
      if (seen[static_cast<std::size_t>(idx)]++) throw ContractError("duplicate selection index");
    }
    if (need_relevance && run.relevance.size() != rs.n_total)
      throw ContractError("relevance vector length must equal n_total");
  }
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b, std::size_t run_a,
               std::size_t run_b) {
  const Eigen::VectorXd ac = a.array() - a.mean();
  const Eigen::VectorXd bc = b.array() - b.mean();
  const double na = ac.norm();
  const double nb = bc.norm();
  if (na == 0.0 || nb == 0.0) {
    std::ostringstream os;
    os << "constant relevance vector in run " << (na == 0.0 ? run_a : run_b);
    throw DegenerateInputError(os.str());
  }
  return std::clamp(ac.dot(bc) / (na * nb), -1.0, 1.0);
}

// ---- k-means internals ----------------------------------------------------

struct KmeansState {
  Eigen::MatrixXd centroids;  // n_clusters x dims
  std::vector<int> assign;
};

double sq_dist_to(const ColMatrix& data, Index point, const Eigen::MatrixXd& centroids,
                  Index c) {
  return (data.row(point) - centroids.row(c)).squaredNorm();
}

KmeansState lloyd(const ColMatrix& data, int n_clusters, Xoshiro256& rng, int max_iter,
                  double rel_tol) {
  const Index n = data.rows();
  const Index k = n_clusters;
  KmeansState st;
  st.centroids.resize(k, data.cols());
  st.assign.assign(static_cast<std::size_t>(n), 0);

  // Plus-plus seeding: first centroid uniform, the rest proportional to the
  // squared distance to the nearest chosen centroid.
  Eigen::VectorXd d2 = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  Index first = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n)));
  st.centroids.row(0) = data.row(first);
  for (Index c = 1; c < k; ++c) {
    for (Index i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], sq_dist_to(data, i, st.centroids, c - 1));
    const double total = d2.sum();
    Index pick;
    if (total <= 0.0) {
      pick = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n)));
    } else {
      const double u = rng.next_unit() * total;
      double acc = 0.0;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    }
    st.centroids.row(c) = data.row(pick);
  }

  double prev_inertia = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iter; ++iter) {
    // Assignment; ties go to the lowest centroid index.
    double inertia = 0.0;
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist_to(data, i, st.centroids, 0);
      for (Index c = 1; c < k; ++c) {
        const double d = sq_dist_to(data, i, st.centroids, c);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      st.assign[static_cast<std::size_t>(i)] = best;
      inertia += best_d;
    }

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, data.cols());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (Index i = 0; i < n; ++i) {
      sums.row(st.assign[static_cast<std::size_t>(i)]) += data.row(i);
      counts[st.assign[static_cast<std::size_t>(i)]] += 1.0;
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[c] > 0.0) {
        st.centroids.row(c) = sums.row(c) / counts[c];
      } else {
        // Re-seed an empty cluster on the point farthest from its centroid.
        Index far = 0;
        double far_d = -1.0;
        for (Index i = 0; i < n; ++i) {
          const double d = sq_dist_to(data, i, st.centroids,
                                      st.assign[static_cast<std::size_t>(i)]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        st.centroids.row(c) = data.row(far);
      }
    }

    if (std::isfinite(prev_inertia) &&
        std::abs(prev_inertia - inertia) <= rel_tol * std::max(prev_inertia, 1e-300))
      break;
    prev_inertia = inertia;
  }

  // Final assignment against the last centroid update.
  for (Index i = 0; i < n; ++i) {
    int best = 0;
    double best_d = sq_dist_to(data, i, st.centroids, 0);
    for (Index c = 1; c < k; ++c) {
      const double d = sq_dist_to(data, i, st.centroids, c);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    st.assign[static_cast<std::size_t>(i)] = best;
  }
  return st;
}

double nmi(const std::vector<int>& a, const std::vector<int>& b, int ka, int kb) {
  const std::size_t n = a.size();
  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(ka, kb);
  for (std::size_t i = 0; i < n; ++i) joint(a[i], b[i]) += 1.0;
  joint /= static_cast<double>(n);
  const Eigen::VectorXd pa = joint.rowwise().sum();
  const Eigen::VectorXd pb = joint.colwise().sum();

  double mi = 0.0;
  for (Index i = 0; i < joint.rows(); ++i)
    for (Index j = 0; j < joint.cols(); ++j)
      if (joint(i, j) > 0.0) mi += joint(i, j) * std::log(joint(i, j) / (pa[i] * pb[j]));
  double ha = 0.0;
  double hb = 0.0;
  for (Index i = 0; i < pa.size(); ++i)
    if (pa[i] > 0.0) ha -= pa[i] * std::log(pa[i]);
  for (Index j = 0; j < pb.size(); ++j)
    if (pb[j] > 0.0) hb -= pb[j] * std::log(pb[j]);

  const double denom = 0.5 * (ha + hb);
  if (denom <= 0.0) return 0.0;
  return std::clamp(mi / denom, 0.0, 1.0);
}

}  // namespace

double cca_first(const ColMatrix& a, const ColMatrix& b, double reg) {
  if (a.rows() != b.rows()) throw ContractError("views must share the sample count");
  if (a.rows() < 2) throw ContractError("canonical correlation needs at least 2 samples");
  if (reg < 0.0) throw ContractError("ridge must be >= 0");

  const Eigen::MatrixXd ac = centered(a);
  const Eigen::MatrixXd bc = centered(b);
  const Eigen::MatrixXd caa = ac.transpose() * ac;
  const Eigen::MatrixXd cbb = bc.transpose() * bc;
  const Eigen::MatrixXd cab = ac.transpose() * bc;

  const double ridge_a = reg * caa.trace() / static_cast<double>(a.cols());
  const double ridge_b = reg * cbb.trace() / static_cast<double>(b.cols());
  const Eigen::MatrixXd wa = inv_sqrt_psd(caa, ridge_a);
  const Eigen::MatrixXd wb = inv_sqrt_psd(cbb, ridge_b);

  const Eigen::MatrixXd m = wa * cab * wb;
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const double rho = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
  return std::clamp(rho, 0.0, 1.0);
}

double kernel_alignment(const Eigen::MatrixXd& k, const Eigen::MatrixXd& kp) {
  if (k.rows() != kp.rows() || k.cols() != kp.cols())
    throw ContractError("kernel matrices must have equal dimensions");
  const Eigen::MatrixXd kc = center_gram(k);
  const Eigen::MatrixXd kpc = center_gram(kp);
  const double nk = kc.norm();
  const double nkp = kpc.norm();
  const double floor_k = 1e-12 * std::max(1.0, k.norm());
  const double floor_kp = 1e-12 * std::max(1.0, kp.norm());
  if (nk <= floor_k || nkp <= floor_kp)
    throw DegenerateInputError("centering annihilates a kernel matrix");
  const double cos = (kc.array() * kpc.array()).sum() / (nk * nkp);
  return std::clamp(cos, -1.0, 1.0);
}

double stability_index(const SelectionRuns& rs) {
  check_runs(rs, false);
  const double runs = static_cast<double>(rs.runs.size());
  const double n = static_cast<double>(rs.n_total);
  const double k = static_cast<double>(rs.k);

  Eigen::VectorXd freq = Eigen::VectorXd::Zero(rs.n_total);
  for (const auto& run : rs.runs)
    for (Index idx : run.indices) freq[idx] += 1.0;

  double mean_var = 0.0;
  for (Index f = 0; f < rs.n_total; ++f) {
    const double p = freq[f] / runs;
    mean_var += runs / (runs - 1.0) * p * (1.0 - p);
  }
  mean_var /= n;
  const double denom = (k / n) * (1.0 - k / n);
  return 1.0 - mean_var / denom;
}

double pearson_relevance(const SelectionRuns& rs) {
  check_runs(rs, true);
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < rs.runs.size(); ++i)
    for (std::size_t j = i + 1; j < rs.runs.size(); ++j) {
      sum += pearson(rs.runs[i].relevance, rs.runs[j].relevance, i, j);
      ++pairs;
    }
  return sum / static_cast<double>(pairs);
}

double kmeans_nmi(const ColMatrix& data, const std::vector<int>& labels, int n_clusters,
                  const KmeansOptions& opts) {
  const Index n = data.rows();
  if (static_cast<Index>(labels.size()) != n)
    throw ContractError("one label per data row required");
  if (n_clusters < 2) throw ContractError("n_clusters must be >= 2");
  if (n_clusters > n) throw ContractError("n_clusters exceeds the sample count");
  if (opts.restarts < 1) throw ContractError("restarts must be >= 1");

  // Remap labels to a dense 0..L-1 range.
  std::map<int, int> remap;
  for (int l : labels) remap.emplace(l, 0);
  int next = 0;
  for (auto& [label, id] : remap) id = next++;
  std::vector<int> dense(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) dense[i] = remap.at(labels[i]);

  double total = 0.0;
  for (int r = 0; r < opts.restarts; ++r) {
    Xoshiro256 rng(derive_seed(opts.seed, kKmeansStreamTag, static_cast<std::uint64_t>(r)));
    const KmeansState st = lloyd(data, n_clusters, rng, opts.max_iter, opts.rel_tol);
    total += nmi(st.assign, dense, n_clusters, next);
  }
  return total / static_cast<double>(opts.restarts);
}

}  // namespace psel
