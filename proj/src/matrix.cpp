#include "psel/matrix.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "psel/errors.hpp"

namespace psel {

StatsAccumulator::StatsAccumulator(Index cols)
    : col_sum(Eigen::VectorXd::Zero(cols)),
      col_sq(Eigen::VectorXd::Zero(cols)),
      col_absmax(Eigen::VectorXd::Zero(cols)) {}

void StatsAccumulator::add_sums(const Eigen::Ref<const ColMatrix>& chunk) {
  col_sum += chunk.colwise().sum().transpose();
  col_absmax = col_absmax.cwiseMax(chunk.cwiseAbs().colwise().maxCoeff().transpose());
  rows += chunk.rows();
}

void StatsAccumulator::add_squares(const Eigen::Ref<const ColMatrix>& chunk,
                                   const Eigen::VectorXd& mean) {
  if (mean.size() == 0) {
    col_sq += chunk.colwise().squaredNorm().transpose();
  } else {
    col_sq += (chunk.rowwise() - mean.transpose()).colwise().squaredNorm().transpose();
  }
}

Eigen::VectorXd StatsAccumulator::mean_for_squares(bool center) const {
  if (!center) return {};
  return col_sum / static_cast<double>(rows);
}

ColumnStats finalize_stats(const StatsAccumulator& acc, const PreprocessSpec& spec,
                           const char* what) {
  ColumnStats stats;
  stats.center = spec.center;
  stats.unit_norm = spec.unit_norm;
  if (acc.rows == 0 && (spec.center || spec.unit_norm))
    throw ContractError("cannot preprocess an empty matrix");
  if (spec.center) stats.mean = acc.col_sum / static_cast<double>(acc.rows);
  if (spec.unit_norm) {
    const double scale = 1e-12 * std::sqrt(static_cast<double>(acc.rows));
    std::vector<Index> bad;
    stats.inv_norm.resize(acc.col_sq.size());
    for (Index j = 0; j < acc.col_sq.size(); ++j) {
      const double norm = std::sqrt(acc.col_sq[j]);
      if (norm <= scale * acc.col_absmax[j] || norm == 0.0) {
        bad.push_back(j);
        stats.inv_norm[j] = 0.0;
      } else {
        stats.inv_norm[j] = 1.0 / norm;
      }
    }
    if (!bad.empty()) {
      std::ostringstream os;
      os << what << ": cannot normalize degenerate column(s)";
      for (std::size_t i = 0; i < bad.size(); ++i) os << (i ? "," : " ") << bad[i];
      throw DegenerateInputError(os.str());
    }
  }
  return stats;
}

void apply_stats(Eigen::Ref<ColMatrix> chunk, const ColumnStats& stats) {
  if (stats.center) chunk.rowwise() -= stats.mean.transpose();
  if (stats.unit_norm) chunk = chunk * stats.inv_norm.asDiagonal();
}

ColumnStats compute_stats(const ColMatrix& m, const PreprocessSpec& spec, const char* what) {
  StatsAccumulator acc(m.cols());
  acc.add_sums(m);
  if (spec.unit_norm) acc.add_squares(m, acc.mean_for_squares(spec.center));
  return finalize_stats(acc, spec, what);
}

ColMatrix preprocess(const ColMatrix& m, const PreprocessSpec& spec) {
  if (!spec.center && !spec.unit_norm) return m;
  const ColumnStats stats = compute_stats(m, spec);
  ColMatrix out = m;
  apply_stats(out, stats);
  return out;
}

}  // namespace psel
