#include "psel/refselect.hpp"

#include <cmath>
#include <vector>

#include "psel/errors.hpp"
#include "psel/projops.hpp"

namespace psel {

SelectionResult select_explicit(const ColMatrix& y, const ColMatrix& x, Index d,
                                double rank_tol, double score_tol, Index max_rows) {
  if (y.rows() != x.rows()) throw ContractError("views must share the sample count");
  if (d < 1) throw ContractError("selection size must be >= 1");
  if (d > y.cols()) throw ContractError("selection size exceeds the reference variable count");
  if (y.rows() > max_rows)
    throw ContractError("explicit-projector path capped at max_rows samples");

  const Index m = x.rows();
  const Index n_x = x.cols();

  // Candidates are scored through their unit-norm representatives; zero
  // columns stay permanently at score 0 and can never win.
  ColMatrix xn = x;
  std::vector<char> dead(static_cast<std::size_t>(n_x), 0);
  for (Index j = 0; j < n_x; ++j) {
    const double norm = xn.col(j).stableNorm();
    if (norm == 0.0)
      dead[static_cast<std::size_t>(j)] = 1;
    else
      xn.col(j) /= norm;
  }

  Projector p = projector_from_matrix(y, rank_tol);
  SelectionResult res;
  res.requested = d;

  std::vector<char> chosen(static_cast<std::size_t>(n_x), 0);
  Eigen::MatrixXd projected(m, n_x);
  for (Index t = 0; t < d; ++t) {
    projected.noalias() = p.P * xn;
    Index best = -1;
    Index runner = -1;
    double best_score = -1.0;
    double runner_score = -1.0;
    for (Index j = 0; j < n_x; ++j) {
      if (chosen[static_cast<std::size_t>(j)]) continue;
      const double s = dead[static_cast<std::size_t>(j)]
                           ? 0.0
                           : projected.col(j).squaredNorm();
      if (s > best_score) {
        runner = best;
        runner_score = best_score;
        best = j;
        best_score = s;
      } else if (s > runner_score) {
        runner = j;
        runner_score = s;
      }
    }
    if (best < 0) {
      res.stopped_early = true;
      res.reason = "candidate set exhausted";
      break;
    }
    if (best_score <= score_tol) {
      res.stopped_early = true;
      res.reason = "best remaining score <= score_tol";
      break;
    }
    res.indices.push_back(best);
    res.scores.push_back(best_score);
    res.margins.push_back(runner >= 0 ? best_score - runner_score : best_score);
    chosen[static_cast<std::size_t>(best)] = 1;

    Eigen::VectorXd direction = projected.col(best) / std::sqrt(best_score);
    p = deflate(p, direction);
  }
  return res;
}

}  // namespace psel
