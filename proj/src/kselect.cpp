#include "psel/kselect.hpp"

#include <chrono>
#include <cmath>

#include "psel/errors.hpp"
#include "psel/io.hpp"

namespace psel {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void check_request(Index rows_y, Index rows_x, Index n_y, Index d) {
  if (rows_y != rows_x) throw ContractError("views must share the sample count");
  if (d < 1) throw ContractError("selection size must be >= 1");
  if (d > n_y) throw ContractError("selection size exceeds the reference variable count");
}

// Kernel maps, Gram factorization, and the greedy loop over R.  Both entry
// points funnel through here once the dot blocks exist, so the streaming
// path reproduces the in-memory arithmetic exactly.
SelectionResult run_from_dots(const DotBlocks& blocks, Index d, KernelSpec spec,
                              double rank_tol, double score_tol, std::uint64_t sigma_seed,
                              PhaseTimings timings) {
  if (spec.family == KernelFamily::Rbf && !spec.sigma_resolved())
    spec.rbf_sigma = sigma_from_dots(blocks, 100000, sigma_seed, SigmaSource::Both);

  auto start = Clock::now();
  const Eigen::VectorXd diag_yy = blocks.yy.diagonal();
  const Eigen::MatrixXd k_yy = kernel_from_dots(blocks.yy, diag_yy, diag_yy, spec,
                                                "reference columns", "reference columns");
  timings.k_yy_ms += ms_since(start);

  start = Clock::now();
  const Eigen::MatrixXd k_yx = kernel_from_dots(blocks.yx, diag_yy, blocks.sq_x, spec,
                                                "reference columns", "candidate columns");
  timings.k_yx_ms += ms_since(start);

  start = Clock::now();
  const GramFactor gf = gram_factor(k_yy, rank_tol);
  timings.eig_ms += ms_since(start);

  start = Clock::now();
  const Index n_x = k_yx.cols();
  Eigen::MatrixXd r = gf.s_pinv.asDiagonal() * (gf.V.transpose() * k_yx);

  SelectionResult res;
  res.requested = d;
  res.kernel = spec;

  // Selected columns are masked by a -1 sentinel in the running-score
  // vector; R keeps its full width so indices stay stable.
  Eigen::VectorXd running = r.colwise().squaredNorm().transpose();
  Eigen::VectorXd q;
  Eigen::VectorXd w;
  double q_norm2 = 0.0;

  for (Index t = 0; t < d; ++t) {
    if (t > 0) {
      // Deflate the previous pivot out of R and update the running scores
      // from the same rank-one structure.
      w.noalias() = r.transpose() * q;
      r.noalias() -= q * (w.transpose() / q_norm2);
      for (Index j = 0; j < n_x; ++j) {
        if (running[j] < 0.0) continue;
        running[j] = std::max(running[j] - w[j] * w[j] / q_norm2, 0.0);
      }
      if (t % 64 == 0) {
        // Periodic exact recomputation bounds accumulated rounding drift.
        for (Index j = 0; j < n_x; ++j)
          if (running[j] >= 0.0) running[j] = r.col(j).squaredNorm();
      }
    }

    Index best = -1;
    Index runner = -1;
    for (Index j = 0; j < n_x; ++j) {
      if (running[j] < 0.0) continue;
      if (best < 0 || running[j] > running[best]) {
        runner = best;
        best = j;
      } else if (runner < 0 || running[j] > running[runner]) {
        runner = j;
      }
    }
    if (best < 0) {
      res.stopped_early = true;
      res.reason = "candidate set exhausted";
      break;
    }

    // The pivot energy is the reported score and the deflation divisor:
    // one arithmetic object, per the pivot-norm invariant.
    q = r.col(best);
    q_norm2 = q.squaredNorm();
    if (q_norm2 <= score_tol) {
      res.stopped_early = true;
      res.reason = "best remaining score <= score_tol";
      break;
    }
    res.indices.push_back(best);
    res.scores.push_back(q_norm2);
    res.margins.push_back(runner >= 0 ? q_norm2 - running[runner] : q_norm2);
    running[best] = -1.0;
  }
  timings.loop_ms += ms_since(start);
  res.timings = timings;
  return res;
}

}  // namespace

SelectionResult select_kernel(const ColMatrix& y, const ColMatrix& x, Index d,
                              const KernelSpec& spec, double rank_tol, double score_tol,
                              std::uint64_t sigma_seed) {
  check_request(y.rows(), x.rows(), y.cols(), d);

  const ColMatrix yc =
      spec.center_columns ? preprocess(y, PreprocessSpec{true, false}) : y;
  const ColMatrix xc =
      spec.center_columns ? preprocess(x, PreprocessSpec{true, false}) : x;

  const bool need_xx = spec.family == KernelFamily::Rbf && !spec.sigma_resolved();
  DotBlocks blocks(yc.cols(), xc.cols(), need_xx);
  PhaseTimings timings;
  accumulate_dots(blocks, yc, xc, &timings.k_yy_ms, &timings.k_yx_ms);
  return run_from_dots(blocks, d, spec, rank_tol, score_tol, sigma_seed, timings);
}

SelectionResult select_streaming(const std::string& y_path, const std::string& x_path, Index d,
                                 const KernelSpec& spec, Index chunk_rows, double rank_tol,
                                 double score_tol, bool unit_norm, std::uint64_t sigma_seed) {
  if (chunk_rows < 1) throw ContractError("chunk_rows must be >= 1");
  MatrixChunkReader ry(y_path);
  MatrixChunkReader rx(x_path);
  check_request(ry.rows(), rx.rows(), ry.cols(), d);

  const Index m = ry.rows();
  const PreprocessSpec pre{spec.center_columns, unit_norm};
  const bool transform = pre.center || pre.unit_norm;

  const auto for_each_chunk = [&](auto&& body) {
    for (Index begin = 0; begin < m; begin += chunk_rows) {
      const Index count = std::min(chunk_rows, m - begin);
      body(ry.read_rows(begin, count), rx.read_rows(begin, count));
    }
  };

  ColumnStats stats_y;
  ColumnStats stats_x;
  if (transform) {
    StatsAccumulator acc_y(ry.cols());
    StatsAccumulator acc_x(rx.cols());
    for_each_chunk([&](const ColMatrix& cy, const ColMatrix& cx) {
      acc_y.add_sums(cy);
      acc_x.add_sums(cx);
    });
    if (pre.unit_norm) {
      const Eigen::VectorXd mean_y = acc_y.mean_for_squares(pre.center);
      const Eigen::VectorXd mean_x = acc_x.mean_for_squares(pre.center);
      for_each_chunk([&](const ColMatrix& cy, const ColMatrix& cx) {
        acc_y.add_squares(cy, mean_y);
        acc_x.add_squares(cx, mean_x);
      });
    }
    stats_y = finalize_stats(acc_y, pre, "reference view");
    stats_x = finalize_stats(acc_x, pre, "candidate view");
  }

  const bool need_xx = spec.family == KernelFamily::Rbf && !spec.sigma_resolved();
  DotBlocks blocks(ry.cols(), rx.cols(), need_xx);
  PhaseTimings timings;
  for_each_chunk([&](ColMatrix cy, ColMatrix cx) {
    if (transform) {
      apply_stats(cy, stats_y);
      apply_stats(cx, stats_x);
    }
    accumulate_dots(blocks, cy, cx, &timings.k_yy_ms, &timings.k_yx_ms);
  });

  return run_from_dots(blocks, d, spec, rank_tol, score_tol, sigma_seed, timings);
}

}  // namespace psel
