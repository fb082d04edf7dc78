#include "psel/datagen.hpp"

#include <algorithm>
#include <limits>

#include "psel/errors.hpp"
#include "psel/io.hpp"
#include "psel/rng.hpp"

namespace psel {

namespace {

// Stream tags; fixed forever for reproducibility.
constexpr std::uint64_t kTagX = 1;
constexpr std::uint64_t kTagW = 2;
constexpr std::uint64_t kTagE = 3;

constexpr Index kColBlock = 32;  // X column block for the file writer

void check_spec(const GenSpec& spec) {
  if (spec.m < 1 || spec.n_x < 1 || spec.n_y < 1)
    throw ContractError("generation dimensions must be >= 1");
  if (spec.sigma < 0.0) throw ContractError("sigma must be >= 0");
  const Index max_cols = std::max(spec.n_x, spec.n_y);
  if (spec.m > std::numeric_limits<Index>::max() / 8 / max_cols)
    throw ContractError("requested matrix would overflow the allocation size");
}

void fill_column(Eigen::Ref<Eigen::VectorXd> col, std::uint64_t seed, std::uint64_t tag,
                 std::uint64_t index, double sigma) {
  NormalSampler sampler(derive_seed(seed, tag, index));
  for (Index i = 0; i < col.size(); ++i) col[i] = sigma * sampler.next();
}

ColMatrix draw_matrix(Index rows, Index cols, std::uint64_t seed, std::uint64_t tag,
                      double sigma) {
  ColMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    fill_column(m.col(j), seed, tag, static_cast<std::uint64_t>(j), sigma);
  return m;
}

}  // namespace

TwoView generate(const GenSpec& spec) {
  check_spec(spec);
  TwoView out;
  out.x = draw_matrix(spec.m, spec.n_x, spec.seed, kTagX, spec.sigma);
  const ColMatrix w = draw_matrix(spec.n_x, spec.n_y, spec.seed, kTagW, spec.sigma);
  out.y.noalias() = out.x * w;
  if (spec.noise) {
    for (Index j = 0; j < spec.n_y; ++j) {
      NormalSampler sampler(derive_seed(spec.seed, kTagE, static_cast<std::uint64_t>(j)));
      for (Index i = 0; i < spec.m; ++i) out.y(i, j) += spec.sigma * sampler.next();
    }
  }
  return out;
}

void generate_files(const GenSpec& spec, const std::string& x_path, const std::string& y_path) {
  check_spec(spec);
  const ColMatrix w = draw_matrix(spec.n_x, spec.n_y, spec.seed, kTagW, spec.sigma);

  // X streams to disk in column blocks while Y accumulates X * W.
  MatrixStreamWriter writer(x_path, spec.m, spec.n_x);
  ColMatrix y = ColMatrix::Zero(spec.m, spec.n_y);
  ColMatrix block(spec.m, std::min(kColBlock, spec.n_x));
  for (Index j0 = 0; j0 < spec.n_x; j0 += kColBlock) {
    const Index width = std::min(kColBlock, spec.n_x - j0);
    for (Index j = 0; j < width; ++j)
      fill_column(block.col(j), spec.seed, kTagX, static_cast<std::uint64_t>(j0 + j),
                  spec.sigma);
    writer.append(block.data(),
                  static_cast<std::size_t>(spec.m) * static_cast<std::size_t>(width));
    y.noalias() += block.leftCols(width) * w.middleRows(j0, width);
  }
  writer.finish();

  if (spec.noise) {
    for (Index j = 0; j < spec.n_y; ++j) {
      NormalSampler sampler(derive_seed(spec.seed, kTagE, static_cast<std::uint64_t>(j)));
      for (Index i = 0; i < spec.m; ++i) y(i, j) += spec.sigma * sampler.next();
    }
  }
  save_bin(y, y_path);
}

}  // namespace psel
