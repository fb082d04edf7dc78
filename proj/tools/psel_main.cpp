// Command-line front end: data generation, selection, benchmarking, and
// evaluation over two-view matrix files.
#include <CLI11.hpp>
#include <json.hpp>

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "psel/datagen.hpp"
#include "psel/errors.hpp"
#include "psel/io.hpp"
#include "psel/json_out.hpp"
#include "psel/kselect.hpp"
#include "psel/matrix.hpp"
#include "psel/metrics.hpp"
#include "psel/refselect.hpp"
#include "psel/rng.hpp"

namespace {

using psel::ColMatrix;
using psel::ContractError;
using psel::Index;
using psel::IoError;
using psel::KernelSpec;

constexpr std::uint64_t kSubsampleStreamTag = 21;

enum class FileFormat { Auto, Csv, Bin };

FileFormat parse_format(const std::string& name) {
  if (name == "auto") return FileFormat::Auto;
  if (name == "csv") return FileFormat::Csv;
  if (name == "bin") return FileFormat::Bin;
  throw ContractError("unknown --format value '" + name + "'");
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

FileFormat resolve_format(const std::string& path, FileFormat requested) {
  if (requested != FileFormat::Auto) return requested;
  return ends_with(path, ".csv") ? FileFormat::Csv : FileFormat::Bin;
}

ColMatrix load_matrix(const std::string& path, FileFormat requested) {
  return resolve_format(path, requested) == FileFormat::Csv ? psel::load_csv(path)
                                                            : psel::load_bin(path);
}

// Shared kernel flags.  The bandwidth text is either "auto" or a positive
// number; a numeric bandwidth only makes sense for the rbf family.
struct KernelFlags {
  std::string family = "linear";
  std::string rbf_sigma = "auto";
  bool sigma_given = false;
  bool center = false;
};

void add_kernel_flags(CLI::App* cmd, KernelFlags& kf) {
  cmd->add_option("--kernel", kf.family, "kernel family: linear, poly3, or rbf");
  cmd->add_option("--rbf-sigma", kf.rbf_sigma, "rbf bandwidth: 'auto' or a positive value");
  cmd->add_flag("--center", kf.center, "center every column before the kernel");
}

KernelSpec make_kernel_spec(const KernelFlags& kf) {
  KernelSpec spec(psel::family_from_string(kf.family));
  spec.center_columns = kf.center;
  if (kf.rbf_sigma != "auto") {
    if (spec.family != psel::KernelFamily::Rbf)
      throw ContractError("--rbf-sigma requires --kernel rbf");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(kf.rbf_sigma, &used);
    } catch (const std::exception&) {
      throw ContractError("--rbf-sigma must be 'auto' or a positive number");
    }
    if (used != kf.rbf_sigma.size() || !(v > 0.0))
      throw ContractError("--rbf-sigma must be 'auto' or a positive number");
    spec.rbf_sigma = v;
  } else if (kf.sigma_given && spec.family != psel::KernelFamily::Rbf) {
    throw ContractError("--rbf-sigma requires --kernel rbf");
  }
  return spec;
}

void emit_json(const nlohmann::json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw IoError(out_path + ": cannot open file for writing");
  out << text;
  if (!out) throw IoError(out_path + ": write failed");
}

void print_timings(const psel::PhaseTimings& t) {
  std::cerr << "Computing K_yx: " << t.k_yx_ms << " ms\n"
            << "Computing K_yy: " << t.k_yy_ms << " ms\n"
            << "Eigen decomp. of K_yy: " << t.eig_ms << " ms\n"
            << "Selection loop: " << t.loop_ms << " ms\n";
}

// ---- select ----------------------------------------------------------------

struct SelectConfig {
  std::string x_path;
  std::string y_path;
  std::int64_t d = 0;
  KernelFlags kernel;
  bool normalize = false;
  double rank_tol = 1e-10;
  double score_tol = 1e-12;
  std::int64_t chunk_rows = 0;
  std::uint64_t seed = 0;
  std::string out;
  bool timings = false;
  std::string format = "auto";
};

int run_select(const SelectConfig& cfg) {
  const KernelSpec spec = make_kernel_spec(cfg.kernel);
  const FileFormat requested = parse_format(cfg.format);
  const FileFormat fmt_x = resolve_format(cfg.x_path, requested);
  const FileFormat fmt_y = resolve_format(cfg.y_path, requested);
  const bool both_bin = fmt_x == FileFormat::Bin && fmt_y == FileFormat::Bin;

  if (cfg.chunk_rows > 0 && !both_bin)
    throw ContractError("--chunk-rows requires binary matrix inputs");

  psel::SelectionResult res;
  if (both_bin) {
    Index chunk = static_cast<Index>(cfg.chunk_rows);
    if (chunk <= 0) chunk = psel::MatrixChunkReader(cfg.y_path).rows();
    res = psel::select_streaming(cfg.y_path, cfg.x_path, static_cast<Index>(cfg.d), spec,
                                 chunk, cfg.rank_tol, cfg.score_tol, cfg.normalize, cfg.seed);
  } else {
    ColMatrix x = load_matrix(cfg.x_path, fmt_x);
    ColMatrix y = load_matrix(cfg.y_path, fmt_y);
    if (cfg.normalize) {
      const psel::PreprocessSpec pp{spec.center_columns, true};
      x = psel::preprocess(x, pp);
      y = psel::preprocess(y, pp);
      KernelSpec applied = spec;
      applied.center_columns = false;
      res = psel::select_kernel(y, x, static_cast<Index>(cfg.d), applied, cfg.rank_tol,
                                cfg.score_tol, cfg.seed);
      if (res.kernel) res.kernel->center_columns = spec.center_columns;
    } else {
      res = psel::select_kernel(y, x, static_cast<Index>(cfg.d), spec, cfg.rank_tol,
                                cfg.score_tol, cfg.seed);
    }
  }

  if (cfg.timings) print_timings(res.timings);
  emit_json(psel::selection_to_json(res), cfg.out);
  return 0;
}

// ---- gen -------------------------------------------------------------------

struct GenConfig {
  std::string out_x;
  std::string out_y;
  std::int64_t m = 0;
  std::int64_t n_x = 0;
  std::int64_t n_y = 0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  std::string noise = "on";
  std::string format = "auto";
};

int run_gen(const GenConfig& cfg) {
  psel::GenSpec spec;
  spec.m = static_cast<Index>(cfg.m);
  spec.n_x = static_cast<Index>(cfg.n_x);
  spec.n_y = static_cast<Index>(cfg.n_y);
  spec.sigma = cfg.sigma;
  spec.seed = cfg.seed;
  if (cfg.noise == "on")
    spec.noise = true;
  else if (cfg.noise == "off")
    spec.noise = false;
  else
    throw ContractError("--noise must be 'on' or 'off'");

  const FileFormat requested = parse_format(cfg.format);
  const FileFormat fmt_x = resolve_format(cfg.out_x, requested);
  const FileFormat fmt_y = resolve_format(cfg.out_y, requested);
  if (fmt_x != fmt_y) throw ContractError("both outputs must use the same format");

  if (fmt_x == FileFormat::Bin) {
    psel::generate_files(spec, cfg.out_x, cfg.out_y);
  } else {
    const psel::TwoView v = psel::generate(spec);
    psel::save_csv(v.x, cfg.out_x);
    psel::save_csv(v.y, cfg.out_y);
  }
  return 0;
}

// ---- bench -----------------------------------------------------------------

struct BenchConfig {
  std::vector<std::int64_t> m_grid;
  std::int64_t n_x = 100;
  std::int64_t n_y = 100;
  std::int64_t d = 10;
  KernelFlags kernel;
  std::int64_t chunk_rows = 65536;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_bench(const BenchConfig& cfg) {
  const KernelSpec spec = make_kernel_spec(cfg.kernel);
  if (cfg.m_grid.empty()) throw ContractError("--m-grid must list at least one sample count");
  if (cfg.chunk_rows < 1) throw ContractError("--chunk-rows must be >= 1");

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::trunc);
    if (!file) throw IoError(cfg.out + ": cannot open file for writing");
    out = &file;
  }

  const auto dir = std::filesystem::temp_directory_path() /
                   ("psel-bench-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string x_path = (dir / "x.bin").string();
  const std::string y_path = (dir / "y.bin").string();

  *out << "m,k_yy_ms,k_yx_ms,eig_ms,loop_ms,total_ms\n";
  for (std::int64_t m : cfg.m_grid) {
    psel::GenSpec gen;
    gen.m = static_cast<Index>(m);
    gen.n_x = static_cast<Index>(cfg.n_x);
    gen.n_y = static_cast<Index>(cfg.n_y);
    gen.sigma = cfg.sigma;
    gen.seed = cfg.seed;
    psel::generate_files(gen, x_path, y_path);

    const auto start = std::chrono::steady_clock::now();
    const psel::SelectionResult res =
        psel::select_streaming(y_path, x_path, static_cast<Index>(cfg.d), spec,
                               static_cast<Index>(cfg.chunk_rows), 1e-10, 1e-12, false,
                               cfg.seed);
    const double total =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    *out << m << ',' << res.timings.k_yy_ms << ',' << res.timings.k_yx_ms << ','
         << res.timings.eig_ms << ',' << res.timings.loop_ms << ',' << total << '\n';
    out->flush();
  }
  std::filesystem::remove_all(dir);
  return 0;
}

// ---- eval ------------------------------------------------------------------

struct EvalCcaConfig {
  std::string x_path;
  std::string y_path;
  double reg = 1e-8;
  std::string out;
  std::string format = "auto";
};

int run_eval_cca(const EvalCcaConfig& cfg) {
  const FileFormat requested = parse_format(cfg.format);
  const ColMatrix a = load_matrix(cfg.x_path, requested);
  const ColMatrix b = load_matrix(cfg.y_path, requested);
  nlohmann::json j;
  j["cca_first"] = psel::cca_first(a, b, cfg.reg);
  emit_json(j, cfg.out);
  return 0;
}

struct EvalAlignConfig {
  std::string x_path;
  std::string y_path;
  KernelFlags kernel;
  std::string out;
  std::string format = "auto";
};

int run_eval_alignment(const EvalAlignConfig& cfg) {
  const KernelSpec spec = make_kernel_spec(cfg.kernel);
  const FileFormat requested = parse_format(cfg.format);
  const ColMatrix a = load_matrix(cfg.x_path, requested);
  const ColMatrix b = load_matrix(cfg.y_path, requested);
  // Sample-space Gram matrices: kernels between rows, so the two views give
  // matrices over the same index set.
  const Eigen::MatrixXd ka = psel::gram(a.transpose(), spec);
  const Eigen::MatrixXd kb = psel::gram(b.transpose(), spec);
  nlohmann::json j;
  j["kernel_alignment"] = psel::kernel_alignment(ka, kb);
  emit_json(j, cfg.out);
  return 0;
}

struct EvalStabilityConfig {
  std::string x_path;
  std::string y_path;
  std::int64_t d = 0;
  KernelFlags kernel;
  bool normalize = false;
  std::vector<double> fractions = {0.1, 0.2, 0.3, 0.4, 0.5};
  std::int64_t repeats = 10;
  std::uint64_t seed = 0;
  double rank_tol = 1e-10;
  double score_tol = 1e-12;
  std::string out;
  std::string format = "auto";
};

std::vector<Index> sample_rows(Index m, Index count, psel::Xoshiro256& rng) {
  std::vector<Index> pool(static_cast<std::size_t>(m));
  std::iota(pool.begin(), pool.end(), Index(0));
  for (Index i = 0; i < count; ++i) {
    const Index j =
        i + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(m - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

ColMatrix take_rows(const ColMatrix& m, const std::vector<Index>& rows) {
  ColMatrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = m.row(rows[i]);
  return out;
}

int run_eval_stability(const EvalStabilityConfig& cfg) {
  KernelSpec spec = make_kernel_spec(cfg.kernel);
  const FileFormat requested = parse_format(cfg.format);
  ColMatrix x = load_matrix(cfg.x_path, requested);
  ColMatrix y = load_matrix(cfg.y_path, requested);
  if (cfg.repeats < 2) throw ContractError("--repeats must be >= 2");
  for (double f : cfg.fractions)
    if (!(f > 0.0) || f > 1.0) throw ContractError("--fractions values must lie in (0, 1]");

  if (cfg.normalize) {
    const psel::PreprocessSpec pp{spec.center_columns, true};
    x = psel::preprocess(x, pp);
    y = psel::preprocess(y, pp);
    spec.center_columns = false;
  }

  const Index m = x.rows();
  nlohmann::json j;
  j["repeats"] = cfg.repeats;
  j["fractions"] = cfg.fractions;
  std::vector<double> stability;
  std::vector<double> relevance_corr;
  std::vector<std::int64_t> used;

  for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
    const Index count =
        std::min<Index>(m, std::max<Index>(2, static_cast<Index>(
                                                  std::llround(cfg.fractions[fi] * m))));
    psel::SelectionRuns runs;
    runs.n_total = x.cols();
    runs.k = static_cast<Index>(cfg.d);
    for (std::int64_t rep = 0; rep < cfg.repeats; ++rep) {
      psel::Xoshiro256 rng(psel::derive_seed(
          cfg.seed, kSubsampleStreamTag,
          static_cast<std::uint64_t>(fi) * 100000 + static_cast<std::uint64_t>(rep)));
      const std::vector<Index> rows = sample_rows(m, count, rng);
      const psel::SelectionResult res =
          psel::select_kernel(take_rows(y, rows), take_rows(x, rows),
                              static_cast<Index>(cfg.d), spec, cfg.rank_tol, cfg.score_tol,
                              cfg.seed);
      if (res.stopped_early) {
        std::cerr << "warning: fraction " << cfg.fractions[fi] << " repeat " << rep
                  << " stopped early (" << res.reason << "); run excluded\n";
        continue;
      }
      psel::SelectionRun run;
      run.indices = res.indices;
      run.relevance = Eigen::VectorXd::Zero(x.cols());
      for (std::size_t t = 0; t < res.indices.size(); ++t)
        run.relevance[res.indices[t]] = res.scores[t];
      runs.runs.push_back(std::move(run));
    }
    if (runs.runs.size() < 2) {
      std::ostringstream os;
      os << "fewer than 2 complete runs at fraction " << cfg.fractions[fi];
      throw ContractError(os.str());
    }
    stability.push_back(psel::stability_index(runs));
    relevance_corr.push_back(psel::pearson_relevance(runs));
    used.push_back(static_cast<std::int64_t>(runs.runs.size()));
  }

  j["stability_index"] = stability;
  j["pearson_relevance"] = relevance_corr;
  j["runs_used"] = used;
  emit_json(j, cfg.out);
  return 0;
}

struct EvalNmiConfig {
  std::string data_path;
  std::string labels_path;
  std::int64_t clusters = 0;
  std::int64_t restarts = 10;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "auto";
};

int run_eval_nmi(const EvalNmiConfig& cfg) {
  const FileFormat requested = parse_format(cfg.format);
  const ColMatrix data = load_matrix(cfg.data_path, requested);
  const ColMatrix raw_labels = psel::load_csv(cfg.labels_path);
  if (raw_labels.cols() != 1)
    throw ContractError(cfg.labels_path + ": labels must be a single column");

  std::vector<int> labels(static_cast<std::size_t>(raw_labels.rows()));
  for (Index i = 0; i < raw_labels.rows(); ++i) {
    const double v = raw_labels(i, 0);
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9)
      throw ContractError(cfg.labels_path + ": labels must be integers");
    labels[static_cast<std::size_t>(i)] = static_cast<int>(r);
  }

  psel::KmeansOptions opts;
  opts.restarts = static_cast<int>(cfg.restarts);
  opts.seed = cfg.seed;
  nlohmann::json j;
  j["kmeans_nmi"] = psel::kmeans_nmi(data, labels, static_cast<int>(cfg.clusters), opts);
  emit_json(j, cfg.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"greedy two-view variable selection toolkit"};
  app.require_subcommand(1);

  SelectConfig sel;
  CLI::App* cmd_select = app.add_subcommand("select", "select candidate variables");
  cmd_select->add_option("--x", sel.x_path, "candidate matrix file")->required();
  cmd_select->add_option("--y", sel.y_path, "reference matrix file")->required();
  cmd_select->add_option("--d", sel.d, "number of variables to select")
      ->required()
      ->check(CLI::PositiveNumber);
  add_kernel_flags(cmd_select, sel.kernel);
  cmd_select->add_flag("--normalize", sel.normalize, "scale every column to unit norm");
  cmd_select->add_option("--rank-tol", sel.rank_tol, "relative rank cutoff");
  cmd_select->add_option("--score-tol", sel.score_tol, "early-stop score floor");
  cmd_select->add_option("--chunk-rows", sel.chunk_rows, "stream row chunks of this size")
      ->check(CLI::PositiveNumber);
  cmd_select->add_option("--seed", sel.seed, "seed for any sampled computation");
  cmd_select->add_option("--out", sel.out, "output JSON path (default stdout)");
  cmd_select->add_flag("--timings", sel.timings, "print the phase timing breakdown");
  cmd_select->add_option("--format", sel.format, "matrix file format: auto, csv, or bin");

  GenConfig gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "generate synthetic two-view data");
  cmd_gen->add_option("--out-x", gen.out_x, "output path for the candidate view")->required();
  cmd_gen->add_option("--out-y", gen.out_y, "output path for the reference view")->required();
  cmd_gen->add_option("--m", gen.m, "sample count")->required()->check(CLI::PositiveNumber);
  cmd_gen->add_option("--n-x", gen.n_x, "candidate variable count")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd_gen->add_option("--n-y", gen.n_y, "reference variable count")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd_gen->add_option("--sigma", gen.sigma, "scale of all normal draws");
  cmd_gen->add_option("--seed", gen.seed, "generator seed");
  cmd_gen->add_option("--noise", gen.noise, "additive noise on the responses: on or off");
  cmd_gen->add_option("--format", gen.format, "output format: auto, csv, or bin");

  BenchConfig bench;
  CLI::App* cmd_bench = app.add_subcommand("bench", "time selection across sample counts");
  cmd_bench->add_option("--m-grid", bench.m_grid, "comma-separated sample counts")
      ->required()
      ->delimiter(',');
  cmd_bench->add_option("--n-x", bench.n_x, "candidate variable count");
  cmd_bench->add_option("--n-y", bench.n_y, "reference variable count");
  cmd_bench->add_option("--d", bench.d, "number of variables to select");
  add_kernel_flags(cmd_bench, bench.kernel);
  cmd_bench->add_option("--chunk-rows", bench.chunk_rows, "streaming chunk size");
  cmd_bench->add_option("--sigma", bench.sigma, "scale of all normal draws");
  cmd_bench->add_option("--seed", bench.seed, "generator seed");
  cmd_bench->add_option("--out", bench.out, "output CSV path (default stdout)");

  CLI::App* cmd_eval = app.add_subcommand("eval", "evaluate selections and clusterings");
  cmd_eval->require_subcommand(1);

  EvalCcaConfig ecca;
  CLI::App* cmd_cca = cmd_eval->add_subcommand("cca", "first canonical correlation");
  cmd_cca->add_option("--x", ecca.x_path, "first view")->required();
  cmd_cca->add_option("--y", ecca.y_path, "second view")->required();
  cmd_cca->add_option("--reg", ecca.reg, "trace-scaled ridge")->check(CLI::NonNegativeNumber);
  cmd_cca->add_option("--out", ecca.out, "output JSON path (default stdout)");
  cmd_cca->add_option("--format", ecca.format, "matrix file format: auto, csv, or bin");

  EvalAlignConfig ealign;
  CLI::App* cmd_align = cmd_eval->add_subcommand("alignment", "centered kernel alignment");
  cmd_align->add_option("--x", ealign.x_path, "first view")->required();
  cmd_align->add_option("--y", ealign.y_path, "second view")->required();
  add_kernel_flags(cmd_align, ealign.kernel);
  cmd_align->add_option("--out", ealign.out, "output JSON path (default stdout)");
  cmd_align->add_option("--format", ealign.format, "matrix file format: auto, csv, or bin");

  EvalStabilityConfig estab;
  CLI::App* cmd_stab = cmd_eval->add_subcommand("stability", "selection stability study");
  cmd_stab->add_option("--x", estab.x_path, "candidate matrix file")->required();
  cmd_stab->add_option("--y", estab.y_path, "reference matrix file")->required();
  cmd_stab->add_option("--d", estab.d, "number of variables per run")
      ->required()
      ->check(CLI::PositiveNumber);
  add_kernel_flags(cmd_stab, estab.kernel);
  cmd_stab->add_flag("--normalize", estab.normalize, "scale every column to unit norm");
  cmd_stab->add_option("--fractions", estab.fractions, "subsample fractions")->delimiter(',');
  cmd_stab->add_option("--repeats", estab.repeats, "subsamples per fraction");
  cmd_stab->add_option("--seed", estab.seed, "subsampling seed");
  cmd_stab->add_option("--rank-tol", estab.rank_tol, "relative rank cutoff");
  cmd_stab->add_option("--score-tol", estab.score_tol, "early-stop score floor");
  cmd_stab->add_option("--out", estab.out, "output JSON path (default stdout)");
  cmd_stab->add_option("--format", estab.format, "matrix file format: auto, csv, or bin");

  EvalNmiConfig enmi;
  CLI::App* cmd_nmi = cmd_eval->add_subcommand("nmi", "k-means clustering agreement");
  cmd_nmi->add_option("--data", enmi.data_path, "sample matrix (rows are samples)")->required();
  cmd_nmi->add_option("--labels", enmi.labels_path, "single-column CSV of class labels")
      ->required();
  cmd_nmi->add_option("--clusters", enmi.clusters, "cluster count")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd_nmi->add_option("--restarts", enmi.restarts, "k-means restarts")
      ->check(CLI::PositiveNumber);
  cmd_nmi->add_option("--seed", enmi.seed, "clustering seed");
  cmd_nmi->add_option("--out", enmi.out, "output JSON path (default stdout)");
  cmd_nmi->add_option("--format", enmi.format, "matrix file format: auto, csv, or bin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    sel.kernel.sigma_given = cmd_select->count("--rbf-sigma") > 0;
    bench.kernel.sigma_given = cmd_bench->count("--rbf-sigma") > 0;
    ealign.kernel.sigma_given = cmd_align->count("--rbf-sigma") > 0;
    estab.kernel.sigma_given = cmd_stab->count("--rbf-sigma") > 0;

    if (cmd_select->parsed()) return run_select(sel);
    if (cmd_gen->parsed()) return run_gen(gen);
    if (cmd_bench->parsed()) return run_bench(bench);
    if (cmd_eval->parsed()) {
      if (cmd_cca->parsed()) return run_eval_cca(ecca);
      if (cmd_align->parsed()) return run_eval_alignment(ealign);
      if (cmd_stab->parsed()) return run_eval_stability(estab);
      if (cmd_nmi->parsed()) return run_eval_nmi(enmi);
    }
    throw ContractError("no subcommand selected");
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
