#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "psel/errors.hpp"
#include "psel/metrics.hpp"
#include "psel/rng.hpp"
#include "test_util.hpp"

using psel::ColMatrix;
using psel::ContractError;
using psel::DegenerateInputError;
using psel::Index;
using psel::SelectionRun;
using psel::SelectionRuns;

namespace {

// Textbook largest canonical correlation via the generalized-eigenvalue
// formulation, solved with dense LU factors (independent of the library's
// whitening construction).
double cca_oracle(const ColMatrix& a, const ColMatrix& b) {
  const Eigen::MatrixXd ac = a.rowwise() - a.colwise().mean();
  const Eigen::MatrixXd bc = b.rowwise() - b.colwise().mean();
  const Eigen::MatrixXd caa = ac.transpose() * ac;
  const Eigen::MatrixXd cbb = bc.transpose() * bc;
  const Eigen::MatrixXd cab = ac.transpose() * bc;
  const Eigen::MatrixXd m =
      caa.fullPivLu().solve(cab * cbb.fullPivLu().solve(cab.transpose()));
  Eigen::EigenSolver<Eigen::MatrixXd> eig(m);
  double best = 0.0;
  for (Index i = 0; i < eig.eigenvalues().size(); ++i)
    best = std::max(best, eig.eigenvalues()[i].real());
  return std::sqrt(std::max(best, 0.0));
}

Eigen::MatrixXd center_direct(const Eigen::MatrixXd& k) {
  const Index n = k.rows();
  const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) -
                            Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  return h * k * h;
}

Eigen::MatrixXd random_psd(Index n, int seed) {
  const ColMatrix a = testutil::randn(n, n + 2, seed);
  return a * a.transpose();
}

SelectionRuns make_runs(Index n_total, Index k, const std::vector<std::vector<Index>>& sets) {
  SelectionRuns rs;
  rs.n_total = n_total;
  rs.k = k;
  for (const auto& s : sets) {
    SelectionRun run;
    run.indices = s;
    rs.runs.push_back(run);
  }
  return rs;
}

std::vector<Index> random_subset(Index n, Index k, psel::Xoshiro256& rng) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index(0));
  for (Index i = 0; i < k; ++i) {
    const Index j =
        i + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("canonical correlation of a view with itself is one") {
    const ColMatrix a = testutil::randn(40, 4, 900);
    CHECK(psel::cca_first(a, a, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(psel::cca_first(a, a) >= 1.0 - 1e-6);  // default ridge
    CHECK(psel::cca_first(a, a, 0.0) <= 1.0);
  }

  TEST_CASE("orthogonal centered views have zero correlation") {
    // Build disjoint orthonormal column groups inside the centered subspace.
    ColMatrix base = testutil::randn(50, 6, 901);
    base.rowwise() -= base.colwise().mean();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(base);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(50, 6);
    const ColMatrix a = q.leftCols(3);
    const ColMatrix b = q.rightCols(3);
    CHECK(psel::cca_first(a, b, 0.0) <= 1e-10);
    CHECK(psel::cca_first(a, b) <= 1e-8);
  }

  TEST_CASE("canonical correlation matches the generalized-eigenvalue oracle") {
    const Index shapes[][3] = {
        {50, 3, 4}, {60, 2, 5}, {80, 4, 4}, {45, 5, 2}, {100, 6, 3},
    };
    for (std::size_t i = 0; i < sizeof(shapes) / sizeof(shapes[0]); ++i) {
      const ColMatrix a = testutil::randn(shapes[i][0], shapes[i][1],
                                          910 + 2 * static_cast<int>(i));
      const ColMatrix b = testutil::randn(shapes[i][0], shapes[i][2],
                                          911 + 2 * static_cast<int>(i));
      const double lib = psel::cca_first(a, b, 0.0);
      const double oracle = cca_oracle(a, b);
      CHECK(lib == doctest::Approx(oracle).epsilon(1e-8));
    }
  }

  TEST_CASE("canonical correlation is symmetric in its arguments") {
    const ColMatrix a = testutil::randn(55, 4, 920);
    const ColMatrix b = testutil::randn(55, 3, 921);
    CHECK(psel::cca_first(a, b, 0.0) == doctest::Approx(psel::cca_first(b, a, 0.0)).epsilon(1e-10));
    CHECK(psel::cca_first(a, b) == doctest::Approx(psel::cca_first(b, a)).epsilon(1e-10));
  }

  TEST_CASE("canonical correlation ignores invertible transforms") {
    const ColMatrix a = testutil::randn(70, 4, 930);
    const ColMatrix b = testutil::randn(70, 3, 931);
    const double base = psel::cca_first(a, b, 0.0);
    const ColMatrix ta = testutil::random_invertible(4, 932);
    const ColMatrix tb = testutil::random_invertible(3, 933);
    CHECK(psel::cca_first(a * ta, b, 0.0) == doctest::Approx(base).epsilon(1e-8));
    CHECK(psel::cca_first(a, b * tb, 0.0) == doctest::Approx(base).epsilon(1e-8));
    CHECK(psel::cca_first(a * ta, b * tb, 0.0) == doctest::Approx(base).epsilon(1e-8));
  }

  TEST_CASE("canonical correlation rejects invalid input") {
    const ColMatrix a = testutil::randn(10, 2, 940);
    CHECK_THROWS_AS(psel::cca_first(a, testutil::randn(11, 2, 941)), ContractError);
    CHECK_THROWS_AS(psel::cca_first(testutil::randn(1, 2, 942), testutil::randn(1, 2, 943)),
                    ContractError);
    CHECK_THROWS_AS(psel::cca_first(a, a, -1.0), ContractError);
  }

  TEST_CASE("alignment of a kernel with itself or its scalings is one") {
    const Eigen::MatrixXd k = random_psd(12, 950);
    CHECK(psel::kernel_alignment(k, k) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(psel::kernel_alignment(k, 2.0 * k) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(psel::kernel_alignment(0.25 * k, 8.0 * k) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(psel::kernel_alignment(k, -k) == doctest::Approx(-1.0).epsilon(1e-12));
  }

  TEST_CASE("alignment matches the direct centered-cosine formula") {
    for (int seed = 960; seed < 964; ++seed) {
      Eigen::MatrixXd k = testutil::randn(10, 10, seed);
      k = Eigen::MatrixXd(0.5 * (k + k.transpose()));
      Eigen::MatrixXd kp = testutil::randn(10, 10, seed + 100);
      kp = Eigen::MatrixXd(0.5 * (kp + kp.transpose()));

      const Eigen::MatrixXd kc = center_direct(k);
      const Eigen::MatrixXd kpc = center_direct(kp);
      const double direct =
          (kc.array() * kpc.array()).sum() / (kc.norm() * kpc.norm());
      CHECK(psel::kernel_alignment(k, kp) == doctest::Approx(direct).epsilon(1e-12));
      CHECK(psel::kernel_alignment(kp, k) == doctest::Approx(direct).epsilon(1e-12));
    }
  }

  TEST_CASE("alignment rejects annihilated or mismatched kernels") {
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(6, 6);
    const Eigen::MatrixXd k = random_psd(6, 970);
    CHECK_THROWS_AS(psel::kernel_alignment(ones, k), DegenerateInputError);
    CHECK_THROWS_AS(psel::kernel_alignment(k, ones), DegenerateInputError);
    CHECK_THROWS_AS(psel::kernel_alignment(k, random_psd(7, 971)), ContractError);
  }

  TEST_CASE("identical selection runs have stability one") {
    const SelectionRuns rs = make_runs(10, 3, {{1, 4, 7}, {7, 1, 4}, {4, 7, 1}});
    CHECK(psel::stability_index(rs) == 1.0);
  }

  TEST_CASE("two disjoint halves give stability minus one") {
    const SelectionRuns rs = make_runs(8, 4, {{0, 1, 2, 3}, {4, 5, 6, 7}});
    CHECK(psel::stability_index(rs) == -1.0);
  }

  TEST_CASE("random selections have stability near zero on average") {
    psel::Xoshiro256 rng(psel::derive_seed(0, 21, 0));
    const Index n = 20;
    const Index k = 5;
    double total = 0.0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
      std::vector<std::vector<Index>> sets;
      for (int r = 0; r < 10; ++r) sets.push_back(random_subset(n, k, rng));
      total += psel::stability_index(make_runs(n, k, sets));
    }
    CHECK(std::abs(total / trials) <= 0.05);
  }

  TEST_CASE("stability is invariant to run and index order") {
    const SelectionRuns a = make_runs(9, 3, {{0, 3, 5}, {1, 3, 8}, {0, 5, 7}});
    const SelectionRuns b = make_runs(9, 3, {{8, 1, 3}, {7, 5, 0}, {5, 0, 3}});
    CHECK(psel::stability_index(a) == psel::stability_index(b));
  }

  TEST_CASE("stability validates its input") {
    CHECK_THROWS_AS(psel::stability_index(make_runs(10, 3, {{0, 1, 2}})), ContractError);
    CHECK_THROWS_AS(psel::stability_index(make_runs(3, 3, {{0, 1, 2}, {0, 1, 2}})),
                    ContractError);
    CHECK_THROWS_AS(psel::stability_index(make_runs(10, 3, {{0, 1, 2}, {0, 1}})),
                    ContractError);
    CHECK_THROWS_AS(psel::stability_index(make_runs(10, 3, {{0, 1, 2}, {0, 1, 1}})),
                    ContractError);
    CHECK_THROWS_AS(psel::stability_index(make_runs(10, 3, {{0, 1, 2}, {0, 1, 10}})),
                    ContractError);
  }

  TEST_CASE("identical relevance vectors correlate perfectly") {
    SelectionRuns rs = make_runs(6, 2, {{0, 1}, {2, 3}, {4, 5}});
    Eigen::VectorXd v(6);
    v << 0.9, 0.1, 0.5, 0.0, 0.3, 0.7;
    for (auto& run : rs.runs) run.relevance = v;
    CHECK(psel::pearson_relevance(rs) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("anti-ordered relevance vectors correlate at minus one") {
    SelectionRuns rs = make_runs(5, 2, {{0, 1}, {3, 4}});
    Eigen::VectorXd v(5);
    v << 1.0, 2.0, 3.0, 4.0, 5.0;
    rs.runs[0].relevance = v;
    rs.runs[1].relevance = (6.0 - v.array()).matrix();
    CHECK(psel::pearson_relevance(rs) == doctest::Approx(-1.0).epsilon(1e-12));
  }

  TEST_CASE("relevance correlation matches the direct pairwise formula") {
    SelectionRuns rs = make_runs(8, 3, {{0, 1, 2}, {3, 4, 5}, {1, 4, 7}});
    for (std::size_t r = 0; r < rs.runs.size(); ++r)
      rs.runs[r].relevance = testutil::randn(8, 1, 980 + static_cast<int>(r)).col(0);

    double sum = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < rs.runs.size(); ++i)
      for (std::size_t j = i + 1; j < rs.runs.size(); ++j) {
        const Eigen::VectorXd a =
            rs.runs[i].relevance.array() - rs.runs[i].relevance.mean();
        const Eigen::VectorXd b =
            rs.runs[j].relevance.array() - rs.runs[j].relevance.mean();
        sum += a.dot(b) / (a.norm() * b.norm());
        ++pairs;
      }
    CHECK(psel::pearson_relevance(rs) == doctest::Approx(sum / pairs).epsilon(1e-12));
  }

  TEST_CASE("constant relevance vectors are refused by run") {
    SelectionRuns rs = make_runs(4, 1, {{0}, {3}});
    rs.runs[0].relevance = testutil::randn(4, 1, 990).col(0);
    rs.runs[1].relevance = Eigen::VectorXd::Constant(4, 2.5);
    try {
      psel::pearson_relevance(rs);
      FAIL("expected a degenerate-input error");
    } catch (const DegenerateInputError& e) {
      CHECK(std::string(e.what()).find("run 1") != std::string::npos);
    }

    rs.runs[1].relevance = Eigen::VectorXd::Zero(3);  // wrong length
    CHECK_THROWS_AS(psel::pearson_relevance(rs), ContractError);
  }

  TEST_CASE("perfectly separated clusters reach full mutual information") {
    ColMatrix data(9, 2);
    std::vector<int> labels;
    for (int g = 0; g < 3; ++g)
      for (int i = 0; i < 3; ++i) {
        data(3 * g + i, 0) = 10.0 * g + 0.1 * i;
        data(3 * g + i, 1) = -5.0 * g + 0.05 * i;
        labels.push_back(g);
      }
    psel::KmeansOptions opts;
    opts.restarts = 4;
    CHECK(psel::kmeans_nmi(data, labels, 3, opts) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("single-class labels score zero by the entropy convention") {
    ColMatrix data(8, 1);
    for (int i = 0; i < 8; ++i) data(i, 0) = (i < 4) ? 0.0 + 0.1 * i : 50.0 + 0.1 * i;
    const std::vector<int> labels(8, 7);
    CHECK(psel::kmeans_nmi(data, labels, 2) == 0.0);
  }

  TEST_CASE("coincident points collapse to zero entropy and zero score") {
    const ColMatrix data = ColMatrix::Ones(5, 2);
    const std::vector<int> labels(5, 0);
    CHECK(psel::kmeans_nmi(data, labels, 2) == 0.0);
  }

  TEST_CASE("six-point toy set matches the hand-computed contingency value") {
    ColMatrix data(6, 1);
    data << 0.0, 0.1, 0.2, 10.0, 10.1, 10.2;
    const std::vector<int> labels = {0, 0, 1, 0, 1, 1};
    // k-means splits the line into {0,1,2} and {3,4,5}; the contingency
    // table is [[2,1],[1,2]], giving
    //   MI = (2/3)ln(4/3) + (1/3)ln(2/3),  H = ln 2 for both partitions.
    const double expected =
        ((2.0 / 3.0) * std::log(4.0 / 3.0) + (1.0 / 3.0) * std::log(2.0 / 3.0)) /
        std::log(2.0);
    psel::KmeansOptions opts;
    opts.restarts = 3;
    CHECK(psel::kmeans_nmi(data, labels, 2, opts) == doctest::Approx(expected).epsilon(1e-9));
  }

  TEST_CASE("clustering scores are deterministic for a fixed seed") {
    const ColMatrix data = testutil::randn(40, 3, 995);
    std::vector<int> labels;
    for (int i = 0; i < 40; ++i) labels.push_back(i % 4);
    psel::KmeansOptions opts;
    opts.restarts = 5;
    opts.seed = 123;
    const double a = psel::kmeans_nmi(data, labels, 4, opts);
    const double b = psel::kmeans_nmi(data, labels, 4, opts);
    CHECK(a == b);
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
  }

  TEST_CASE("clustering rejects invalid requests") {
    const ColMatrix data = testutil::randn(6, 2, 996);
    const std::vector<int> labels = {0, 1, 0, 1, 0, 1};
    CHECK_THROWS_AS(psel::kmeans_nmi(data, labels, 7), ContractError);
    CHECK_THROWS_AS(psel::kmeans_nmi(data, labels, 1), ContractError);
    CHECK_THROWS_AS(psel::kmeans_nmi(data, {0, 1}, 2), ContractError);
    psel::KmeansOptions opts;
    opts.restarts = 0;
    CHECK_THROWS_AS(psel::kmeans_nmi(data, labels, 2, opts), ContractError);
  }
}
