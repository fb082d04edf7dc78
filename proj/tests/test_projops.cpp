#include <doctest.h>

#include <cmath>

#include "psel/errors.hpp"
#include "psel/projops.hpp"
#include "test_util.hpp"

using namespace psel;
using testutil::max_abs_diff;
using testutil::randn;

namespace {

Projector span_of(std::initializer_list<Eigen::VectorXd> cols) {
  ColMatrix a(cols.begin()->size(), static_cast<Index>(cols.size()));
  Index j = 0;
  for (const auto& c : cols) a.col(j++) = c;
  return projector_from_matrix(a);
}

Eigen::VectorXd axis(Index dim, Index i) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
  e[i] = 1.0;
  return e;
}

// Two random subspaces of R^dim sharing a planted common part; returns the
// generating matrices so exact expected intersections are known.
struct PlantedPair {
  Projector p1;
  Projector p2;
  Projector common;
};

PlantedPair planted(Index dim, Index extra1, Index extra2, Index shared, std::uint64_t seed) {
  const ColMatrix base = randn(dim, shared, seed);
  ColMatrix a1(dim, shared + extra1);
  a1 << base, randn(dim, extra1, seed + 1);
  ColMatrix a2(dim, shared + extra2);
  a2 << base, randn(dim, extra2, seed + 2);
  return {projector_from_matrix(a1), projector_from_matrix(a2), projector_from_matrix(base)};
}

}  // namespace

TEST_SUITE("projops") {

TEST_CASE("projector_from_matrix reproduces the closed forms") {
  ColMatrix a(2, 1);
  a << 1.0, 0.0;
  Eigen::MatrixXd expected(2, 2);
  expected << 1, 0, 0, 0;
  CHECK(max_abs_diff(projector_from_matrix(a).P, expected) <= 1e-14);

  CHECK(max_abs_diff(projector_from_matrix(ColMatrix::Identity(2, 2)).P,
                     Eigen::MatrixXd::Identity(2, 2)) <= 1e-14);

  ColMatrix collinear(2, 2);
  collinear << 1, 2, 1, 2;
  Eigen::MatrixXd half(2, 2);
  half << 0.5, 0.5, 0.5, 0.5;
  CHECK(max_abs_diff(projector_from_matrix(collinear).P, half) <= 1e-12);

  const Projector zero = projector_from_matrix(ColMatrix::Zero(3, 2));
  CHECK(max_abs_diff(zero.P, Eigen::MatrixXd::Zero(3, 3)) == 0.0);
}

TEST_CASE("projector fixes the generating columns and is a valid projector") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ColMatrix a = randn(20, 6, seed + 10);
    const Projector p = projector_from_matrix(a);
    CHECK(is_projector(p));
    for (Index j = 0; j < a.cols(); ++j)
      CHECK((p.P * a.col(j) - a.col(j)).norm() <= 1e-8 * a.col(j).norm());
  }
}

TEST_CASE("representation independence under invertible column mixing") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const ColMatrix a = randn(15, 5, seed + 20);
    const ColMatrix t = testutil::random_invertible(5, seed + 120);
    const Projector p1 = projector_from_matrix(a);
    const Projector p2 = projector_from_matrix(a * t);
    CHECK((p1.P - p2.P).norm() <= 1e-8);
  }
}

TEST_CASE("corr matches the closed forms and rejects zero vectors") {
  const Projector p = span_of({axis(2, 0)});
  CHECK(corr(axis(2, 0), p) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(corr(axis(2, 1), p) == doctest::Approx(0.0).epsilon(1e-12));
  Eigen::VectorXd diag(2);
  diag << 1.0, 1.0;
  CHECK(corr(diag, p) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(corr(Eigen::VectorXd::Zero(2), p), DegenerateInputError);

  // Fixed point and orthogonal cases on a random subspace.
  const ColMatrix a = randn(12, 3, 30);
  const Projector pr = projector_from_matrix(a);
  const Eigen::VectorXd inside = a * Eigen::VectorXd::LinSpaced(3, 1.0, 2.0);
  CHECK(corr(inside, pr) == doctest::Approx(1.0).epsilon(1e-9));
  const Eigen::VectorXd outside =
      (Eigen::MatrixXd::Identity(12, 12) - pr.P) * randn(12, 1, 31).col(0);
  CHECK(corr(outside, pr) <= 1e-9);
}

TEST_CASE("deflate closed forms, orthogonal branch, and contracts") {
  const Projector id3{3, Eigen::MatrixXd::Identity(3, 3)};
  const Projector d1 = deflate(id3, axis(3, 0));
  Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(3, 3);
  expected(0, 0) = 0.0;
  CHECK(max_abs_diff(d1.P, expected) <= 1e-14);

  Projector diag10{2, Eigen::MatrixXd::Zero(2, 2)};
  diag10.P(0, 0) = 1.0;
  const Projector unchanged = deflate(diag10, axis(2, 1));
  CHECK(max_abs_diff(unchanged.P, diag10.P) == 0.0);

  Eigen::VectorXd halfdiag(2);
  halfdiag << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Projector d2 = deflate(Projector{2, Eigen::MatrixXd::Identity(2, 2)}, halfdiag);
  Eigen::MatrixXd anti(2, 2);
  anti << 0.5, -0.5, -0.5, 0.5;
  CHECK(max_abs_diff(d2.P, anti) <= 1e-12);

  CHECK_THROWS_AS(deflate(id3, 2.0 * axis(3, 0)), ContractError);
}

TEST_CASE("deflate yields a valid projector annihilating the direction") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Projector p = projector_from_matrix(randn(14, 5, seed + 40));
    Eigen::VectorXd x = randn(14, 1, seed + 140).col(0);
    x /= x.norm();
    const Projector d = deflate(p, x);
    CHECK(is_projector(d));
    CHECK((d.P * (p.P * x)).norm() <= 1e-9);
  }
}

TEST_CASE("anderson intersection closed forms") {
  const Projector p = projector_from_matrix(randn(9, 3, 50));
  CHECK(max_abs_diff(intersect_anderson(p, p).P, p.P) <= 1e-9);

  const Projector e1 = span_of({axis(3, 0)});
  const Projector e2 = span_of({axis(3, 1)});
  CHECK(max_abs_diff(intersect_anderson(e1, e2).P, Eigen::MatrixXd::Zero(3, 3)) <= 1e-10);

  const Projector p12 = span_of({axis(3, 0), axis(3, 1)});
  const Projector p23 = span_of({axis(3, 1), axis(3, 2)});
  CHECK(max_abs_diff(intersect_anderson(p12, p23).P, axis(3, 1) * axis(3, 1).transpose()) <=
        1e-10);
}

TEST_CASE("ben-israel intersection closed forms and weight contracts") {
  const Projector p = projector_from_matrix(randn(8, 3, 60));
  CHECK(max_abs_diff(intersect_ben_israel({p}).P, p.P) <= 1e-9);
  CHECK(max_abs_diff(intersect_ben_israel({p, p}, {{0.5, 0.5}, 1e-10}).P, p.P) <= 1e-9);

  const Projector p12 = span_of({axis(4, 0), axis(4, 1)});
  const Projector p23 = span_of({axis(4, 1), axis(4, 2)});
  const Projector p24 = span_of({axis(4, 1), axis(4, 3)});
  CHECK(max_abs_diff(intersect_ben_israel({p12, p23, p24}).P,
                     axis(4, 1) * axis(4, 1).transpose()) <= 1e-9);

  CHECK_THROWS_AS(intersect_ben_israel({}), ContractError);
  CHECK_THROWS_AS(intersect_ben_israel({p, p}, {{0.7, 0.7}, 1e-10}), ContractError);
  CHECK_THROWS_AS(intersect_ben_israel({p, p}, {{1.5, -0.5}, 1e-10}), ContractError);
}

TEST_CASE("von neumann limit on commuting and identical projectors") {
  Projector d1{3, Eigen::MatrixXd::Zero(3, 3)};
  d1.P.diagonal() << 1, 1, 0;
  Projector d2{3, Eigen::MatrixXd::Zero(3, 3)};
  d2.P.diagonal() << 0, 1, 1;
  const VonNeumannResult r = intersect_von_neumann(d1, d2);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(max_abs_diff(r.projector.P, (d1.P.array() * d2.P.array()).matrix()) <= 1e-12);

  const Projector p = projector_from_matrix(randn(7, 2, 70));
  const VonNeumannResult same = intersect_von_neumann(p, p);
  CHECK(same.converged);
  CHECK(same.iterations == 1);
  CHECK(max_abs_diff(same.projector.P, p.P) <= 1e-8);
}

TEST_CASE("planted two-subspace instance: all oracles agree") {
  const PlantedPair pair = planted(10, 3, 3, 2, 80);
  const Projector a = intersect_anderson(pair.p1, pair.p2);
  const Projector b = intersect_ben_israel({pair.p1, pair.p2});
  const VonNeumannResult v = intersect_von_neumann(pair.p1, pair.p2);
  CHECK(v.converged);
  CHECK((a.P - pair.common.P).norm() <= 1e-6);
  CHECK((b.P - pair.common.P).norm() <= 1e-6);
  CHECK((v.projector.P - a.P).norm() <= 1e-6);
  CHECK((b.P - a.P).norm() <= 1e-6);
}

TEST_CASE("nested spans commute and obey the partial order") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ColMatrix small = randn(16, 3, seed + 90);
    ColMatrix big(16, 5);
    big << small, randn(16, 2, seed + 190);
    const Projector p1 = projector_from_matrix(small);
    const Projector p2 = projector_from_matrix(big);
    CHECK(max_abs_diff(p1.P * p2.P, p2.P * p1.P) <= 1e-8);
    CHECK(max_abs_diff(p1.P * p2.P, p1.P) <= 1e-8);
    for (Index trial = 0; trial < 10; ++trial) {
      const Eigen::VectorXd x = randn(16, 1, seed * 37 + trial + 300).col(0);
      CHECK((p1.P * x).norm() <= (p2.P * x).norm() + 1e-10);
    }
  }
}

TEST_CASE("complement sums to the identity exactly") {
  const Projector p = projector_from_matrix(randn(11, 4, 100));
  CHECK(max_abs_diff(p.P + complement(p).P, Eigen::MatrixXd::Identity(11, 11)) == 0.0);
}

TEST_CASE("deflate range equals the intersection with the hyperplane") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Projector p = projector_from_matrix(randn(12, 4, seed + 110));
    Eigen::VectorXd x = randn(12, 1, seed + 210).col(0);
    x /= x.norm();
    const Projector lhs = deflate(p, x);
    const Projector hyper{12, Eigen::MatrixXd::Identity(12, 12) - x * x.transpose()};
    const Projector rhs = intersect_anderson(p, hyper);
    CHECK((lhs.P - rhs.P).norm() <= 1e-6);
  }
}

TEST_CASE("three intersection oracles agree pairwise on random instances") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Index dim = 8 + static_cast<Index>(seed % 3) * 7;  // up to 22
    const PlantedPair pair = planted(dim, 2 + seed % 3, 3, 1 + seed % 2, seed + 500);
    const Projector a = intersect_anderson(pair.p1, pair.p2);
    const Projector b = intersect_ben_israel({pair.p1, pair.p2});
    const VonNeumannResult v = intersect_von_neumann(pair.p1, pair.p2);
    CHECK(v.converged);
    CHECK((a.P - b.P).norm() <= 1e-6);
    CHECK((a.P - v.projector.P).norm() <= 1e-6);
    CHECK((b.P - v.projector.P).norm() <= 1e-6);
  }
}

TEST_CASE("dimension mismatches are contract errors") {
  const Projector p3 = projector_from_matrix(randn(3, 1, 600));
  const Projector p4 = projector_from_matrix(randn(4, 1, 601));
  CHECK_THROWS_AS(intersect_anderson(p3, p4), ContractError);
  CHECK_THROWS_AS(intersect_von_neumann(p3, p4), ContractError);
  CHECK_THROWS_AS(intersect_ben_israel({p3, p4}), ContractError);
  CHECK_THROWS_AS(corr(Eigen::VectorXd::Ones(4), p3), ContractError);
  CHECK_THROWS_AS(deflate(p3, Eigen::VectorXd::Ones(4).normalized()), ContractError);
}

}  // TEST_SUITE
