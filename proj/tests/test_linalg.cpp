#include <gtest/gtest.h>

#include "genproj/genproj.hpp"
#include "oracles.hpp"

using namespace genproj;

namespace {

// Random integer matrix of prescribed rank: product of r x c factors.
QMat random_rank_matrix(std::size_t rows, std::size_t cols, std::size_t rank, Rng& rng) {
  std::uniform_int_distribution<int> d(-5, 5);
  QMat a(rows, rank), b(rank, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < rank; ++k) a(i, k) = GaussRational(d(rng), d(rng));
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t j = 0; j < cols; ++j) b(k, j) = GaussRational(d(rng));
  return a * b;
}

CMat random_cmat(std::size_t rows, std::size_t cols, Rng& rng) {
  CMat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    CVec r = random_point(cols, 1.0, rng);
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = r[j];
  }
  return m;
}

}  // namespace

TEST(ExactRank, KnownMatrices) {
  EXPECT_EQ(exact_rank(QMat::identity(4)).rank, 4);
  EXPECT_EQ(exact_rank(QMat(3, 5)).rank, 0);
  QMat m = QMat::from_rows({{GaussRational(1), GaussRational(2)}, {GaussRational(2), GaussRational(4)}});
  EXPECT_EQ(exact_rank(m).rank, 1);
  EXPECT_TRUE(determinant(m).is_zero());
}

TEST(ExactRankProperty, AgreesWithMinorOracle) {
  for (std::uint64_t trial = 0; trial < 60; ++trial) {
    Rng rng = stream_rng(21, trial);
    std::size_t rows = 1 + trial % 4, cols = 1 + (trial / 4) % 4;
    std::size_t r = std::min(rows, cols) - (trial % 2 ? 1 : 0);
    QMat m = random_rank_matrix(rows, cols, std::max<std::size_t>(r, 0), rng);
    EXPECT_EQ(exact_rank(m).rank, oracle::minor_rank(m));
  }
}

TEST(DeterminantProperty, AgreesWithPermutationExpansion) {
  for (std::uint64_t trial = 0; trial < 60; ++trial) {
    Rng rng = stream_rng(22, trial);
    std::size_t n = 1 + trial % 5;
    QMat m = random_rank_matrix(n, n, n, rng);
    EXPECT_EQ(determinant(m), oracle::permutation_determinant(m));
  }
}

TEST(RankProperty, FloatRankMatchesExactRank) {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Rng rng = stream_rng(23, trial);
    std::size_t rows = 2 + trial % 5, cols = 2 + (trial / 5) % 5;
    std::size_t r = 1 + trial % std::min(rows, cols);
    QMat m = random_rank_matrix(rows, cols, r, rng);
    RankResult exact = exact_rank(m), num = numerical_rank(to_complex(m));
    EXPECT_EQ(num.rank, exact.rank);
    EXPECT_EQ(num.values.size(), std::min(rows, cols));
  }
}

TEST(Rank, ToleranceIsRelativeToLargestSingularValue) {
  CMat m = CMat::from_rows({{1e8, 0.0}, {0.0, 1e-3}});
  EXPECT_EQ(numerical_rank(m).rank, 1);
  TolPolicy strict;
  strict.eps = 1e-14;
  EXPECT_EQ(numerical_rank(m, strict).rank, 2);
  TolPolicy absolute;
  absolute.absolute = 1e-2;
  EXPECT_EQ(numerical_rank(CMat::from_rows({{1.0, 0.0}, {0.0, 1e-3}}), absolute).rank, 1);
}

TEST(SolveProperty, ResidualIsSmall) {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Rng rng = stream_rng(24, trial);
    std::size_t n = 1 + trial % 6;
    CMat a = random_cmat(n, n, rng);
    CVec b = random_point(n, 1.0, rng);
    CVec x = solve(a, b);
    EXPECT_LT(norm2(a * x - b), 1e-10 * (1.0 + norm_fro(a) * norm2(x)));
  }
}

TEST(Solve, SingularSystemsThrow) {
  CMat a = CMat::from_rows({{1.0, 2.0}, {2.0, 4.0}});
  EXPECT_THROW(solve(a, CVec{1.0, 1.0}), SingularMatrix);
  QMat q = QMat::from_rows({{GaussRational(1), GaussRational(2)}, {GaussRational(2), GaussRational(4)}});
  EXPECT_THROW(solve(q, QVec{GaussRational(1), GaussRational(1)}), SingularMatrix);
  EXPECT_THROW(solve(CMat(2, 3), CVec(2)), DimensionMismatch);
}

TEST(Solve, ExactInverse) {
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    Rng rng = stream_rng(25, trial);
    std::size_t n = 1 + trial % 4;
    QMat a = random_rank_matrix(n, n, n, rng);
    if (oracle::permutation_determinant(a).is_zero()) {
      EXPECT_THROW(inverse(a), SingularMatrix);
      continue;
    }
    EXPECT_EQ(a * inverse(a), QMat::identity(n));
  }
}

TEST(Nullspace, AnnihilatesAndHasCorrectDimension) {
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    Rng rng = stream_rng(26, trial);
    std::size_t rows = 2 + trial % 3, cols = 4 + trial % 3;
    std::size_t r = 1 + trial % rows;
    CMat a = to_complex(random_rank_matrix(rows, cols, r, rng));
    CMat k = nullspace(a);
    ASSERT_EQ(k.rows(), cols - r);
    for (std::size_t i = 0; i < k.rows(); ++i) EXPECT_LT(norm2(a * k.row_vec(i)), 1e-9 * norm_fro(a));
  }
}

// dim(A ∩ B) = dim A + dim B - dim(A + B) for row spaces.
TEST(IntersectionProperty, DimensionFormula) {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Rng rng = stream_rng(27, trial);
    const std::size_t d = 4 + trial % 3;
    std::size_t shared = trial % 3, ea = 1 + trial % 2, eb = 1 + (trial / 2) % 2;
    if (shared + ea + eb > d) shared = d - ea - eb;
    CMat common = random_cmat(shared, d, rng);
    CMat a = CMat::stack(common, random_cmat(ea, d, rng));
    CMat b = CMat::stack(random_cmat(eb, d, rng), common);
    int da = numerical_rank(a).rank, db = numerical_rank(b).rank;
    int dsum = numerical_rank(CMat::stack(a, b)).rank;
    CMat inter = subspace_intersection(a, b);
    EXPECT_EQ(int(inter.rows()), da + db - dsum);
    for (std::size_t i = 0; i < inter.rows(); ++i) {
      EXPECT_LT(rowspan_residual(inter.row_vec(i), orthonormal_rows(a)), 1e-9);
      EXPECT_LT(rowspan_residual(inter.row_vec(i), orthonormal_rows(b)), 1e-9);
    }
  }
}

TEST(Intersection, RejectsRankDeficientFrames) {
  CMat a = CMat::from_rows({{1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}});
  CMat b = CMat::from_rows({{0.0, 1.0, 0.0}});
  EXPECT_THROW(subspace_intersection(a, b), DegenerateInput);
}

TEST(Chordal, ScaleInvariantAndBounded) {
  Rng rng = stream_rng(28, 0);
  for (int t = 0; t < 50; ++t) {
    CVec p = random_point(5, 1.0, rng), q = random_point(5, 1.0, rng);
    cplx s(0.3, -2.0);
    EXPECT_NEAR(chordal_distance(s * p, q), chordal_distance(p, q), 1e-12);
    EXPECT_NEAR(chordal_distance(p, s * q), chordal_distance(p, q), 1e-12);
    EXPECT_LT(chordal_distance(p, s * p), 1e-14);
    EXPECT_LE(chordal_distance(p, q), 1.0);
    EXPECT_NEAR(chordal_distance(p, q), chordal_distance(q, p), 1e-12);
  }
  EXPECT_NEAR(chordal_distance({1.0, 0.0}, {0.0, 1.0}), 1.0, 1e-15);
  EXPECT_THROW(chordal_distance({0.0, 0.0}, {1.0, 0.0}), DegenerateInput);
}

TEST(Chordal, ResolvesTinySeparations) {
  CVec p{1.0, 2.0, 3.0}, q{1.0, 2.0, 3.0 + 1e-12};
  double d = chordal_distance(p, q);
  EXPECT_GT(d, 1e-13);
  EXPECT_LT(d, 1e-12);
}
