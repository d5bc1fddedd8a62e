#include <gtest/gtest.h>

#include "psdrank/error.hpp"
#include "psdrank/instance.hpp"
#include "psdrank/search.hpp"
#include "psdrank/witness.hpp"

namespace psdrank {
namespace {

using Rows = std::vector<std::vector<Rational>>;

InstanceMatrix identity(std::size_t n) {
  Rows v(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1;
  return InstanceMatrix::from_dense(v);
}

void expect_witness_verifies(const InstanceMatrix& A, const SearchReport& r, double tol) {
  ASSERT_TRUE(r.witness);
  VerifyOptions opt;
  opt.tol = tol;
  const auto F = r.witness->to_factorization(A.row_labels(), A.col_labels());
  EXPECT_EQ(F.k, r.k);
  EXPECT_TRUE(verify_factorization(A, F, opt).pass);
}

TEST(Search, IdentityThreeAtTwoFails) {
  SearchConfig cfg;
  cfg.restarts = 8;
  const auto r = psd_rank_search(identity(3), 2, cfg);
  EXPECT_FALSE(r.found);
  EXPECT_GE(r.best_residual, 0.05);
  EXPECT_EQ(r.method, "descent");
}

TEST(Search, IdentityAtFullSize) {
  const auto r = psd_rank_search(identity(3), 3);
  EXPECT_TRUE(r.found);
  EXPECT_LE(r.best_residual, 1e-10);
  EXPECT_EQ(r.method, "trivial");
  expect_witness_verifies(identity(3), r, 1e-10);
}

TEST(Search, PTwoAtTwo) {
  const InstanceMatrix A = build_P(2);
  const auto r = psd_rank_search(A, 2);
  EXPECT_TRUE(r.found);
  EXPECT_LE(r.best_residual, 1e-8);
  expect_witness_verifies(A, r, 1e-8);
}

TEST(Search, RankOneIsExact) {
  EXPECT_FALSE(psd_rank_search(identity(2), 1).found);
  const InstanceMatrix outer = InstanceMatrix::from_dense({{1, 2, 0}, {2, 4, 0}, {3, 6, 0}});
  const auto r = psd_rank_search(outer, 1);
  EXPECT_TRUE(r.found);
  EXPECT_EQ(r.method, "rank-one-exact");
  expect_witness_verifies(outer, r, 1e-12);
  EXPECT_TRUE(psd_rank_search(identity(2), 2).found);
}

TEST(Search, MonotoneWithPaddedWitness) {
  // (PQ) o (PQ) with inner dimension 2 has PSD rank at most 2.
  const Rows Prow{{1, 0}, {1, 1}, {0, 1}, {2, -1}};
  const Rows Qcol{{1, 1}, {0, 1}, {1, -1}, {1, 2}};
  const InstanceMatrix A = hadamard_square_target(Prow, Qcol);
  const auto two = psd_rank_search(A, 2);
  ASSERT_TRUE(two.found);
  SearchConfig cfg;
  cfg.initial = two.witness;
  cfg.restarts = 1;
  const auto three = psd_rank_search(A, 3, cfg);
  EXPECT_TRUE(three.found);
  expect_witness_verifies(A, three, 1e-8);
}

TEST(Search, ReproducibleFromSeed) {
  SearchConfig cfg;
  cfg.restarts = 3;
  cfg.seed = 11;
  const auto a = psd_rank_search(identity(3), 2, cfg);
  const auto b = psd_rank_search(identity(3), 2, cfg);
  EXPECT_EQ(a.best_residual, b.best_residual);
  EXPECT_EQ(a.best_restart, b.best_restart);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Search, Preconditions) { EXPECT_THROW(psd_rank_search(identity(2), 0), Error); }

TEST(DenseFactors, PaddingKeepsEntries) {
  const auto r = psd_rank_search(build_P(1), 2);
  ASSERT_TRUE(r.witness);
  const auto padded = r.witness->padded(4);
  const InstanceMatrix A = build_P(1);
  VerifyOptions opt;
  opt.tol = 1e-8;
  EXPECT_TRUE(verify_factorization(A, padded.to_factorization(A.row_labels(), A.col_labels()), opt).pass);
  EXPECT_THROW(r.witness->padded(1), Error);
}

}  // namespace
}  // namespace psdrank
