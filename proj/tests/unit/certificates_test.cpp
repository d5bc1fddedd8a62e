#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>

#include "psdrank/error.hpp"
#include "psdrank/extraction.hpp"
#include "psdrank/factorization.hpp"
#include "psdrank/gadgets.hpp"
#include "psdrank/instance.hpp"
#include "psdrank/witness.hpp"
#include "support.hpp"

namespace psdrank {
namespace {

Polynomial P(const char* text) { return parse_polynomial(text); }
using Rows = std::vector<std::vector<Rational>>;

ExactFactorization identity_factorization(std::size_t n) {
  ExactFactorization F;
  F.k = n;
  for (std::size_t i = 0; i < n; ++i) {
    F.row_labels.push_back(std::to_string(i + 1));
    F.rows.push_back({GramVector<Rational>{1, {{static_cast<std::uint32_t>(i), Rational(1)}}}});
  }
  F.col_labels = F.row_labels;
  F.cols = F.rows;
  return F;
}

InstanceMatrix identity(std::size_t n) {
  Rows v(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1;
  return InstanceMatrix::from_dense(v);
}

// Dense tr(B_i C_j) computed straight from the Gram sums, as an oracle
// for the sparse trace product.
Rational dense_trace(const std::vector<GramVector<Rational>>& row, const std::vector<GramVector<Rational>>& col,
                     std::size_t k) {
  auto expand = [k](const GramVector<Rational>& g) {
    std::vector<Rational> x(k, 0);
    for (const auto& [c, v] : g.coords) x[c] = v;
    return x;
  };
  Rational total = 0;
  for (const auto& a : row) {
    for (const auto& b : col) {
      const auto x = expand(a), y = expand(b);
      Rational d = 0;
      for (std::size_t t = 0; t < k; ++t) d += x[t] * y[t];
      total += a.weight * b.weight * d * d;
    }
  }
  return total;
}

TEST(PAlpha, GridVerifiesExactly) {
  for (int step = 0; step <= 8; ++step) {
    const Rational alpha = make_rational(step, 2);
    const ExactFactorization F = p_alpha_factorization(alpha);
    EXPECT_EQ(F.k, 2u);
    const auto report = verify_factorization(build_P(alpha), F);
    EXPECT_TRUE(report.pass) << to_string(alpha);
    EXPECT_EQ(report.max_residual_exact, 0);
    EXPECT_EQ(report.checked, 9u);
  }
  EXPECT_THROW(p_alpha_factorization(5), Error);
  EXPECT_THROW(p_alpha_factorization(make_rational(-1, 3)), Error);
}

TEST(PAlpha, RandomRationalAlphas) {
  testing::Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const Rational alpha = make_rational(testing::uniform_int(rng, 0, 400), testing::uniform_int(rng, 100, 107));
    if (alpha > 4) continue;
    EXPECT_EQ(verify_factorization(build_P(alpha), p_alpha_factorization(alpha)).max_residual_exact, 0);
  }
}

TEST(Verify, IdentityAndMismatch) {
  EXPECT_TRUE(verify_factorization(identity(2), identity_factorization(2)).pass);
  const auto bad = verify_factorization(identity(3), [] {
    auto F = identity_factorization(3);
    F.rows[0][0].weight = 2;
    return F;
  }());
  EXPECT_FALSE(bad.pass);
  EXPECT_EQ(bad.max_residual_exact, 1);
  EXPECT_EQ(bad.worst_row, 0u);
  EXPECT_EQ(bad.worst_col, 0u);
  EXPECT_THROW(verify_factorization(identity(3), identity_factorization(2)), Error);
  auto wrong = identity_factorization(2);
  wrong.row_labels[1] = "z";
  EXPECT_THROW(verify_factorization(identity(2), wrong), Error);
  auto oversized = identity_factorization(2);
  oversized.rows[0][0].coords[0].first = 5;
  EXPECT_THROW(verify_factorization(identity(2), oversized), Error);
}

TEST(Verify, FloatTolerance) {
  const FloatFactorization F = to_float(p_alpha_factorization(make_rational(1, 3)));
  VerifyOptions opt;
  opt.tol = 1e-12;
  EXPECT_TRUE(verify_factorization(build_P(make_rational(1, 3)), F, opt).pass);
  EXPECT_FALSE(verify_factorization(build_P(make_rational(1, 2)), F, opt).pass);
}

TEST(TraceProduct, MatchesDenseOracle) {
  testing::Rng rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = static_cast<std::size_t>(testing::uniform_int(rng, 1, 6));
    auto random_list = [&](int count) {
      std::vector<GramVector<Rational>> out;
      for (int t = 0; t < count; ++t) {
        GramVector<Rational> g;
        g.weight = abs(testing::random_rational(rng));
        for (std::uint32_t c = 0; c < k; ++c) {
          if (testing::uniform_int(rng, 0, 2) == 0) g.coords.emplace_back(c, testing::random_rational(rng));
        }
        out.push_back(std::move(g));
      }
      return out;
    };
    // sizes straddle the 16-pair switch to the coordinate join
    const auto row = random_list(testing::uniform_int(rng, 0, 8));
    const auto col = random_list(testing::uniform_int(rng, 0, 8));
    ASSERT_EQ(trace_product(row, col), dense_trace(row, col, k));
  }
}

TEST(Hadamard, Examples) {
  const Rows I3{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const auto F = hadamard_square_factorization(I3, I3);
  EXPECT_EQ(F.k, 3u);
  EXPECT_EQ(hadamard_square_target(I3, I3), identity(3));
  EXPECT_TRUE(verify_factorization(identity(3), F).pass);

  const Rows Prow{{1, 1, 0}, {1, -1, 0}};
  const Rows Qcol{{1, 1, 0}, {1, -1, 0}};
  const InstanceMatrix target = hadamard_square_target(Prow, Qcol);
  EXPECT_EQ(target, InstanceMatrix::from_dense({{4, 0}, {0, 4}}));
  EXPECT_TRUE(verify_factorization(target, hadamard_square_factorization(Prow, Qcol)).pass);
}

TEST(Hadamard, RandomFactorsVerifyExactly) {
  testing::Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = testing::uniform_int(rng, 1, 5), n = testing::uniform_int(rng, 1, 5);
    Rows Prow(m, std::vector<Rational>(3)), Qcol(n, std::vector<Rational>(3));
    for (auto& r : Prow) for (auto& x : r) x = testing::random_rational(rng);
    for (auto& r : Qcol) for (auto& x : r) x = testing::random_rational(rng);
    const auto report = verify_factorization(hadamard_square_target(Prow, Qcol), hadamard_square_factorization(Prow, Qcol));
    ASSERT_TRUE(report.pass);
  }
}

TEST(DirectSum, Examples) {
  const InstanceMatrix one = InstanceMatrix::from_dense({{1}});
  const InstanceMatrix two = InstanceMatrix::from_dense({{2}});
  const auto F1 = identity_factorization(1);
  const auto S = direct_sum(F1, F1);
  EXPECT_EQ(S.k, 2u);
  EXPECT_TRUE(verify_factorization(two, S).pass);
  EXPECT_FALSE(verify_factorization(one, S).pass);

  const auto P1 = p_alpha_factorization(1);
  const auto P2 = direct_sum(P1, P1);
  EXPECT_EQ(P2.k, 4u);
  EXPECT_TRUE(verify_factorization(InstanceMatrix::from_dense({{2, 2, 2}, {2, 2, 0}, {2, 0, 2}}), P2).pass);

  ExactFactorization zero{1, P1.row_labels, P1.col_labels, {{}, {}, {}}, {{}, {}, {}}};
  const auto Z = direct_sum(P1, zero);
  EXPECT_EQ(verify_factorization(build_P(1), Z).max_residual_exact, 0);

  EXPECT_THROW(direct_sum(F1, P1), Error);
}

TEST(Completion, SquareMinusOneAtOne) {
  const Polynomial f = P("x1*x1 - 1");
  const auto c = completion_from_root(f, ExactPoint{{x_var(1), 1}});
  const IncompleteMatrix B = build_B(f);
  ASSERT_EQ(c.labels, B.row_labels());
  std::size_t agree = 0;
  for (std::size_t i = 0; i < B.rows(); ++i) {
    for (std::size_t j = 0; j < B.cols(); ++j) {
      if (B.at(i, j).is_known()) {
        ASSERT_EQ(c.at(i, j), B.at(i, j).value);
        ++agree;
      }
    }
  }
  EXPECT_EQ(agree, B.count(EntryKind::known));
  EXPECT_LE(c.max_entry, 144);
  EXPECT_EQ(c.max_entry, 9);
  EXPECT_TRUE(verify_factorization(to_instance(c), c.factorization).pass);
}

TEST(Completion, Errors) {
  const Polynomial f = P("x1*x1 - 1");
  EXPECT_THROW(completion_from_root(f, ExactPoint{{x_var(1), 2}}), Error);
  EXPECT_THROW(completion_from_root(P("x1 - 2"), ExactPoint{{x_var(1), 2}}), Error);
  EXPECT_THROW(completion_from_root(f, ExactPoint{}), Error);
  EXPECT_THROW(completion_from_root(f, FloatPoint{{x_var(1), 0.999}}), Error);
}

TEST(Completion, AgreesWithBOnRandomRationalRoots) {
  testing::Rng rng(54);
  for (int trial = 0; trial < 4; ++trial) {
    // (x1 - a)(x2 + 1) vanishes at x1 = a
    const int a = testing::uniform_int(rng, -1, 1);
    const Rational b = make_rational(testing::uniform_int(rng, -4, 4), 4);
    const Polynomial f = P("x1*x2 + x1") - Polynomial::constant(a) * P("x2 + 1");
    const auto c = completion_from_root(f, ExactPoint{{x_var(1), a}, {x_var(2), b}});
    const IncompleteMatrix B = build_B(f);
    for (std::size_t i = 0; i < B.rows(); ++i) {
      for (std::size_t j = 0; j < B.cols(); ++j) {
        if (B.at(i, j).is_known()) ASSERT_EQ(c.at(i, j), B.at(i, j).value);
      }
    }
    EXPECT_LE(c.max_entry, Rational(compute_K(f)));
  }
}

TEST(Assemble, FullVerificationOnSmallInstance) {
  const Polynomial f = P("x1 - 1");
  const auto B = build_B(f);
  const Rational K(compute_K(f));
  const InstanceMatrix M = build_M(B, K);
  const auto F = assemble_instance_witness(f, ExactPoint{{x_var(1), 1}});
  const std::size_t k = B.count(EntryKind::unknown);
  EXPECT_EQ(F.k, 2 * k + 3);
  if (M.rows() <= 500) {
    const auto report = verify_factorization(M, F);
    EXPECT_TRUE(report.pass);
    EXPECT_EQ(report.max_residual_exact, 0);
  } else {
    VerifyOptions opt;
    opt.mode = VerifyMode::sampled;
    EXPECT_TRUE(verify_factorization(M, F, opt).pass);
  }
}

TEST(Assemble, HandInstanceWithBlocks) {
  // S = [[?, 1], [1, ?]] completed by the all-ones rank-1 matrix.
  IncompleteMatrix S({"a", "b"}, {"a", "b"});
  S.set(0, 0, MatrixEntry::unknown());
  S.set(1, 1, MatrixEntry::unknown());
  S.set(0, 1, MatrixEntry::known(1));
  S.set(1, 0, MatrixEntry::known(1));
  Completion<Rational> c;
  c.labels = {"a", "b"};
  c.p = {{1, 0, 0}, {1, 0, 0}};
  c.values = {1, 1, 1, 1};
  c.max_entry = 1;
  c.factorization = hadamard_square_factorization(Rows{{1, 0, 0}, {1, 0, 0}}, Rows{{1, 0, 0}, {1, 0, 0}});
  c.factorization.row_labels = c.labels;
  c.factorization.col_labels = c.labels;
  const auto F = assemble_instance_witness(S, c, 3);
  EXPECT_EQ(F.k, 7u);
  const auto report = verify_factorization(build_M(S, 3), F);
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.checked, 36u);

  c.values[1] = 2;
  EXPECT_THROW(assemble_instance_witness(S, c, 3), Error);
  c.values = {4, 1, 1, 1};
  EXPECT_THROW(assemble_instance_witness(S, c, 3), Error);
}

TEST(Assemble, FloatWitnessWithinTolerance) {
  const Polynomial f = P("2*x1*x1 - 1");
  const auto F = assemble_instance_witness(f, FloatPoint{{x_var(1), std::sqrt(0.5)}});
  const InstanceMatrix M = build_M(build_B(f), Rational(compute_K(f)));
  VerifyOptions opt;
  opt.mode = VerifyMode::sampled;
  opt.samples = 20000;
  opt.tol = 1e-9;
  EXPECT_TRUE(verify_factorization(M, F, opt).pass);
}

TEST(Sampled, DeterministicForSeed) {
  const Polynomial f = P("x1*x1 - 1");
  const auto F = assemble_instance_witness(f, ExactPoint{{x_var(1), 1}});
  const InstanceMatrix M = build_M(build_B(f), 144);
  VerifyOptions opt;
  opt.mode = VerifyMode::sampled;
  opt.samples = 2000;
  opt.seed = 7;
  const auto a = verify_factorization(M, F, opt);
  const auto b = verify_factorization(M, F, opt);
  EXPECT_EQ(a.worst_row, b.worst_row);
  EXPECT_EQ(a.worst_col, b.worst_col);
  EXPECT_EQ(a.checked, 2000u);
  EXPECT_TRUE(a.pass);
  EXPECT_EQ(a.samples, 2000u);
}

TEST(SplitMix, KnownSequence) {
  // splitmix64 reference outputs for seed 0
  SplitMix64 g(0);
  EXPECT_EQ(g.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(g.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(g.next(), 0x06C45D188009454FULL);
}

TEST(Extract, RoundTripSquareMinusOne) {
  const Polynomial f = P("x1*x1 - 1");
  for (int xi : {1, -1}) {
    const auto c = completion_from_root(f, ExactPoint{{x_var(1), xi}});
    const auto r = extract_root(f, c.factorization);
    EXPECT_NEAR(r.root.at(x_var(1)), xi, 1e-9);
    EXPECT_LE(r.residual, 1e-9);
  }
}

TEST(Extract, RoundTripProductMinusOne) {
  const Polynomial f = P("x1*x2 - 1");
  for (int s : {1, -1}) {
    const auto c = completion_from_root(f, ExactPoint{{x_var(1), s}, {x_var(2), s}});
    const auto r = extract_root(f, AnyFactorization(c.factorization));
    EXPECT_NEAR(r.root.at(x_var(1)), s, 1e-9);
    EXPECT_NEAR(r.root.at(x_var(2)), s, 1e-9);
  }
}

TEST(Extract, InvariantUnderBasisChange) {
  // p -> G p, l -> G^{-T} l leaves every p.l unchanged.
  const Polynomial f = P("x1*x1 + x1*x2 - x2");
  const ExactPoint xi{{x_var(1), make_rational(1, 2)}, {x_var(2), make_rational(1, 2)}};
  ASSERT_EQ(evaluate(f, xi), 0);
  const auto c = completion_from_root(f, xi);
  testing::Rng rng(55);
  Eigen::Matrix3d G;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) G(a, b) = std::uniform_real_distribution<double>(-1, 1)(rng);
  }
  G += 2 * Eigen::Matrix3d::Identity();
  const Eigen::Matrix3d Ginv_t = G.inverse().transpose();
  std::vector<std::array<double, 3>> p, l;
  for (const auto& v : c.p) {
    const Eigen::Vector3d x(to_double(v[0]), to_double(v[1]), to_double(v[2]));
    const Eigen::Vector3d gp = G * x, gl = Ginv_t * x;
    p.push_back({gp(0), gp(1), gp(2)});
    l.push_back({gl(0), gl(1), gl(2)});
  }
  const auto r = extract_root(f, c.labels, p, l);
  EXPECT_NEAR(r.root.at(x_var(1)), 0.5, 1e-9);
  EXPECT_NEAR(r.root.at(x_var(2)), 0.5, 1e-9);
}

TEST(Extract, Errors) {
  const Polynomial f = P("x1*x1 - 1");
  const auto c = completion_from_root(f, ExactPoint{{x_var(1), 1}});
  std::vector<std::array<double, 3>> p, l;
  for (const auto& v : c.p) {
    p.push_back({to_double(v[0]), to_double(v[1]), to_double(v[2])});
    l.push_back(p.back());
  }
  const SigmaSet sigma = sigma_set(f);
  auto at = [&](const char* label) {
    for (std::size_t i = 0; i < c.labels.size(); ++i) {
      if (c.labels[i] == parse_label(label, sigma).to_string()) return i;
    }
    return c.labels.size();
  };
  auto collinear = p;
  collinear[at("(0,0,1)")] = collinear[at("(1,0,0)")];
  ExtractOptions loose;
  loose.check_pattern = false;
  try {
    extract_root(f, c.labels, collinear, l, loose);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::singular_basis);
  }
  // the same vectors violate C's zero pattern
  EXPECT_THROW(extract_root(f, c.labels, collinear, l), Error);

  ExactFactorization wrong = c.factorization;
  wrong.k = 4;
  EXPECT_THROW(extract_root(f, wrong), Error);
  EXPECT_THROW(extract_root(P("x1 - 1"), c.factorization), Error);
}

TEST(SqrtCheck, BuildBSatisfiesCondition) {
  for (const char* text : {"x1*x1 - 1", "x1*x2 - 1", "x1*x1 + x1 - 1"}) {
    const auto B = build_B(P(text));
    const auto result = sqrt_condition_check(B);
    ASSERT_TRUE(result.holds) << text;
    ASSERT_TRUE(result.witness);
    EXPECT_EQ(result.witness->columns.size(), B.cols());
    for (const auto& w : result.witness->columns) {
      EXPECT_TRUE(B.at(w.i1, w.column).is_known(0));
      EXPECT_TRUE(B.at(w.i2, w.column).is_known(0));
      EXPECT_TRUE(B.at(w.i1, w.j1).is_known(1));
      EXPECT_TRUE(B.at(w.i2, w.j1).is_known(0));
      EXPECT_TRUE(B.at(w.i1, w.j2).is_known(0));
      EXPECT_TRUE(B.at(w.i2, w.j2).is_known(1));
    }
  }
}

TEST(SqrtCheck, SmallExamples) {
  IncompleteMatrix m({"a", "b"}, {"1", "2", "3"});
  m.set(0, 1, MatrixEntry::known(1));
  m.set(1, 2, MatrixEntry::known(1));
  // column 2 has a single known zero, so no row pair exists there
  auto r = sqrt_condition_check(m);
  EXPECT_FALSE(r.holds);
  EXPECT_FALSE(r.failed_on_transpose);
  EXPECT_EQ(r.failed_column, 1u);

  IncompleteMatrix u({"a", "b", "c"}, {"a", "b", "c"});
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) u.set(i, j, MatrixEntry::unknown());
  }
  r = sqrt_condition_check(u);
  EXPECT_FALSE(r.holds);
  EXPECT_FALSE(r.failed_on_transpose);
  EXPECT_EQ(r.failed_column, 0u);
}

TEST(HadamardSqrt, RecoversFactorsUpToSign) {
  const Rows Prow{{1, 2, 0}, {0, 1, -1}, {3, 0, 1}};
  const Rows Qcol{{1, 0, 0}, {1, 1, 1}};
  const auto q = hadamard_sqrt_from_rank1(hadamard_square_factorization(Prow, Qcol));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      double pq = 0;
      for (int t = 0; t < 3; ++t) pq += to_double(Prow[i][t] * Qcol[j][t]);
      EXPECT_NEAR(std::fabs(q.q(i, j)), std::fabs(pq), 1e-12);
    }
  }
  const auto id = hadamard_sqrt_from_rank1(identity_factorization(2));
  EXPECT_NEAR(std::fabs(id.q(0, 0)), 1, 1e-12);
  EXPECT_NEAR(id.q(0, 1), 0, 1e-12);
  try {
    hadamard_sqrt_from_rank1(p_alpha_factorization(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::rank_deficient);
  }
}

TEST(FactorizationFile, RoundTrips) {
  const auto F = assemble_instance_witness(P("x1 - 1"), ExactPoint{{x_var(1), 1}});
  std::ostringstream out;
  write_factorization(out, F);
  std::istringstream in(out.str());
  const AnyFactorization back = read_factorization(in);
  ASSERT_TRUE(std::holds_alternative<ExactFactorization>(back));
  std::ostringstream again;
  write_factorization(again, back);
  EXPECT_EQ(out.str(), again.str());

  const FloatFactorization G = to_float(p_alpha_factorization(make_rational(1, 3)));
  std::ostringstream fout;
  write_factorization(fout, G);
  std::istringstream fin(fout.str());
  const auto gb = std::get<FloatFactorization>(read_factorization(fin));
  EXPECT_EQ(gb.rows[0][0].weight, G.rows[0][0].weight);
  EXPECT_EQ(gb.cols[0][0].coords, G.cols[0][0].coords);
}

TEST(FactorizationFile, RejectsMalformedInput) {
  for (const char* text : {"", "psdrank-factorization v1 2 1 1 fuzzy\n",
                           "psdrank-factorization v1 1 1 1 exact\nrow a 1 1|0:1\n",
                           "psdrank-factorization v1 1 1 1 exact\nrow a 1 1|0:1\ncol a 2 1|0:1\n",
                           "psdrank-factorization v1 1 1 1 exact\nrow a 1 1|3:1\ncol a 1 1|0:1\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_factorization(in), Error) << text;
  }
}

}  // namespace
}  // namespace psdrank
