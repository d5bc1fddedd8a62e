#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "psdrank/factorization.hpp"
#include "psdrank/matrix.hpp"
#include "psdrank/polynomial.hpp"

namespace psdrank {

/// Indices (i1, i2, j1, j2) with S(i1,i2 | k,j1,j2) = [[0,1,0],[0,0,1]]
/// on known entries, for one column k.
struct SqrtPattern {
  std::size_t column = 0;
  std::size_t i1 = 0, i2 = 0, j1 = 0, j2 = 0;
};

struct SqrtWitness {
  std::vector<SqrtPattern> columns;     // one per column of S
  std::vector<SqrtPattern> transposed;  // one per column of S^T
};

struct SqrtCheckResult {
  bool holds = false;
  std::optional<SqrtWitness> witness;  // present when holds
  // First column without a pattern, when the check fails.
  bool failed_on_transpose = false;
  std::size_t failed_column = 0;
};

SqrtCheckResult sqrt_condition_check(const IncompleteMatrix& S);

/// Dominant Gram direction of every index of a factorization whose
/// blocks have rank at most one: Q(i|j) = a_i . b_j with Q o Q equal to
/// the factored matrix. Signs are fixed so the largest coordinate of each
/// vector is positive.
struct RankOneFactors {
  std::size_t k = 0;
  std::vector<std::vector<double>> a;  // per row
  std::vector<std::vector<double>> b;  // per column
  double q(std::size_t i, std::size_t j) const;
};

/// Throws rank_deficient when a block's second eigenvalue exceeds tol
/// (relative to the largest block eigenvalue, floored at 1).
template <class T>
RankOneFactors hadamard_sqrt_from_rank1(const Factorization<T>& F, double tol = 1e-9);

struct ExtractOptions {
  double coordinate_tol = 1e-7;  // vanishing test on normalized vectors
  double residual_tol = 1e-6;    // final |f(y)|
  bool check_pattern = true;     // p_u . l_v against the zero pattern of C
};

struct ExtractionResult {
  FloatPoint root;
  double residual = 0.0;
  std::vector<std::string> trace;
};

/// Reads a root of f off factor vectors p_u (rows) and l_v (columns) of a
/// rank-3 completion of C, indexed by the labels of H. Variables missing
/// from sigma are recovered as ratios of consecutive prefix products.
ExtractionResult extract_root(const Polynomial& f, const std::vector<std::string>& labels,
                              const std::vector<std::array<double, 3>>& p, const std::vector<std::array<double, 3>>& l,
                              const ExtractOptions& options = {});

/// Same, starting from a size-3 factorization with rank-1 blocks (for
/// instance the one built by completion_from_root).
template <class T>
ExtractionResult extract_root(const Polynomial& f, const Factorization<T>& F, const ExtractOptions& options = {});
ExtractionResult extract_root(const Polynomial& f, const AnyFactorization& F, const ExtractOptions& options = {});

}  // namespace psdrank
