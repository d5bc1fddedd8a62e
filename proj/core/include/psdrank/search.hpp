#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psdrank/factorization.hpp"
#include "psdrank/matrix.hpp"

namespace psdrank {

/// Dense k x k factor blocks: B_i = U_i U_i^T, C_j = V_j V_j^T, stored
/// column-major, one block per row or column index.
struct DenseFactors {
  std::size_t k = 0;
  std::vector<std::vector<double>> U;
  std::vector<std::vector<double>> V;

  /// Gram vectors are the columns of each block.
  FloatFactorization to_factorization(const std::vector<std::string>& row_labels,
                                      const std::vector<std::string>& col_labels) const;
  /// Zero-pads every block to size k2 >= k.
  DenseFactors padded(std::size_t k2) const;
};

struct SearchConfig {
  std::size_t restarts = 32;
  std::uint64_t seed = 1;
  double success_threshold = 1e-8;
  std::size_t descent_iterations = 4000;
  std::size_t polish_iterations = 3000;
  /// Used as the starting point of restart 0 (zero-padded if smaller).
  std::optional<DenseFactors> initial;
};

struct SearchReport {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  bool found = false;
  double best_residual = 0.0;  // max-abs entry residual
  std::size_t best_restart = 0;
  std::size_t iterations = 0;  // total over restarts
  std::string method;          // rank-one-exact, trivial, descent
  std::optional<DenseFactors> witness;  // best factors, found or not
};

/// Seeded multi-start search for a size-k PSD factorization. k = 1 is
/// decided exactly and k >= min(rows, cols) by the diagonal construction.
/// A failed search is evidence, not a proof of a lower bound.
SearchReport psd_rank_search(const InstanceMatrix& A, std::size_t k, const SearchConfig& config = {});

}  // namespace psdrank
