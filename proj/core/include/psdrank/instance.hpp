#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psdrank/gadgets.hpp"
#include "psdrank/matrix.hpp"
#include "psdrank/polynomial.hpp"

namespace psdrank {

/// [[alpha,1,1],[1,1,0],[1,0,1]] for alpha in [0,4].
InstanceMatrix build_P(const Rational& alpha);

/// 9 * length(f)^4.
Integer compute_K(const Polynomial& f);

/// Labels of the two auxiliary indices of the n-th unknown (1-based).
std::string e1_label(std::size_t n);
std::string e2_label(std::size_t n);

/// Positions of unknown entries of a square incomplete matrix, row-major.
std::vector<std::pair<std::size_t, std::size_t>> unknown_positions(const IncompleteMatrix& S);

/// Completion gadget of dimension 2k+n, labels ordered E1, E2, then S's
/// labels. Each unknown e=(i,j) contributes K*P(1) on {i,e1,e2}x{j,e1,e2}.
/// S must be square with known or unknown entries, known ones in [0, K].
InstanceMatrix build_M(const IncompleteMatrix& S, const Rational& K);

/// [[S,b,0,0],[c,N,N,N],[0,N,N,0],[0,N,0,N]], with the three extra
/// indices labeled g1, g2, g3.
InstanceMatrix build_G(const InstanceMatrix& S, const std::vector<Rational>& b, const std::vector<Rational>& c,
                       const Integer& N);

struct ReductionOutput {
  InstanceMatrix M;
  std::uint64_t r = 0;  // 2k + 3
  std::uint64_t k = 0;  // unknown entries of B
  Integer K;
  IncompleteMatrix B;
  std::size_t sigma_size = 0;
  std::size_t h_size = 0;
  std::vector<std::string> trace;  // key=value records
};

ReductionOutput reduce(const Polynomial& f, const BOptions& options = {});

}  // namespace psdrank
