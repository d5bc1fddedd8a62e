#pragma once

#include <array>
#include <string>
#include <vector>

#include "psdrank/factorization.hpp"
#include "psdrank/gadgets.hpp"
#include "psdrank/matrix.hpp"
#include "psdrank/polynomial.hpp"

namespace psdrank {

/// Size-2 factorization of P(alpha) with a = 1 and b = (alpha - 2) / 2.
/// Labels match build_P.
ExactFactorization p_alpha_factorization(const Rational& alpha);

/// Rank-1 Gram vectors p_i (rows of P) and q_j (columns of Q) realizing
/// (PQ) o (PQ). `Q_columns[j]` is the j-th column of Q.
template <class T>
Factorization<T> hadamard_square_factorization(const std::vector<std::vector<T>>& P_rows,
                                               const std::vector<std::vector<T>>& Q_columns);

/// (PQ) o (PQ) as an exact instance matrix with numbered labels.
InstanceMatrix hadamard_square_target(const std::vector<std::vector<Rational>>& P_rows,
                                      const std::vector<std::vector<Rational>>& Q_columns);

/// Block-diagonal padding: F2's coordinates are shifted past F1's. The
/// result factors A1 + A2 at size k1 + k2.
template <class T>
Factorization<T> direct_sum(const Factorization<T>& F1, const Factorization<T>& F2);

/// B'(u|v) = ((u.v)(xi))^2 over H x H together with its size-3 witness.
/// `p` holds the evaluated labels u(xi), which serve as both row and
/// column vectors.
template <class T>
struct Completion {
  std::vector<std::string> labels;
  std::vector<std::array<T, 3>> p;
  std::vector<T> values;  // row-major |H| x |H|
  T max_entry = T(0);
  Factorization<T> factorization;

  const T& at(std::size_t i, std::size_t j) const { return values[i * labels.size() + j]; }
};

/// Requires f(xi) = 0 (|f(xi)| <= 1e-12 for floating points) and every
/// |xi_i| <= 1.
Completion<Rational> completion_from_root(const Polynomial& f, const ExactPoint& xi);
Completion<double> completion_from_root(const Polynomial& f, const FloatPoint& xi);

InstanceMatrix to_instance(const Completion<Rational>& c);

/// Size 2k+3 factorization of build_M(S, K) with labels E1, E2, then S's:
/// the completion on three shared coordinates plus K*P(alpha_e) on two
/// fresh coordinates per unknown, alpha_e = (K - B'(i|j)) / K.
template <class T>
Factorization<T> assemble_instance_witness(const IncompleteMatrix& S, const Completion<T>& completion, const Rational& K);

/// Runs build_B, compute_K and completion_from_root for f.
Factorization<Rational> assemble_instance_witness(const Polynomial& f, const ExactPoint& xi, const BOptions& options = {});
Factorization<double> assemble_instance_witness(const Polynomial& f, const FloatPoint& xi, const BOptions& options = {});

}  // namespace psdrank
