#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "psdrank/matrix.hpp"
#include "psdrank/rational.hpp"

namespace psdrank {

/// The vector sqrt(weight) * x, with x stored sparsely as sorted
/// (coordinate, value) pairs. The weight lets exact factorizations carry
/// PSD blocks whose Gram vectors have irrational entries.
template <class T>
struct GramVector {
  T weight = T(1);
  std::vector<std::pair<std::uint32_t, T>> coords;
};

/// Row i stands for B_i = sum of w x x^T over its Gram vectors, column j
/// likewise for C_j; the factored matrix is tr(B_i C_j). Each index holds
/// at most k vectors (missing ones are zero) of dimension k.
template <class T>
struct Factorization {
  std::size_t k = 0;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<GramVector<T>>> rows;
  std::vector<std::vector<GramVector<T>>> cols;

  /// Throws on vector counts above k, coordinates outside [0, k),
  /// unsorted coordinates or negative weights.
  void validate() const;

  /// tr(B_i C_j) = sum over pairs of w_a w_b (a.b)^2.
  T entry(std::size_t i, std::size_t j) const;
};

using ExactFactorization = Factorization<Rational>;
using FloatFactorization = Factorization<double>;
using AnyFactorization = std::variant<ExactFactorization, FloatFactorization>;

FloatFactorization to_float(const ExactFactorization& f);

/// Sum over pairs of w_a w_b (a.b)^2 for two Gram vector lists.
template <class T>
T trace_product(const std::vector<GramVector<T>>& row, const std::vector<GramVector<T>>& col);

/// splitmix64: state += 0x9E3779B97F4A7C15, then two xor-shift-multiply
/// rounds. Sampled verification draws i = next() % rows, then
/// j = next() % cols.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

enum class VerifyMode { full, sampled };

struct VerifyOptions {
  VerifyMode mode = VerifyMode::full;
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  double tol = 0.0;
};

struct VerificationReport {
  VerifyMode mode = VerifyMode::full;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::uint64_t checked = 0;
  bool exact = false;
  Rational max_residual_exact;  // set in exact mode
  double max_residual = 0.0;
  std::size_t worst_row = 0;
  std::size_t worst_col = 0;
  bool pass = false;
};

/// Compares tr(B_i C_j) with A(i|j). Labels are matched by name; the
/// two label sets must coincide.
template <class T>
VerificationReport verify_factorization(const InstanceMatrix& A, const Factorization<T>& F,
                                        const VerifyOptions& options = {});
VerificationReport verify_factorization(const InstanceMatrix& A, const AnyFactorization& F,
                                        const VerifyOptions& options = {});

// Factorization files:
//   psdrank-factorization v1 <k> <nrows> <ncols> <exact|float>
//   row <label> <count> <w>|<c>:<x>,<c>:<x> ...
//   col <label> <count> ...
// One token per Gram vector: weight, '|', then sparse coordinates.

template <class T>
void write_factorization(std::ostream& out, const Factorization<T>& F);
void write_factorization(std::ostream& out, const AnyFactorization& F);
AnyFactorization read_factorization(std::istream& in);

/// Shared label layout between two factorizations.
void require_same_labels(const std::vector<std::string>& a, const std::vector<std::string>& b, const char* what);

}  // namespace psdrank
