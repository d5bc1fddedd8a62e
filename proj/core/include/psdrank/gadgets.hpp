#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "psdrank/matrix.hpp"
#include "psdrank/polynomial.hpp"

namespace psdrank {

/// The label alphabet of f: signed prefix products of every monomial,
/// signed partial sums of f, and 0. Sorted by Polynomial ordering.
struct SigmaSet {
  std::vector<Polynomial> elements;

  std::size_t size() const { return elements.size(); }
  /// Index of p, or size() when p is not an element.
  std::size_t index_of(const Polynomial& p) const;
  bool contains(const Polynomial& p) const { return index_of(p) < size(); }
};

SigmaSet sigma_set(const Polynomial& f);

/// A triple over sigma; `index` holds the positions of the coordinates in
/// the sigma set that produced it.
struct LabelVector {
  std::array<Polynomial, 3> coords;
  std::array<std::uint32_t, 3> index{};

  /// "(x1*x1-1,0,1)"
  std::string to_string() const;
  bool operator==(const LabelVector& o) const { return coords == o.coords; }
};

/// Parses the to_string form against a sigma set; throws parse when a
/// coordinate is malformed or not in sigma.
LabelVector parse_label(std::string_view text, const SigmaSet& sigma);

/// Triples over sigma with at least one coordinate equal to 1, ordered
/// lexicographically by sigma index. Size |sigma|^3 - (|sigma|-1)^3.
std::vector<LabelVector> index_set_H(const SigmaSet& sigma);

/// Exact u.v = u1 v1 + u2 v2 + u3 v3.
Polynomial dot(const LabelVector& u, const LabelVector& v);

/// Square matrix of polynomials labeled by H on both sides.
struct SymbolicMatrix {
  std::vector<LabelVector> labels;
  std::vector<Polynomial> entries;  // row-major

  std::size_t size() const { return labels.size(); }
  const Polynomial& at(std::size_t i, std::size_t j) const { return entries[i * size() + j]; }
};

/// A(u|v) = (u.v)^2 over H x H.
SymbolicMatrix build_A(const Polynomial& f);

/// Text dump: header `psdrank-symbolic v1 <n> <n>`, row/col label lines,
/// then `<row> <col> <polynomial>` for every nonzero entry.
void write_symbolic_matrix(std::ostream& out, const SymbolicMatrix& a);

struct BOptions {
  /// Place a known zero when f divides (u.v)^2 instead of u.v. The two
  /// tests agree for squarefree f.
  bool zero_test_on_square = false;
};

/// B(u|v) = c^2 when u.v is the constant c, 0 when f divides u.v, and
/// unknown otherwise. Labels are H rendered with LabelVector::to_string.
IncompleteMatrix build_B(const Polynomial& f, const BOptions& options = {});

/// Zero where B is zero, nonzero-unknown where B is a nonzero constant,
/// unknown elsewhere.
IncompleteMatrix build_C(const IncompleteMatrix& B);
IncompleteMatrix build_C(const Polynomial& f, const BOptions& options = {});

}  // namespace psdrank
