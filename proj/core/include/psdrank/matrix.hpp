#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "psdrank/rational.hpp"

namespace psdrank {

enum class EntryKind { known, unknown, nonzero_unknown };

struct MatrixEntry {
  EntryKind kind = EntryKind::known;
  Rational value;  // meaningful for known entries only

  static MatrixEntry known(Rational v) { return {EntryKind::known, std::move(v)}; }
  static MatrixEntry unknown() { return {EntryKind::unknown, 0}; }
  static MatrixEntry nonzero_unknown() { return {EntryKind::nonzero_unknown, 0}; }

  bool is_known() const { return kind == EntryKind::known; }
  bool is_known(const Rational& v) const { return kind == EntryKind::known && value == v; }
  bool operator==(const MatrixEntry& o) const {
    return kind == o.kind && (kind != EntryKind::known || value == o.value);
  }
};

/// Labeled dense grid of known rationals and unspecified entries. Houses
/// the incomplete matrices B and C and small hand-built instances.
class IncompleteMatrix {
 public:
  IncompleteMatrix() = default;
  /// All entries start as known zeros.
  IncompleteMatrix(std::vector<std::string> row_labels, std::vector<std::string> col_labels);

  std::size_t rows() const { return row_labels_.size(); }
  std::size_t cols() const { return col_labels_.size(); }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }

  const MatrixEntry& at(std::size_t i, std::size_t j) const { return cells_[i * cols() + j]; }
  void set(std::size_t i, std::size_t j, MatrixEntry e) { cells_[i * cols() + j] = std::move(e); }

  std::size_t count(EntryKind kind) const;
  bool is_symmetric() const;
  IncompleteMatrix transpose() const;
  bool operator==(const IncompleteMatrix&) const = default;

 private:
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
  std::vector<MatrixEntry> cells_;
};

/// Sparse nonnegative exact matrix with string labels; absent entries are 0.
class InstanceMatrix {
 public:
  struct Cell {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    Rational value;
  };

  InstanceMatrix() = default;
  /// Zero cells are dropped; negative or duplicate cells and duplicate
  /// labels throw.
  InstanceMatrix(std::vector<std::string> row_labels, std::vector<std::string> col_labels, std::vector<Cell> cells);

  static InstanceMatrix from_dense(const std::vector<std::vector<Rational>>& values,
                                   std::vector<std::string> row_labels = {}, std::vector<std::string> col_labels = {});
  /// Requires every entry to be known.
  static InstanceMatrix from_incomplete(const IncompleteMatrix& m);

  std::size_t rows() const { return row_labels_.size(); }
  std::size_t cols() const { return col_labels_.size(); }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }
  const std::vector<Cell>& cells() const { return cells_; }

  /// Zero when the entry is not stored.
  const Rational& at(std::size_t i, std::size_t j) const;
  std::optional<std::size_t> row_index(const std::string& label) const;
  std::optional<std::size_t> col_index(const std::string& label) const;

  Rational max_entry() const;
  std::vector<double> dense_values() const;  // row-major, for numerical search

  bool operator==(const InstanceMatrix& o) const;

 private:
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
  std::vector<Cell> cells_;  // sorted by (row, col)
  std::unordered_map<std::string, std::size_t> row_lookup_;
  std::unordered_map<std::string, std::size_t> col_lookup_;
};

// Matrix files:
//   psdrank-matrix v1 <nrows> <ncols>
//   row <label>                        (nrows lines, in order)
//   col <label>                        (ncols lines, in order)
//   r <target>                         (optional reduction target)
//   <row-label> <col-label> <value>    (value p/q, '?' unknown, '*' nonzero unknown)
// Entries not listed are known zeros.

void write_matrix(std::ostream& out, const InstanceMatrix& m, std::optional<std::uint64_t> target = std::nullopt);
void write_matrix(std::ostream& out, const IncompleteMatrix& m);

struct SparseMatrixFile {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::optional<std::uint64_t> target;
  struct Item {
    std::uint32_t row;
    std::uint32_t col;
    MatrixEntry entry;
  };
  std::vector<Item> items;
};

SparseMatrixFile read_matrix_file(std::istream& in);
InstanceMatrix read_instance_matrix(std::istream& in, std::optional<std::uint64_t>* target = nullptr);
IncompleteMatrix read_incomplete_matrix(std::istream& in);

}  // namespace psdrank
