#include "psdrank/matrix.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "psdrank/error.hpp"

namespace psdrank {

namespace {

std::unordered_map<std::string, std::size_t> index_labels(const std::vector<std::string>& labels, const char* what) {
  std::unordered_map<std::string, std::size_t> lookup;
  lookup.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty() || labels[i].find_first_of(" \t\n") != std::string::npos) {
      throw Error(ErrorCode::precondition, std::string(what) + " label '" + labels[i] + "' must be a nonempty token");
    }
    if (!lookup.emplace(labels[i], i).second) {
      throw Error(ErrorCode::precondition, std::string("duplicate ") + what + " label '" + labels[i] + "'");
    }
  }
  return lookup;
}

std::vector<std::string> numbered(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i + 1));
  return out;
}

}  // namespace

IncompleteMatrix::IncompleteMatrix(std::vector<std::string> row_labels, std::vector<std::string> col_labels)
    : row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)) {
  cells_.assign(row_labels_.size() * col_labels_.size(), MatrixEntry::known(0));
}

std::size_t IncompleteMatrix::count(EntryKind kind) const {
  return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [&](const auto& e) { return e.kind == kind; }));
}

bool IncompleteMatrix::is_symmetric() const {
  if (rows() != cols()) return false;
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = i + 1; j < cols(); ++j) {
      if (!(at(i, j) == at(j, i))) return false;
    }
  }
  return true;
}

IncompleteMatrix IncompleteMatrix::transpose() const {
  IncompleteMatrix t(col_labels_, row_labels_);
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) t.set(j, i, at(i, j));
  }
  return t;
}

InstanceMatrix::InstanceMatrix(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
                               std::vector<Cell> cells)
    : row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)) {
  row_lookup_ = index_labels(row_labels_, "row");
  col_lookup_ = index_labels(col_labels_, "column");
  std::erase_if(cells, [](const Cell& c) { return sgn(c.value) == 0; });
  for (const Cell& c : cells) {
    if (c.row >= rows() || c.col >= cols()) throw Error(ErrorCode::dimension_mismatch, "cell outside the matrix");
    if (sgn(c.value) < 0) {
      throw Error(ErrorCode::precondition, "instance matrices are nonnegative; entry (" + row_labels_[c.row] + ", " +
                                               col_labels_[c.col] + ") is " + to_string(c.value));
    }
  }
  std::sort(cells.begin(), cells.end(),
            [](const Cell& a, const Cell& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
  for (std::size_t k = 1; k < cells.size(); ++k) {
    if (cells[k].row == cells[k - 1].row && cells[k].col == cells[k - 1].col) {
      throw Error(ErrorCode::precondition, "duplicate entry (" + row_labels_[cells[k].row] + ", " +
                                               col_labels_[cells[k].col] + ")");
    }
  }
  cells_ = std::move(cells);
}

InstanceMatrix InstanceMatrix::from_dense(const std::vector<std::vector<Rational>>& values,
                                          std::vector<std::string> row_labels, std::vector<std::string> col_labels) {
  const std::size_t n = values.size();
  const std::size_t m = n ? values.front().size() : col_labels.size();
  if (row_labels.empty()) row_labels = numbered(n);
  if (col_labels.empty()) col_labels = numbered(m);
  if (row_labels.size() != n || col_labels.size() != m) {
    throw Error(ErrorCode::dimension_mismatch, "label count does not match the matrix");
  }
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i].size() != m) throw Error(ErrorCode::dimension_mismatch, "ragged dense matrix");
    for (std::size_t j = 0; j < m; ++j) {
      cells.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), values[i][j]});
    }
  }
  return InstanceMatrix(std::move(row_labels), std::move(col_labels), std::move(cells));
}

InstanceMatrix InstanceMatrix::from_incomplete(const IncompleteMatrix& m) {
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const MatrixEntry& e = m.at(i, j);
      if (!e.is_known()) throw Error(ErrorCode::precondition, "matrix has unspecified entries");
      cells.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), e.value});
    }
  }
  return InstanceMatrix(m.row_labels(), m.col_labels(), std::move(cells));
}

const Rational& InstanceMatrix::at(std::size_t i, std::size_t j) const {
  static const Rational zero = 0;
  auto it = std::lower_bound(cells_.begin(), cells_.end(), std::pair{i, j}, [](const Cell& c, const auto& key) {
    return std::pair<std::size_t, std::size_t>{c.row, c.col} < key;
  });
  if (it != cells_.end() && it->row == i && it->col == j) return it->value;
  return zero;
}

std::optional<std::size_t> InstanceMatrix::row_index(const std::string& label) const {
  if (auto it = row_lookup_.find(label); it != row_lookup_.end()) return it->second;
  return std::nullopt;
}

std::optional<std::size_t> InstanceMatrix::col_index(const std::string& label) const {
  if (auto it = col_lookup_.find(label); it != col_lookup_.end()) return it->second;
  return std::nullopt;
}

Rational InstanceMatrix::max_entry() const {
  Rational best = 0;
  for (const Cell& c : cells_) {
    if (c.value > best) best = c.value;
  }
  return best;
}

std::vector<double> InstanceMatrix::dense_values() const {
  std::vector<double> out(rows() * cols(), 0.0);
  for (const Cell& c : cells_) out[c.row * cols() + c.col] = to_double(c.value);
  return out;
}

bool InstanceMatrix::operator==(const InstanceMatrix& o) const {
  if (row_labels_ != o.row_labels_ || col_labels_ != o.col_labels_ || cells_.size() != o.cells_.size()) return false;
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    const Cell& a = cells_[k];
    const Cell& b = o.cells_[k];
    if (a.row != b.row || a.col != b.col || a.value != b.value) return false;
  }
  return true;
}

namespace {

void write_header(std::ostream& out, const std::vector<std::string>& rows, const std::vector<std::string>& cols) {
  out << "psdrank-matrix v1 " << rows.size() << ' ' << cols.size() << '\n';
  for (const auto& l : rows) out << "row " << l << '\n';
  for (const auto& l : cols) out << "col " << l << '\n';
}

}  // namespace

void write_matrix(std::ostream& out, const InstanceMatrix& m, std::optional<std::uint64_t> target) {
  write_header(out, m.row_labels(), m.col_labels());
  if (target) out << "r " << *target << '\n';
  for (const auto& c : m.cells()) {
    out << m.row_labels()[c.row] << ' ' << m.col_labels()[c.col] << ' ' << to_fraction_string(c.value) << '\n';
  }
}

void write_matrix(std::ostream& out, const IncompleteMatrix& m) {
  write_header(out, m.row_labels(), m.col_labels());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const MatrixEntry& e = m.at(i, j);
      if (e.is_known(0)) continue;
      out << m.row_labels()[i] << ' ' << m.col_labels()[j] << ' ';
      switch (e.kind) {
        case EntryKind::known: out << to_fraction_string(e.value); break;
        case EntryKind::unknown: out << '?'; break;
        case EntryKind::nonzero_unknown: out << '*'; break;
      }
      out << '\n';
    }
  }
}

SparseMatrixFile read_matrix_file(std::istream& in) {
  SparseMatrixFile file;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw Error(ErrorCode::parse, "matrix file line " + std::to_string(line_no) + ": " + msg);
  };

  std::size_t nrows = 0, ncols = 0;
  bool have_header = false;
  std::unordered_map<std::string, std::size_t> rows, cols;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (!have_header) {
      if (tok.size() != 4 || tok[0] != "psdrank-matrix" || tok[1] != "v1") fail("expected 'psdrank-matrix v1 <nrows> <ncols>'");
      try {
        nrows = std::stoul(tok[2]);
        ncols = std::stoul(tok[3]);
      } catch (const std::exception&) {
        fail("malformed dimensions");
      }
      have_header = true;
      continue;
    }
    if (tok.size() == 2) {
      if (tok[0] == "row") {
        if (!rows.emplace(tok[1], file.row_labels.size()).second) fail("duplicate row label '" + tok[1] + "'");
        file.row_labels.push_back(tok[1]);
      } else if (tok[0] == "col") {
        if (!cols.emplace(tok[1], file.col_labels.size()).second) fail("duplicate column label '" + tok[1] + "'");
        file.col_labels.push_back(tok[1]);
      } else if (tok[0] == "r") {
        try {
          file.target = std::stoull(tok[1]);
        } catch (const std::exception&) {
          fail("malformed target");
        }
      } else {
        fail("unknown declaration '" + tok[0] + "'");
      }
      continue;
    }
    if (tok.size() != 3) fail("expected '<row-label> <col-label> <value>'");
    auto r = rows.find(tok[0]);
    auto c = cols.find(tok[1]);
    if (r == rows.end()) fail("undeclared row label '" + tok[0] + "'");
    if (c == cols.end()) fail("undeclared column label '" + tok[1] + "'");
    MatrixEntry e;
    if (tok[2] == "?") {
      e = MatrixEntry::unknown();
    } else if (tok[2] == "*") {
      e = MatrixEntry::nonzero_unknown();
    } else {
      try {
        e = MatrixEntry::known(parse_rational(tok[2]));
      } catch (const Error& err) {
        fail(err.what());
      }
    }
    file.items.push_back({static_cast<std::uint32_t>(r->second), static_cast<std::uint32_t>(c->second), std::move(e)});
  }
  if (!have_header) throw Error(ErrorCode::parse, "matrix file is empty");
  if (file.row_labels.size() != nrows || file.col_labels.size() != ncols) {
    throw Error(ErrorCode::parse, "matrix file declares " + std::to_string(file.row_labels.size()) + "x" +
                                      std::to_string(file.col_labels.size()) + " labels but the header says " +
                                      std::to_string(nrows) + "x" + std::to_string(ncols));
  }
  return file;
}

InstanceMatrix read_instance_matrix(std::istream& in, std::optional<std::uint64_t>* target) {
  SparseMatrixFile file = read_matrix_file(in);
  std::vector<InstanceMatrix::Cell> cells;
  cells.reserve(file.items.size());
  for (auto& item : file.items) {
    if (!item.entry.is_known()) throw Error(ErrorCode::parse, "instance matrix has unspecified entries");
    cells.push_back({item.row, item.col, std::move(item.entry.value)});
  }
  if (target) *target = file.target;
  return InstanceMatrix(std::move(file.row_labels), std::move(file.col_labels), std::move(cells));
}

IncompleteMatrix read_incomplete_matrix(std::istream& in) {
  SparseMatrixFile file = read_matrix_file(in);
  IncompleteMatrix m(std::move(file.row_labels), std::move(file.col_labels));
  for (auto& item : file.items) m.set(item.row, item.col, std::move(item.entry));
  return m;
}

}  // namespace psdrank
