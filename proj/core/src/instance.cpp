#include "psdrank/instance.hpp"

#include "psdrank/error.hpp"

namespace psdrank {

InstanceMatrix build_P(const Rational& alpha) {
  if (sgn(alpha) < 0 || alpha > 4) {
    throw Error(ErrorCode::out_of_range, "alpha = " + to_string(alpha) + " is outside [0, 4]");
  }
  return InstanceMatrix::from_dense({{alpha, 1, 1}, {1, 1, 0}, {1, 0, 1}});
}

Integer compute_K(const Polynomial& f) {
  Integer s = static_cast<unsigned long>(length_of(f));
  return 9 * s * s * s * s;
}

std::string e1_label(std::size_t n) { return "e1:" + std::to_string(n); }
std::string e2_label(std::size_t n) { return "e2:" + std::to_string(n); }

std::vector<std::pair<std::size_t, std::size_t>> unknown_positions(const IncompleteMatrix& S) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < S.rows(); ++i) {
    for (std::size_t j = 0; j < S.cols(); ++j) {
      if (S.at(i, j).kind == EntryKind::unknown) out.emplace_back(i, j);
    }
  }
  return out;
}

InstanceMatrix build_M(const IncompleteMatrix& S, const Rational& K) {
  if (S.rows() != S.cols()) throw Error(ErrorCode::dimension_mismatch, "the completion gadget needs a square matrix");
  if (sgn(K) <= 0) throw Error(ErrorCode::precondition, "K must be positive");
  const auto E = unknown_positions(S);
  const std::size_t k = E.size();
  const std::size_t n = S.rows();

  std::vector<std::string> labels;
  labels.reserve(2 * k + n);
  for (std::size_t e = 0; e < k; ++e) labels.push_back(e1_label(e + 1));
  for (std::size_t e = 0; e < k; ++e) labels.push_back(e2_label(e + 1));
  labels.insert(labels.end(), S.row_labels().begin(), S.row_labels().end());

  using Cell = InstanceMatrix::Cell;
  std::vector<Cell> cells;
  auto idx = [](std::size_t v) { return static_cast<std::uint32_t>(v); };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const MatrixEntry& entry = S.at(i, j);
      if (entry.kind == EntryKind::nonzero_unknown) {
        throw Error(ErrorCode::precondition, "the completion gadget does not accept nonzero-unknown entries");
      }
      if (!entry.is_known() || sgn(entry.value) == 0) continue;
      if (sgn(entry.value) < 0 || entry.value > K) {
        throw Error(ErrorCode::precondition, "known entry (" + S.row_labels()[i] + ", " + S.col_labels()[j] +
                                                 ") = " + to_string(entry.value) + " is outside [0, K]");
      }
      cells.push_back({idx(2 * k + i), idx(2 * k + j), entry.value});
    }
  }
  for (std::size_t e = 0; e < k; ++e) {
    const std::size_t i = 2 * k + E[e].first;
    const std::size_t j = 2 * k + E[e].second;
    const std::size_t a = e;      // e1
    const std::size_t b = k + e;  // e2
    // K * P(1) on rows (i, a, b) x columns (j, a, b).
    cells.push_back({idx(i), idx(j), K});
    cells.push_back({idx(i), idx(a), K});
    cells.push_back({idx(i), idx(b), K});
    cells.push_back({idx(a), idx(j), K});
    cells.push_back({idx(a), idx(a), K});
    cells.push_back({idx(b), idx(j), K});
    cells.push_back({idx(b), idx(b), K});
  }
  return InstanceMatrix(labels, labels, std::move(cells));
}

InstanceMatrix build_G(const InstanceMatrix& S, const std::vector<Rational>& b, const std::vector<Rational>& c,
                       const Integer& N) {
  const std::size_t n = S.rows();
  if (S.cols() != n) throw Error(ErrorCode::dimension_mismatch, "S must be square");
  if (b.size() != n || c.size() != n) {
    throw Error(ErrorCode::dimension_mismatch, "b and c must have " + std::to_string(n) + " entries");
  }
  if (sgn(N) <= 0) throw Error(ErrorCode::precondition, "N must be positive");

  std::vector<std::string> rows = S.row_labels();
  std::vector<std::string> cols = S.col_labels();
  for (const char* l : {"g1", "g2", "g3"}) {
    rows.emplace_back(l);
    cols.emplace_back(l);
  }
  using Cell = InstanceMatrix::Cell;
  std::vector<Cell> cells(S.cells().begin(), S.cells().end());
  auto idx = [](std::size_t v) { return static_cast<std::uint32_t>(v); };
  const Rational NN(N);
  for (std::size_t i = 0; i < n; ++i) {
    cells.push_back({idx(i), idx(n), b[i]});
    cells.push_back({idx(n), idx(i), c[i]});
  }
  for (auto [r, col] : {std::pair{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {2, 0}, {2, 2}}) {
    cells.push_back({idx(n + r), idx(n + col), NN});
  }
  return InstanceMatrix(std::move(rows), std::move(cols), std::move(cells));
}

ReductionOutput reduce(const Polynomial& f, const BOptions& options) {
  if (f.is_zero()) throw Error(ErrorCode::zero_polynomial, "cannot reduce the zero polynomial");
  ReductionOutput out;
  const SigmaSet sigma = sigma_set(f);
  out.sigma_size = sigma.size();
  out.B = build_B(f, options);
  out.h_size = out.B.rows();
  out.k = out.B.count(EntryKind::unknown);
  out.K = compute_K(f);
  out.M = build_M(out.B, Rational(out.K));
  out.r = 2 * out.k + 3;

  out.trace.push_back("f=" + f.compact_string());
  out.trace.push_back("length=" + std::to_string(length_of(f)));
  out.trace.push_back("sigma=" + std::to_string(out.sigma_size));
  out.trace.push_back("H=" + std::to_string(out.h_size));
  out.trace.push_back("B.known=" + std::to_string(out.B.count(EntryKind::known)) + " B.unknown=" + std::to_string(out.k));
  out.trace.push_back("K=" + out.K.get_str());
  out.trace.push_back("M.dim=" + std::to_string(out.M.rows()) + " M.nonzeros=" + std::to_string(out.M.cells().size()));
  out.trace.push_back("r=" + std::to_string(out.r));
  return out;
}

}  // namespace psdrank
