#include "psdrank/gadgets.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "psdrank/error.hpp"

namespace psdrank {

std::size_t SigmaSet::index_of(const Polynomial& p) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), p);
  if (it != elements.end() && *it == p) return static_cast<std::size_t>(it - elements.begin());
  return elements.size();
}

SigmaSet sigma_set(const Polynomial& f) {
  std::vector<Polynomial> out{Polynomial()};
  auto add_signed = [&](const Polynomial& p) {
    out.push_back(p);
    out.push_back(-p);
  };
  Polynomial partial;
  for (const Monomial& term : f.terms()) {
    add_signed(Polynomial::constant(1));
    Polynomial prefix = Polynomial::constant(1);
    for (const VarId& v : term.vars) {
      prefix = prefix * Polynomial::variable(v);
      add_signed(prefix);
    }
    partial = partial + Polynomial::monomial(term);
    add_signed(partial);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return {std::move(out)};
}

std::string LabelVector::to_string() const {
  return "(" + coords[0].compact_string() + "," + coords[1].compact_string() + "," + coords[2].compact_string() + ")";
}

LabelVector parse_label(std::string_view text, const SigmaSet& sigma) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') {
    throw Error(ErrorCode::parse, "label '" + std::string(text) + "' is not a parenthesized triple");
  }
  std::string_view body = text.substr(1, text.size() - 2);
  LabelVector label;
  std::size_t slot = 0;
  while (true) {
    std::size_t comma = body.find(',');
    std::string_view part = body.substr(0, comma);
    if (slot == 3) throw Error(ErrorCode::parse, "label '" + std::string(text) + "' has more than 3 coordinates");
    Polynomial p = parse_polynomial(part);
    std::size_t idx = sigma.index_of(p);
    if (idx == sigma.size()) {
      throw Error(ErrorCode::parse, "coordinate '" + std::string(part) + "' of label is not in sigma");
    }
    label.coords[slot] = std::move(p);
    label.index[slot] = static_cast<std::uint32_t>(idx);
    ++slot;
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  if (slot != 3) throw Error(ErrorCode::parse, "label '" + std::string(text) + "' has fewer than 3 coordinates");
  return label;
}

std::vector<LabelVector> index_set_H(const SigmaSet& sigma) {
  const std::size_t n = sigma.size();
  const std::size_t one = sigma.index_of(Polynomial::constant(1));
  std::vector<LabelVector> out;
  if (one == n) return out;
  out.reserve(n * n * n - (n - 1) * (n - 1) * (n - 1));
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = 0; b < n; ++b) {
      for (std::uint32_t c = 0; c < n; ++c) {
        if (a != one && b != one && c != one) continue;
        out.push_back({{sigma.elements[a], sigma.elements[b], sigma.elements[c]}, {a, b, c}});
      }
    }
  }
  return out;
}

Polynomial dot(const LabelVector& u, const LabelVector& v) {
  return u.coords[0] * v.coords[0] + u.coords[1] * v.coords[1] + u.coords[2] * v.coords[2];
}

namespace {

// Dot products of labels via a sigma x sigma product table.
class DotTable {
 public:
  explicit DotTable(const SigmaSet& sigma) : n_(sigma.size()), products_(n_ * n_) {
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t b = a; b < n_; ++b) {
        products_[a * n_ + b] = sigma.elements[a] * sigma.elements[b];
        products_[b * n_ + a] = products_[a * n_ + b];
      }
    }
  }

  Polynomial dot(const LabelVector& u, const LabelVector& v) const {
    return product(u.index[0], v.index[0]) + product(u.index[1], v.index[1]) + product(u.index[2], v.index[2]);
  }

 private:
  const Polynomial& product(std::size_t a, std::size_t b) const { return products_[a * n_ + b]; }
  std::size_t n_;
  std::vector<Polynomial> products_;
};

std::vector<std::string> label_strings(const std::vector<LabelVector>& labels) {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(l.to_string());
  return out;
}

}  // namespace

SymbolicMatrix build_A(const Polynomial& f) {
  SigmaSet sigma = sigma_set(f);
  SymbolicMatrix a{index_set_H(sigma), {}};
  DotTable table(sigma);
  const std::size_t n = a.size();
  a.entries.resize(n * n);
  std::map<Polynomial, Polynomial> squares;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Polynomial d = table.dot(a.labels[i], a.labels[j]);
      auto it = squares.find(d);
      if (it == squares.end()) it = squares.emplace(d, d * d).first;
      a.entries[i * n + j] = it->second;
      a.entries[j * n + i] = it->second;
    }
  }
  return a;
}

void write_symbolic_matrix(std::ostream& out, const SymbolicMatrix& a) {
  std::vector<std::string> names = label_strings(a.labels);
  out << "psdrank-symbolic v1 " << a.size() << ' ' << a.size() << '\n';
  for (const auto& l : names) out << "row " << l << '\n';
  for (const auto& l : names) out << "col " << l << '\n';
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a.at(i, j).is_zero()) continue;
      out << names[i] << ' ' << names[j] << ' ' << a.at(i, j).compact_string() << '\n';
    }
  }
}

IncompleteMatrix build_B(const Polynomial& f, const BOptions& options) {
  if (f.is_zero()) throw Error(ErrorCode::zero_polynomial, "B is undefined for the zero polynomial");
  SigmaSet sigma = sigma_set(f);
  std::vector<LabelVector> H = index_set_H(sigma);
  DotTable table(sigma);
  std::vector<std::string> names = label_strings(H);
  IncompleteMatrix B(names, names);

  std::map<Polynomial, MatrixEntry> classified;
  auto classify = [&](const Polynomial& d) -> const MatrixEntry& {
    auto it = classified.find(d);
    if (it != classified.end()) return it->second;
    MatrixEntry e = MatrixEntry::unknown();
    if (d.is_constant() || d.is_zero()) {
      const std::int64_t c = d.is_zero() ? 0 : d.constant_value();
      e = MatrixEntry::known(Rational(Integer(c) * Integer(c)));
    } else if (options.zero_test_on_square ? is_multiple_of(d * d, f) : is_multiple_of(d, f)) {
      e = MatrixEntry::known(0);
    }
    return classified.emplace(d, std::move(e)).first->second;
  };

  for (std::size_t i = 0; i < H.size(); ++i) {
    for (std::size_t j = i; j < H.size(); ++j) {
      const MatrixEntry& e = classify(table.dot(H[i], H[j]));
      B.set(i, j, e);
      B.set(j, i, e);
    }
  }
  return B;
}

IncompleteMatrix build_C(const IncompleteMatrix& B) {
  IncompleteMatrix C(B.row_labels(), B.col_labels());
  for (std::size_t i = 0; i < B.rows(); ++i) {
    for (std::size_t j = 0; j < B.cols(); ++j) {
      const MatrixEntry& e = B.at(i, j);
      if (!e.is_known()) {
        C.set(i, j, MatrixEntry::unknown());
      } else if (sgn(e.value) != 0) {
        C.set(i, j, MatrixEntry::nonzero_unknown());
      }
    }
  }
  return C;
}

IncompleteMatrix build_C(const Polynomial& f, const BOptions& options) { return build_C(build_B(f, options)); }

}  // namespace psdrank
