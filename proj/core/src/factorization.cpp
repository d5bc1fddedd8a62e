#include "psdrank/factorization.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "psdrank/error.hpp"

namespace psdrank {

namespace {

template <class T>
bool negative(const T& x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return sgn(x) < 0;
  } else {
    return x < 0;
  }
}

template <class T>
void validate_side(const std::vector<std::vector<GramVector<T>>>& side, const std::vector<std::string>& labels,
                   std::size_t k, const char* what) {
  if (side.size() != labels.size()) {
    throw Error(ErrorCode::dimension_mismatch, std::string(what) + " count does not match the label count");
  }
  for (std::size_t i = 0; i < side.size(); ++i) {
    if (side[i].size() > k) {
      throw Error(ErrorCode::dimension_mismatch, std::string(what) + " " + labels[i] + " has " +
                                                     std::to_string(side[i].size()) + " Gram vectors, more than k=" +
                                                     std::to_string(k));
    }
    for (const auto& g : side[i]) {
      if (negative(g.weight)) throw Error(ErrorCode::precondition, "negative Gram weight at " + labels[i]);
      for (std::size_t c = 0; c < g.coords.size(); ++c) {
        if (g.coords[c].first >= k) {
          throw Error(ErrorCode::dimension_mismatch, "Gram coordinate " + std::to_string(g.coords[c].first) +
                                                         " is outside [0, k) at " + labels[i]);
        }
        if (c > 0 && g.coords[c - 1].first >= g.coords[c].first) {
          throw Error(ErrorCode::precondition, "Gram coordinates are not strictly increasing at " + labels[i]);
        }
      }
    }
  }
}

template <class T>
T sparse_dot(const GramVector<T>& a, const GramVector<T>& b) {
  T sum = T(0);
  auto ia = a.coords.begin();
  auto ib = b.coords.begin();
  while (ia != a.coords.end() && ib != b.coords.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

template <class T>
T abs_value(const T& x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return abs(x);
  } else {
    return std::fabs(x);
  }
}

}  // namespace

template <class T>
void Factorization<T>::validate() const {
  validate_side(rows, row_labels, k, "row");
  validate_side(cols, col_labels, k, "column");
}

template <class T>
T trace_product(const std::vector<GramVector<T>>& row, const std::vector<GramVector<T>>& col) {
  T total = T(0);
  if (row.empty() || col.empty()) return total;
  if (row.size() * col.size() <= 16) {
    for (const auto& a : row) {
      for (const auto& b : col) {
        T d = sparse_dot(a, b);
        if (d == T(0)) continue;
        total += a.weight * b.weight * d * d;
      }
    }
    return total;
  }
  // Long lists (completion gadgets) are mostly coordinate-disjoint; join on
  // coordinates so only overlapping pairs are touched.
  struct Slot {
    std::uint32_t coord;
    std::uint32_t vec;
    const T* value;
  };
  std::vector<Slot> index;
  for (std::uint32_t b = 0; b < col.size(); ++b) {
    for (const auto& [c, x] : col[b].coords) index.push_back({c, b, &x});
  }
  std::sort(index.begin(), index.end(), [](const Slot& x, const Slot& y) { return std::tie(x.coord, x.vec) < std::tie(y.coord, y.vec); });
  std::vector<T> acc(col.size(), T(0));
  std::vector<std::uint32_t> touched;
  for (const auto& a : row) {
    for (const auto& [c, x] : a.coords) {
      auto lo = std::lower_bound(index.begin(), index.end(), c, [](const Slot& s, std::uint32_t v) { return s.coord < v; });
      for (auto it = lo; it != index.end() && it->coord == c; ++it) {
        if (acc[it->vec] == T(0)) touched.push_back(it->vec);
        acc[it->vec] += x * *it->value;
      }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (std::uint32_t b : touched) {
      const T& d = acc[b];
      total += a.weight * col[b].weight * d * d;
      acc[b] = T(0);
    }
    touched.clear();
  }
  return total;
}

template <class T>
T Factorization<T>::entry(std::size_t i, std::size_t j) const {
  return trace_product(rows[i], cols[j]);
}

FloatFactorization to_float(const ExactFactorization& f) {
  FloatFactorization out{f.k, f.row_labels, f.col_labels, {}, {}};
  auto convert = [](const std::vector<std::vector<GramVector<Rational>>>& side) {
    std::vector<std::vector<GramVector<double>>> result(side.size());
    for (std::size_t i = 0; i < side.size(); ++i) {
      for (const auto& g : side[i]) {
        GramVector<double> h;
        h.weight = to_double(g.weight);
        for (const auto& [c, x] : g.coords) h.coords.emplace_back(c, to_double(x));
        result[i].push_back(std::move(h));
      }
    }
    return result;
  };
  out.rows = convert(f.rows);
  out.cols = convert(f.cols);
  return out;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void require_same_labels(const std::vector<std::string>& a, const std::vector<std::string>& b, const char* what) {
  if (a != b) throw Error(ErrorCode::label_mismatch, std::string(what) + " labels differ");
}

namespace {

std::vector<std::size_t> match_labels(const std::vector<std::string>& factor_labels, const InstanceMatrix& A,
                                      bool rows) {
  const std::size_t expected = rows ? A.rows() : A.cols();
  const char* what = rows ? "row" : "column";
  if (factor_labels.size() != expected) {
    throw Error(ErrorCode::label_mismatch, std::string("factorization has ") + std::to_string(factor_labels.size()) +
                                               " " + what + " labels, the matrix " + std::to_string(expected));
  }
  // map matrix index -> factorization index
  std::vector<std::size_t> map(expected);
  for (std::size_t f = 0; f < factor_labels.size(); ++f) {
    auto idx = rows ? A.row_index(factor_labels[f]) : A.col_index(factor_labels[f]);
    if (!idx) throw Error(ErrorCode::label_mismatch, std::string(what) + " label '" + factor_labels[f] + "' is not in the matrix");
    map[*idx] = f;
  }
  return map;
}

}  // namespace

template <class T>
VerificationReport verify_factorization(const InstanceMatrix& A, const Factorization<T>& F,
                                        const VerifyOptions& options) {
  F.validate();
  const auto row_map = match_labels(F.row_labels, A, true);
  const auto col_map = match_labels(F.col_labels, A, false);

  VerificationReport report;
  report.mode = options.mode;
  report.exact = std::is_same_v<T, Rational>;
  report.seed = options.seed;
  report.samples = options.mode == VerifyMode::sampled ? options.samples : 0;

  T worst = T(0);
  bool first = true;
  auto check = [&](std::size_t i, std::size_t j) {
    T target;
    if constexpr (std::is_same_v<T, Rational>) {
      target = A.at(i, j);
    } else {
      target = to_double(A.at(i, j));
    }
    T residual = abs_value(T(F.entry(row_map[i], col_map[j]) - target));
    ++report.checked;
    if (first || residual > worst) {
      worst = residual;
      report.worst_row = i;
      report.worst_col = j;
      first = false;
    }
  };

  if (A.rows() > 0 && A.cols() > 0) {
    if (options.mode == VerifyMode::full) {
      for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) check(i, j);
      }
    } else {
      SplitMix64 rng(options.seed);
      for (std::uint64_t s = 0; s < options.samples; ++s) {
        const std::size_t i = rng.next() % A.rows();
        const std::size_t j = rng.next() % A.cols();
        check(i, j);
      }
    }
  }

  if constexpr (std::is_same_v<T, Rational>) {
    report.max_residual_exact = worst;
    report.max_residual = to_double(worst);
    report.pass = worst <= Rational(options.tol);
  } else {
    report.max_residual = worst;
    report.pass = worst <= options.tol;
  }
  return report;
}

VerificationReport verify_factorization(const InstanceMatrix& A, const AnyFactorization& F,
                                        const VerifyOptions& options) {
  return std::visit([&](const auto& f) { return verify_factorization(A, f, options); }, F);
}

namespace {

std::string format_number(const Rational& x) { return to_fraction_string(x); }

std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <class T>
T parse_number(std::string_view text) {
  if constexpr (std::is_same_v<T, Rational>) {
    return parse_rational(text);
  } else {
    double x = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), x);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      throw Error(ErrorCode::parse, "malformed number '" + std::string(text) + "'");
    }
    return x;
  }
}

template <class T>
void write_side(std::ostream& out, const char* keyword, const std::vector<std::string>& labels,
                const std::vector<std::vector<GramVector<T>>>& side) {
  for (std::size_t i = 0; i < side.size(); ++i) {
    out << keyword << ' ' << labels[i] << ' ' << side[i].size();
    for (const auto& g : side[i]) {
      out << ' ' << format_number(g.weight) << '|';
      for (std::size_t c = 0; c < g.coords.size(); ++c) {
        if (c) out << ',';
        out << g.coords[c].first << ':' << format_number(g.coords[c].second);
      }
    }
    out << '\n';
  }
}

template <class T>
GramVector<T> parse_gram(std::string_view token) {
  GramVector<T> g;
  const std::size_t bar = token.find('|');
  if (bar == std::string_view::npos) throw Error(ErrorCode::parse, "Gram vector '" + std::string(token) + "' lacks '|'");
  g.weight = parse_number<T>(token.substr(0, bar));
  std::string_view rest = token.substr(bar + 1);
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    std::string_view part = rest.substr(0, comma);
    const std::size_t colon = part.find(':');
    if (colon == std::string_view::npos) throw Error(ErrorCode::parse, "coordinate '" + std::string(part) + "' lacks ':'");
    std::uint32_t c = 0;
    auto res = std::from_chars(part.data(), part.data() + colon, c);
    if (res.ec != std::errc() || res.ptr != part.data() + colon) {
      throw Error(ErrorCode::parse, "malformed coordinate index in '" + std::string(part) + "'");
    }
    g.coords.emplace_back(c, parse_number<T>(part.substr(colon + 1)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return g;
}

template <class T>
Factorization<T> read_body(std::istream& in, std::size_t k, std::size_t nrows, std::size_t ncols) {
  Factorization<T> F;
  F.k = k;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    std::string keyword, label;
    std::size_t count = 0;
    if (!(ls >> keyword >> label >> count) || (keyword != "row" && keyword != "col")) {
      throw Error(ErrorCode::parse, "expected 'row|col <label> <count> ...' but got '" + line + "'");
    }
    std::vector<GramVector<T>> vecs;
    for (std::size_t t = 0; t < count; ++t) {
      std::string token;
      if (!(ls >> token)) throw Error(ErrorCode::parse, "line for '" + label + "' has fewer Gram vectors than announced");
      vecs.push_back(parse_gram<T>(token));
    }
    if (std::string extra; ls >> extra) throw Error(ErrorCode::parse, "trailing data on line for '" + label + "'");
    if (keyword == "row") {
      F.row_labels.push_back(label);
      F.rows.push_back(std::move(vecs));
    } else {
      F.col_labels.push_back(label);
      F.cols.push_back(std::move(vecs));
    }
  }
  if (F.rows.size() != nrows || F.cols.size() != ncols) {
    throw Error(ErrorCode::parse, "factorization file lists " + std::to_string(F.rows.size()) + " rows and " +
                                      std::to_string(F.cols.size()) + " columns; the header says " +
                                      std::to_string(nrows) + " and " + std::to_string(ncols));
  }
  F.validate();
  return F;
}

}  // namespace

template <class T>
void write_factorization(std::ostream& out, const Factorization<T>& F) {
  out << "psdrank-factorization v1 " << F.k << ' ' << F.rows.size() << ' ' << F.cols.size() << ' '
      << (std::is_same_v<T, Rational> ? "exact" : "float") << '\n';
  write_side(out, "row", F.row_labels, F.rows);
  write_side(out, "col", F.col_labels, F.cols);
}

void write_factorization(std::ostream& out, const AnyFactorization& F) {
  std::visit([&](const auto& f) { write_factorization(out, f); }, F);
}

AnyFactorization read_factorization(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() != '#') break;
  }
  std::istringstream hs(line);
  std::string magic, version, mode;
  std::size_t k = 0, nrows = 0, ncols = 0;
  if (!(hs >> magic >> version >> k >> nrows >> ncols >> mode) || magic != "psdrank-factorization" || version != "v1") {
    throw Error(ErrorCode::parse, "expected 'psdrank-factorization v1 <k> <nrows> <ncols> <exact|float>'");
  }
  if (mode == "exact") return read_body<Rational>(in, k, nrows, ncols);
  if (mode == "float") return read_body<double>(in, k, nrows, ncols);
  throw Error(ErrorCode::parse, "unknown factorization mode '" + mode + "'");
}

template struct Factorization<Rational>;
template struct Factorization<double>;
template Rational trace_product(const std::vector<GramVector<Rational>>&, const std::vector<GramVector<Rational>>&);
template double trace_product(const std::vector<GramVector<double>>&, const std::vector<GramVector<double>>&);
template VerificationReport verify_factorization(const InstanceMatrix&, const Factorization<Rational>&,
                                                 const VerifyOptions&);
template VerificationReport verify_factorization(const InstanceMatrix&, const Factorization<double>&,
                                                 const VerifyOptions&);
template void write_factorization(std::ostream&, const Factorization<Rational>&);
template void write_factorization(std::ostream&, const Factorization<double>&);

}  // namespace psdrank
