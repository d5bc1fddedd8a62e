#include "psdrank/witness.hpp"

#include <cmath>

#include "psdrank/error.hpp"
#include "psdrank/instance.hpp"

namespace psdrank {

namespace {

template <class T>
bool is_zero(const T& x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return sgn(x) == 0;
  } else {
    return x == 0.0;
  }
}

template <class T>
T from_rational(const Rational& x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return x;
  } else {
    return to_double(x);
  }
}

template <class T>
GramVector<T> dense_gram(const std::vector<T>& x, std::uint32_t offset = 0) {
  GramVector<T> g;
  for (std::size_t c = 0; c < x.size(); ++c) {
    if (!is_zero(x[c])) g.coords.emplace_back(static_cast<std::uint32_t>(offset + c), x[c]);
  }
  return g;
}

template <class T>
GramVector<T> unit(std::uint32_t c, T weight = T(1)) {
  return {weight, {{c, T(1)}}};
}

// Gram vectors of scale * P(alpha) on coordinates c1 < c2:
// rows (1,1), e1, e2 with weight `scale`; columns (1,b) + sqrt(1-b^2) e2, e1, e2.
template <class T>
void append_p_alpha(std::vector<GramVector<T>>& row_top, std::vector<GramVector<T>>& row_mid,
                    std::vector<GramVector<T>>& row_bot, std::vector<GramVector<T>>& col_left,
                    std::vector<GramVector<T>>& col_mid, std::vector<GramVector<T>>& col_right, const T& alpha,
                    const T& scale, std::uint32_t c1, std::uint32_t c2) {
  const T b = (alpha - T(2)) / T(2);
  const T rest = T(1) - b * b;
  row_top.push_back({scale, {{c1, T(1)}, {c2, T(1)}}});
  row_mid.push_back(unit(c1, scale));
  row_bot.push_back(unit(c2, scale));
  GramVector<T> left{T(1), {{c1, T(1)}}};
  if (!is_zero(b)) left.coords.emplace_back(c2, b);
  col_left.push_back(std::move(left));
  if (!is_zero(rest)) col_left.push_back(unit(c2, rest));
  col_mid.push_back(unit<T>(c1));
  col_right.push_back(unit<T>(c2));
}

std::vector<std::string> numbered(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i + 1));
  return out;
}

}  // namespace

ExactFactorization p_alpha_factorization(const Rational& alpha) {
  if (sgn(alpha) < 0 || alpha > 4) {
    throw Error(ErrorCode::out_of_range, "alpha = " + to_string(alpha) + " is outside [0, 4]");
  }
  ExactFactorization F{2, numbered(3), numbered(3), std::vector<std::vector<GramVector<Rational>>>(3),
                       std::vector<std::vector<GramVector<Rational>>>(3)};
  append_p_alpha<Rational>(F.rows[0], F.rows[1], F.rows[2], F.cols[0], F.cols[1], F.cols[2], alpha, Rational(1), 0, 1);
  return F;
}

template <class T>
Factorization<T> hadamard_square_factorization(const std::vector<std::vector<T>>& P_rows,
                                               const std::vector<std::vector<T>>& Q_columns) {
  std::size_t d = !P_rows.empty() ? P_rows.front().size() : (!Q_columns.empty() ? Q_columns.front().size() : 0);
  for (const auto& p : P_rows) {
    if (p.size() != d) throw Error(ErrorCode::dimension_mismatch, "rows of P have different lengths");
  }
  for (const auto& q : Q_columns) {
    if (q.size() != d) throw Error(ErrorCode::dimension_mismatch, "columns of Q do not match the rows of P");
  }
  Factorization<T> F{d, numbered(P_rows.size()), numbered(Q_columns.size()), {}, {}};
  for (const auto& p : P_rows) F.rows.push_back({dense_gram(p)});
  for (const auto& q : Q_columns) F.cols.push_back({dense_gram(q)});
  return F;
}

InstanceMatrix hadamard_square_target(const std::vector<std::vector<Rational>>& P_rows,
                                      const std::vector<std::vector<Rational>>& Q_columns) {
  std::vector<std::vector<Rational>> values(P_rows.size(), std::vector<Rational>(Q_columns.size()));
  for (std::size_t i = 0; i < P_rows.size(); ++i) {
    for (std::size_t j = 0; j < Q_columns.size(); ++j) {
      if (P_rows[i].size() != Q_columns[j].size()) throw Error(ErrorCode::dimension_mismatch, "inner dimensions differ");
      Rational d = 0;
      for (std::size_t t = 0; t < P_rows[i].size(); ++t) d += P_rows[i][t] * Q_columns[j][t];
      values[i][j] = d * d;
    }
  }
  return InstanceMatrix::from_dense(values);
}

template <class T>
Factorization<T> direct_sum(const Factorization<T>& F1, const Factorization<T>& F2) {
  require_same_labels(F1.row_labels, F2.row_labels, "row");
  require_same_labels(F1.col_labels, F2.col_labels, "column");
  Factorization<T> out = F1;
  out.k = F1.k + F2.k;
  const auto shift = static_cast<std::uint32_t>(F1.k);
  auto merge = [&](std::vector<std::vector<GramVector<T>>>& dst, const std::vector<std::vector<GramVector<T>>>& src) {
    for (std::size_t i = 0; i < src.size(); ++i) {
      for (GramVector<T> g : src[i]) {
        for (auto& c : g.coords) c.first += shift;
        dst[i].push_back(std::move(g));
      }
    }
  };
  merge(out.rows, F2.rows);
  merge(out.cols, F2.cols);
  return out;
}

namespace {

template <class T, class Point>
Completion<T> completion_impl(const Polynomial& f, const Point& xi) {
  if (f.is_zero()) throw Error(ErrorCode::zero_polynomial, "f is the zero polynomial");
  for (const VarId& v : f.variables()) {
    auto it = xi.find(v);
    if (it == xi.end()) throw Error(ErrorCode::missing_binding, "no value for " + v.name());
    if (it->second > T(1) || it->second < T(-1)) {
      throw Error(ErrorCode::out_of_range, v.name() + " lies outside the cube [-1, 1]");
    }
  }
  const T fx = evaluate(f, xi);
  if constexpr (std::is_same_v<T, Rational>) {
    if (sgn(fx) != 0) throw Error(ErrorCode::unsatisfied, "f(xi) = " + to_string(fx) + " is not zero");
  } else {
    if (!(std::fabs(fx) <= 1e-12)) throw Error(ErrorCode::unsatisfied, "|f(xi)| = " + std::to_string(std::fabs(fx)) + " exceeds 1e-12");
  }

  const SigmaSet sigma = sigma_set(f);
  std::vector<T> sigma_values;
  for (const Polynomial& s : sigma.elements) sigma_values.push_back(evaluate(s, xi));
  const std::vector<LabelVector> H = index_set_H(sigma);

  Completion<T> out;
  const std::size_t n = H.size();
  for (const LabelVector& u : H) {
    out.labels.push_back(u.to_string());
    out.p.push_back({sigma_values[u.index[0]], sigma_values[u.index[1]], sigma_values[u.index[2]]});
  }
  out.values.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& a = out.p[i];
      const auto& b = out.p[j];
      T d = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
      T v = d * d;
      if (v > out.max_entry) out.max_entry = v;
      out.values[i * n + j] = std::move(v);
    }
  }
  out.factorization.k = 3;
  out.factorization.row_labels = out.labels;
  out.factorization.col_labels = out.labels;
  for (const auto& a : out.p) {
    GramVector<T> g = dense_gram(std::vector<T>(a.begin(), a.end()));
    out.factorization.rows.push_back({g});
    out.factorization.cols.push_back({std::move(g)});
  }
  return out;
}

}  // namespace

Completion<Rational> completion_from_root(const Polynomial& f, const ExactPoint& xi) {
  return completion_impl<Rational>(f, xi);
}

Completion<double> completion_from_root(const Polynomial& f, const FloatPoint& xi) {
  return completion_impl<double>(f, xi);
}

InstanceMatrix to_instance(const Completion<Rational>& c) {
  const std::size_t n = c.labels.size();
  std::vector<InstanceMatrix::Cell> cells;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(c.at(i, j)) != 0) cells.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), c.at(i, j)});
    }
  }
  return InstanceMatrix(c.labels, c.labels, std::move(cells));
}

template <class T>
Factorization<T> assemble_instance_witness(const IncompleteMatrix& S, const Completion<T>& completion,
                                           const Rational& K) {
  if (S.rows() != S.cols()) throw Error(ErrorCode::dimension_mismatch, "S must be square");
  require_same_labels(S.row_labels(), completion.labels, "completion");
  if (sgn(K) <= 0) throw Error(ErrorCode::precondition, "K must be positive");
  const T K_t = from_rational<T>(K);
  const std::size_t n = S.rows();

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const MatrixEntry& e = S.at(i, j);
      if (!e.is_known()) continue;
      bool agrees;
      if constexpr (std::is_same_v<T, Rational>) {
        agrees = completion.at(i, j) == e.value;
      } else {
        agrees = std::fabs(completion.at(i, j) - to_double(e.value)) <= 1e-9 * std::max(1.0, K_t);
      }
      if (!agrees) {
        throw Error(ErrorCode::precondition, "completion disagrees with the known entry (" + S.row_labels()[i] + ", " +
                                                 S.col_labels()[j] + ")");
      }
    }
  }

  const auto E = unknown_positions(S);
  const std::size_t k = E.size();
  Factorization<T> F;
  F.k = 2 * k + 3;
  for (std::size_t e = 0; e < k; ++e) F.row_labels.push_back(e1_label(e + 1));
  for (std::size_t e = 0; e < k; ++e) F.row_labels.push_back(e2_label(e + 1));
  F.row_labels.insert(F.row_labels.end(), S.row_labels().begin(), S.row_labels().end());
  F.col_labels = F.row_labels;
  F.rows.resize(2 * k + n);
  F.cols.resize(2 * k + n);

  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = completion.p[i];
    GramVector<T> g = dense_gram(std::vector<T>(p.begin(), p.end()));
    F.rows[2 * k + i].push_back(g);
    F.cols[2 * k + i].push_back(std::move(g));
  }
  for (std::size_t e = 0; e < k; ++e) {
    const auto [i, j] = E[e];
    const T& value = completion.at(i, j);
    if (value > K_t) {
      throw Error(ErrorCode::precondition, "completion entry (" + S.row_labels()[i] + ", " + S.col_labels()[j] +
                                               ") exceeds K");
    }
    const T alpha = (K_t - value) / K_t;
    const auto c1 = static_cast<std::uint32_t>(3 + 2 * e);
    append_p_alpha<T>(F.rows[2 * k + i], F.rows[e], F.rows[k + e], F.cols[2 * k + j], F.cols[e], F.cols[k + e], alpha,
                      K_t, c1, c1 + 1);
  }
  return F;
}

Factorization<Rational> assemble_instance_witness(const Polynomial& f, const ExactPoint& xi, const BOptions& options) {
  return assemble_instance_witness(build_B(f, options), completion_from_root(f, xi), Rational(compute_K(f)));
}

Factorization<double> assemble_instance_witness(const Polynomial& f, const FloatPoint& xi, const BOptions& options) {
  return assemble_instance_witness(build_B(f, options), completion_from_root(f, xi), Rational(compute_K(f)));
}

template Factorization<Rational> hadamard_square_factorization(const std::vector<std::vector<Rational>>&,
                                                               const std::vector<std::vector<Rational>>&);
template Factorization<double> hadamard_square_factorization(const std::vector<std::vector<double>>&,
                                                             const std::vector<std::vector<double>>&);
template Factorization<Rational> direct_sum(const Factorization<Rational>&, const Factorization<Rational>&);
template Factorization<double> direct_sum(const Factorization<double>&, const Factorization<double>&);
template Factorization<Rational> assemble_instance_witness(const IncompleteMatrix&, const Completion<Rational>&,
                                                           const Rational&);
template Factorization<double> assemble_instance_witness(const IncompleteMatrix&, const Completion<double>&,
                                                         const Rational&);

}  // namespace psdrank
