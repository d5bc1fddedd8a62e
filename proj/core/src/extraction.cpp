#include "psdrank/extraction.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>

#include "psdrank/error.hpp"
#include "psdrank/gadgets.hpp"

namespace psdrank {

namespace {

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  // First index set in both, or npos.
  static std::size_t first_common(const Bits& a, const Bits& b) {
    for (std::size_t w = 0; w < a.words_.size(); ++w) {
      if (std::uint64_t x = a.words_[w] & b.words_[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(x));
    }
    return npos;
  }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::uint64_t> words_;
};

// Per column, searches row pairs (i1, i2) with known zeros in that column
// and a 1/0 crossing elsewhere; returns false on the first column without one.
bool find_patterns(const IncompleteMatrix& S, std::vector<SqrtPattern>& out, std::size_t& failed) {
  const std::size_t n = S.rows();
  const std::size_t m = S.cols();
  std::vector<Bits> one(n, Bits(m)), zero(n, Bits(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const MatrixEntry& e = S.at(i, j);
      if (e.is_known(0)) zero[i].set(j);
      if (e.is_known(1)) one[i].set(j);
    }
  }
  // pair cache: 0 unknown, 1 good, 2 bad; good pairs keep their j1, j2
  std::vector<std::uint8_t> state(n * n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> cols_of(n * n);
  auto good = [&](std::size_t a, std::size_t b) {
    std::uint8_t& s = state[a * n + b];
    if (s == 0) {
      std::size_t j1 = Bits::first_common(one[a], zero[b]);
      std::size_t j2 = j1 == Bits::npos ? Bits::npos : Bits::first_common(zero[a], one[b]);
      s = j2 == Bits::npos ? 2 : 1;
      cols_of[a * n + b] = {j1, j2};
    }
    return s == 1;
  };

  out.clear();
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (S.at(i, k).is_known(0)) rows.push_back(i);
    }
    bool found = false;
    for (std::size_t x = 0; x < rows.size() && !found; ++x) {
      for (std::size_t y = 0; y < rows.size() && !found; ++y) {
        if (x == y || !good(rows[x], rows[y])) continue;
        auto [j1, j2] = cols_of[rows[x] * n + rows[y]];
        out.push_back({k, rows[x], rows[y], j1, j2});
        found = true;
      }
    }
    if (!found) {
      failed = k;
      return false;
    }
  }
  return true;
}

}  // namespace

SqrtCheckResult sqrt_condition_check(const IncompleteMatrix& S) {
  SqrtCheckResult result;
  SqrtWitness witness;
  if (!find_patterns(S, witness.columns, result.failed_column)) return result;
  if (!find_patterns(S.transpose(), witness.transposed, result.failed_column)) {
    result.failed_on_transpose = true;
    return result;
  }
  result.holds = true;
  result.witness = std::move(witness);
  return result;
}

double RankOneFactors::q(std::size_t i, std::size_t j) const {
  double s = 0;
  for (std::size_t t = 0; t < k; ++t) s += a[i][t] * b[j][t];
  return s;
}

namespace {

template <class T>
std::vector<double> dominant_direction(const std::vector<GramVector<T>>& grams, std::size_t k, double tol,
                                       const std::string& label) {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (const auto& g : grams) {
    double w;
    if constexpr (std::is_same_v<T, Rational>) {
      w = to_double(g.weight);
    } else {
      w = g.weight;
    }
    for (const auto& [c1, x1] : g.coords) {
      for (const auto& [c2, x2] : g.coords) {
        double v1, v2;
        if constexpr (std::is_same_v<T, Rational>) {
          v1 = to_double(x1);
          v2 = to_double(x2);
        } else {
          v1 = x1;
          v2 = x2;
        }
        G(c1, c2) += w * v1 * v2;
      }
    }
  }
  std::vector<double> out(k, 0.0);
  if (k == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
  const auto& vals = eig.eigenvalues();
  const double top = std::max(vals(vals.size() - 1), 0.0);
  if (vals.size() >= 2 && vals(vals.size() - 2) > tol * std::max(1.0, top)) {
    std::ostringstream msg;
    msg << "Gram block of " << label << " has numerical rank >= 2 (second eigenvalue " << vals(vals.size() - 2) << ")";
    throw Error(ErrorCode::rank_deficient, msg.str());
  }
  Eigen::VectorXd v = eig.eigenvectors().col(vals.size() - 1) * std::sqrt(top);
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0) v = -v;
  for (std::size_t t = 0; t < k; ++t) out[t] = v(static_cast<Eigen::Index>(t));
  return out;
}

}  // namespace

template <class T>
RankOneFactors hadamard_sqrt_from_rank1(const Factorization<T>& F, double tol) {
  F.validate();
  RankOneFactors out;
  out.k = F.k;
  for (std::size_t i = 0; i < F.rows.size(); ++i) out.a.push_back(dominant_direction(F.rows[i], F.k, tol, F.row_labels[i]));
  for (std::size_t j = 0; j < F.cols.size(); ++j) out.b.push_back(dominant_direction(F.cols[j], F.k, tol, F.col_labels[j]));
  return out;
}

namespace {

using Vec3 = Eigen::Vector3d;

Vec3 to_vec(const std::array<double, 3>& x) { return {x[0], x[1], x[2]}; }

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

}  // namespace

ExtractionResult extract_root(const Polynomial& f, const std::vector<std::string>& labels,
                              const std::vector<std::array<double, 3>>& p, const std::vector<std::array<double, 3>>& l,
                              const ExtractOptions& options) {
  if (f.is_zero()) throw Error(ErrorCode::zero_polynomial, "f is the zero polynomial");
  if (p.size() != labels.size() || l.size() != labels.size()) {
    throw Error(ErrorCode::dimension_mismatch, "need one row and one column vector per label");
  }
  const double tol = options.coordinate_tol;
  const SigmaSet sigma = sigma_set(f);
  std::map<std::array<std::uint32_t, 3>, std::size_t> position;
  for (std::size_t i = 0; i < labels.size(); ++i) position[parse_label(labels[i], sigma).index] = i;

  const auto zero = static_cast<std::uint32_t>(sigma.index_of(Polynomial()));
  const auto one = static_cast<std::uint32_t>(sigma.index_of(Polynomial::constant(1)));
  auto locate = [&](std::array<std::uint32_t, 3> key, const std::string& name) {
    auto it = position.find(key);
    if (it == position.end()) throw Error(ErrorCode::label_mismatch, "label " + name + " is missing");
    return it->second;
  };

  ExtractionResult result;
  if (options.check_pattern) {
    const IncompleteMatrix C = build_C(f);
    if (C.row_labels().size() != labels.size()) throw Error(ErrorCode::label_mismatch, "labels do not cover H");
    std::vector<std::size_t> at(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) at[i] = locate(parse_label(C.row_labels()[i], sigma).index, C.row_labels()[i]);
    for (std::size_t i = 0; i < C.rows(); ++i) {
      const Vec3 pi = to_vec(p[at[i]]);
      for (std::size_t j = 0; j < C.cols(); ++j) {
        const MatrixEntry& e = C.at(i, j);
        if (e.kind == EntryKind::unknown) continue;
        const Vec3 lj = to_vec(l[at[j]]);
        const double scale = pi.norm() * lj.norm();
        const double cosine = scale > 0 ? std::fabs(pi.dot(lj)) / scale : 0.0;
        const bool should_vanish = e.is_known();
        if (should_vanish ? cosine > tol : cosine <= tol) {
          throw Error(ErrorCode::precondition, "p.l at (" + C.row_labels()[i] + ", " + C.col_labels()[j] +
                                                   (should_vanish ? ") should vanish" : ") should be nonzero"));
        }
      }
    }
    result.trace.push_back("pattern=ok");
  }

  // Change of basis sending p_(1,0,0), p_(0,1,0), p_(0,0,1) to the standard basis.
  Eigen::Matrix3d basis;
  basis.col(0) = to_vec(p[locate({one, zero, zero}, "(1,0,0)")]);
  basis.col(1) = to_vec(p[locate({zero, one, zero}, "(0,1,0)")]);
  basis.col(2) = to_vec(p[locate({zero, zero, one}, "(0,0,1)")]);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(basis);
  const auto sv = svd.singularValues();
  if (!(sv(2) > tol * sv(0))) {
    throw Error(ErrorCode::singular_basis, "p_(1,0,0), p_(0,1,0), p_(0,0,1) are linearly dependent (singular values " +
                                               fmt(sv(0)) + ", " + fmt(sv(1)) + ", " + fmt(sv(2)) + ")");
  }
  const Eigen::Matrix3d inverse = basis.inverse();
  const Eigen::Matrix3d transpose = basis.transpose();

  Vec3 d = inverse * to_vec(p[locate({one, one, one}, "(1,1,1)")]);
  for (int c = 0; c < 3; ++c) {
    if (std::fabs(d(c)) <= tol * d.norm()) {
      throw Error(ErrorCode::vanishing_coordinate, "p_(1,1,1) has a vanishing coordinate after the basis change");
    }
  }
  result.trace.push_back("basis.singular_min=" + fmt(sv(2)));

  // l_(1,0,s) = (1, 0, s(y)) after scaling p_(1,1,1) to (1,1,1).
  std::map<std::uint32_t, double> values;
  auto value_of = [&](std::uint32_t s) {
    if (auto it = values.find(s); it != values.end()) return it->second;
    const std::string name = "(1,0," + sigma.elements[s].compact_string() + ")";
    Vec3 v = (transpose * to_vec(l[locate({one, zero, s}, name)])).cwiseProduct(d);
    if (std::fabs(v(0)) <= tol * v.norm()) {
      throw Error(ErrorCode::vanishing_coordinate, "first coordinate of l_" + name + " vanishes");
    }
    const double y = v(2) / v(0);
    values.emplace(s, y);
    return y;
  };

  for (const VarId& x : f.variables()) {
    const std::size_t direct = sigma.index_of(Polynomial::variable(x));
    if (direct < sigma.size()) {
      result.root[x] = value_of(static_cast<std::uint32_t>(direct));
      result.trace.push_back("read " + x.name() + "=" + fmt(result.root[x]));
      continue;
    }
    bool done = false;
    for (const Monomial& term : f.terms()) {
      Polynomial prefix = Polynomial::constant(1);
      for (const VarId& v : term.vars) {
        Polynomial next = prefix * Polynomial::variable(v);
        if (v == x) {
          const double before = value_of(static_cast<std::uint32_t>(sigma.index_of(prefix)));
          const double after = value_of(static_cast<std::uint32_t>(sigma.index_of(next)));
          if (std::fabs(before) <= tol) {
            throw Error(ErrorCode::vanishing_coordinate,
                        "cannot recover " + x.name() + ": prefix " + prefix.compact_string() + " vanishes");
          }
          result.root[x] = after / before;
          result.trace.push_back("ratio " + x.name() + "=" + next.compact_string() + "/" + prefix.compact_string() + "=" +
                                 fmt(result.root[x]));
          done = true;
          break;
        }
        prefix = std::move(next);
      }
      if (done) break;
    }
  }

  result.residual = std::fabs(evaluate(f, result.root));
  result.trace.push_back("residual=" + fmt(result.residual));
  if (!(result.residual <= options.residual_tol)) {
    throw Error(ErrorCode::residual, "|f(y)| = " + fmt(result.residual) + " exceeds " + fmt(options.residual_tol));
  }
  return result;
}

template <class T>
ExtractionResult extract_root(const Polynomial& f, const Factorization<T>& F, const ExtractOptions& options) {
  if (F.k != 3) throw Error(ErrorCode::dimension_mismatch, "root extraction needs a size-3 factorization");
  require_same_labels(F.row_labels, F.col_labels, "row and column");
  const RankOneFactors factors = hadamard_sqrt_from_rank1(F);
  std::vector<std::array<double, 3>> p, l;
  for (const auto& a : factors.a) p.push_back({a[0], a[1], a[2]});
  for (const auto& b : factors.b) l.push_back({b[0], b[1], b[2]});
  return extract_root(f, F.row_labels, p, l, options);
}

ExtractionResult extract_root(const Polynomial& f, const AnyFactorization& F, const ExtractOptions& options) {
  return std::visit([&](const auto& x) { return extract_root(f, x, options); }, F);
}

template RankOneFactors hadamard_sqrt_from_rank1(const Factorization<Rational>&, double);
template RankOneFactors hadamard_sqrt_from_rank1(const Factorization<double>&, double);
template ExtractionResult extract_root(const Polynomial&, const Factorization<Rational>&, const ExtractOptions&);
template ExtractionResult extract_root(const Polynomial&, const Factorization<double>&, const ExtractOptions&);

}  // namespace psdrank
