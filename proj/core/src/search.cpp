#include "psdrank/search.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "psdrank/error.hpp"

namespace psdrank {

FloatFactorization DenseFactors::to_factorization(const std::vector<std::string>& row_labels,
                                                  const std::vector<std::string>& col_labels) const {
  FloatFactorization F{k, row_labels, col_labels, {}, {}};
  auto convert = [&](const std::vector<std::vector<double>>& blocks, std::vector<std::vector<GramVector<double>>>& side) {
    for (const auto& block : blocks) {
      std::vector<GramVector<double>> grams;
      for (std::size_t t = 0; t < k; ++t) {
        GramVector<double> g;
        for (std::size_t c = 0; c < k; ++c) {
          const double x = block[t * k + c];
          if (x != 0.0) g.coords.emplace_back(static_cast<std::uint32_t>(c), x);
        }
        if (!g.coords.empty()) grams.push_back(std::move(g));
      }
      side.push_back(std::move(grams));
    }
  };
  convert(U, F.rows);
  convert(V, F.cols);
  return F;
}

DenseFactors DenseFactors::padded(std::size_t k2) const {
  if (k2 < k) throw Error(ErrorCode::precondition, "cannot pad to a smaller size");
  DenseFactors out{k2, {}, {}};
  auto pad = [&](const std::vector<double>& block) {
    std::vector<double> big(k2 * k2, 0.0);
    for (std::size_t col = 0; col < k; ++col) {
      for (std::size_t row = 0; row < k; ++row) big[col * k2 + row] = block[col * k + row];
    }
    return big;
  };
  for (const auto& b : U) out.U.push_back(pad(b));
  for (const auto& b : V) out.V.push_back(pad(b));
  return out;
}

namespace {

using Eigen::Map;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using ConstBlock = Map<const MatrixXd>;

class Problem {
 public:
  Problem(const InstanceMatrix& A, std::size_t k)
      : m_(A.rows()), n_(A.cols()), k_(k), kk_(k * k), target_(A.dense_values()) {}

  std::size_t parameters() const { return (m_ + n_) * kk_; }
  std::size_t residuals() const { return m_ * n_; }

  ConstBlock U(const VectorXd& x, std::size_t i) const { return {x.data() + i * kk_, idx(k_), idx(k_)}; }
  ConstBlock V(const VectorXd& x, std::size_t j) const { return {x.data() + (m_ + j) * kk_, idx(k_), idx(k_)}; }

  VectorXd residual(const VectorXd& x) const {
    VectorXd r(idx(residuals()));
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        r(idx(i * n_ + j)) = (U(x, i).transpose() * V(x, j)).squaredNorm() - target_[i * n_ + j];
      }
    }
    return r;
  }

  VectorXd gradient(const VectorXd& x, const VectorXd& r) const {
    VectorXd g = VectorXd::Zero(idx(parameters()));
    std::vector<MatrixXd> VVt(n_), UUt(m_);
    for (std::size_t j = 0; j < n_; ++j) VVt[j] = V(x, j) * V(x, j).transpose();
    for (std::size_t i = 0; i < m_; ++i) UUt[i] = U(x, i) * U(x, i).transpose();
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const double rij = r(idx(i * n_ + j));
        Map<MatrixXd>(g.data() + i * kk_, idx(k_), idx(k_)) += 4.0 * rij * VVt[j] * U(x, i);
        Map<MatrixXd>(g.data() + (m_ + j) * kk_, idx(k_), idx(k_)) += 4.0 * rij * UUt[i] * V(x, j);
      }
    }
    return g;
  }

  MatrixXd jacobian(const VectorXd& x) const {
    MatrixXd J = MatrixXd::Zero(idx(residuals()), idx(parameters()));
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const MatrixXd dU = 2.0 * V(x, j) * (V(x, j).transpose() * U(x, i));
        const MatrixXd dV = 2.0 * U(x, i) * (U(x, i).transpose() * V(x, j));
        const auto row = idx(i * n_ + j);
        J.row(row).segment(idx(i * kk_), idx(kk_)) = Map<const VectorXd>(dU.data(), idx(kk_));
        J.row(row).segment(idx((m_ + j) * kk_), idx(kk_)) = Map<const VectorXd>(dV.data(), idx(kk_));
      }
    }
    return J;
  }

  DenseFactors factors(const VectorXd& x) const {
    DenseFactors f{k_, {}, {}};
    for (std::size_t i = 0; i < m_ + n_; ++i) {
      std::vector<double> block(x.data() + i * kk_, x.data() + (i + 1) * kk_);
      (i < m_ ? f.U : f.V).push_back(std::move(block));
    }
    return f;
  }

  VectorXd flatten(const DenseFactors& f) const {
    VectorXd x(idx(parameters()));
    for (std::size_t i = 0; i < m_; ++i) x.segment(idx(i * kk_), idx(kk_)) = Map<const VectorXd>(f.U[i].data(), idx(kk_));
    for (std::size_t j = 0; j < n_; ++j) {
      x.segment(idx((m_ + j) * kk_), idx(kk_)) = Map<const VectorXd>(f.V[j].data(), idx(kk_));
    }
    return x;
  }

  static Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

 private:
  std::size_t m_, n_, k_, kk_;
  std::vector<double> target_;
};

struct RunResult {
  VectorXd x;
  double max_abs = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
};

RunResult descend_and_polish(const Problem& problem, VectorXd x, const SearchConfig& config) {
  RunResult run;
  VectorXd r = problem.residual(x);
  double cost = r.squaredNorm();
  double step = 1e-2;
  const double stop_cost = 1e-4 * config.success_threshold * config.success_threshold;

  for (std::size_t it = 0; it < config.descent_iterations && cost > stop_cost; ++it) {
    ++run.iterations;
    const VectorXd g = problem.gradient(x, r);
    const double gg = g.squaredNorm();
    if (gg < 1e-30) break;
    bool accepted = false;
    while (step > 1e-20) {
      VectorXd trial = x - step * g;
      VectorXd rt = problem.residual(trial);
      const double ct = rt.squaredNorm();
      if (ct <= cost - 1e-4 * step * gg) {
        x = std::move(trial);
        r = std::move(rt);
        cost = ct;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    step *= 2.0;
  }

  // Levenberg-Marquardt on the residual vector.
  double lambda = 1e-3;
  for (std::size_t it = 0; it < config.polish_iterations && cost > stop_cost; ++it) {
    ++run.iterations;
    const MatrixXd J = problem.jacobian(x);
    const MatrixXd JtJ = J.transpose() * J;
    const VectorXd Jtr = J.transpose() * r;
    bool improved = false;
    while (lambda < 1e12) {
      MatrixXd system = JtJ;
      system.diagonal().array() += lambda * (1.0 + JtJ.diagonal().array());
      const VectorXd delta = system.ldlt().solve(-Jtr);
      VectorXd trial = x + delta;
      VectorXd rt = problem.residual(trial);
      const double ct = rt.squaredNorm();
      if (std::isfinite(ct) && ct < cost) {
        x = std::move(trial);
        r = std::move(rt);
        cost = ct;
        lambda = std::max(lambda / 3.0, 1e-15);
        improved = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!improved) break;
  }

  run.max_abs = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
  run.x = std::move(x);
  return run;
}

double max_abs_residual(const InstanceMatrix& A, const DenseFactors& f) {
  Problem problem(A, f.k);
  VectorXd r = problem.residual(problem.flatten(f));
  return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t restart) {
  SplitMix64 sm(seed ^ (0xD1B54A32D192ED03ULL * (restart + 1)));
  return sm.next();
}

// Exact test for a nonnegative rank-one matrix; fills the witness when it is one.
bool rank_one_exact(const InstanceMatrix& A, DenseFactors& witness) {
  witness = DenseFactors{1, std::vector<std::vector<double>>(A.rows(), {0.0}),
                         std::vector<std::vector<double>>(A.cols(), {0.0})};
  if (A.cells().empty()) return true;
  const auto& pivot = A.cells().front();
  const std::size_t i0 = pivot.row, j0 = pivot.col;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) {
      if (A.at(i, j) * pivot.value != A.at(i, j0) * A.at(i0, j)) return false;
    }
  }
  for (std::size_t i = 0; i < A.rows(); ++i) witness.U[i][0] = std::sqrt(to_double(A.at(i, j0)));
  for (std::size_t j = 0; j < A.cols(); ++j) witness.V[j][0] = std::sqrt(to_double(A.at(i0, j) / pivot.value));
  return true;
}

DenseFactors trivial_witness(const InstanceMatrix& A, std::size_t k) {
  const std::size_t m = A.rows(), n = A.cols();
  DenseFactors f{k, std::vector<std::vector<double>>(m, std::vector<double>(k * k, 0.0)),
                 std::vector<std::vector<double>>(n, std::vector<double>(k * k, 0.0))};
  // Diagonal blocks: one side holds e_t, the other sqrt(A) on the diagonal.
  const bool by_rows = m <= k;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double s = std::sqrt(to_double(A.at(i, j)));
      if (by_rows) {
        f.U[i][i * k + i] = 1.0;
        f.V[j][i * k + i] = s;
      } else {
        f.V[j][j * k + j] = 1.0;
        f.U[i][j * k + j] = s;
      }
    }
  }
  return f;
}

}  // namespace

SearchReport psd_rank_search(const InstanceMatrix& A, std::size_t k, const SearchConfig& config) {
  if (k < 1) throw Error(ErrorCode::precondition, "k must be at least 1");
  SearchReport report;
  report.k = k;
  report.seed = config.seed;

  if (k >= std::min(A.rows(), A.cols())) {
    report.method = "trivial";
    report.witness = trivial_witness(A, k);
    report.best_residual = max_abs_residual(A, *report.witness);
    report.found = report.best_residual <= config.success_threshold;
    return report;
  }

  std::optional<bool> exact_verdict;
  if (k == 1) {
    DenseFactors w;
    exact_verdict = rank_one_exact(A, w);
    if (*exact_verdict) {
      report.method = "rank-one-exact";
      report.best_residual = max_abs_residual(A, w);
      report.witness = std::move(w);
      report.found = true;
      return report;
    }
  }

  report.method = k == 1 ? "rank-one-exact" : "descent";
  const Problem problem(A, k);
  double mean = 0.0;
  for (const auto& c : A.cells()) mean += to_double(c.value);
  mean /= static_cast<double>(std::max<std::size_t>(1, A.rows() * A.cols()));
  const double scale = std::sqrt(std::max(mean, 1e-12)) / static_cast<double>(k);

  report.best_residual = std::numeric_limits<double>::infinity();
  for (std::size_t restart = 0; restart < config.restarts; ++restart) {
    VectorXd x(Problem::idx(problem.parameters()));
    if (restart == 0 && config.initial) {
      x = problem.flatten(config.initial->k < k ? config.initial->padded(k) : *config.initial);
    } else {
      std::mt19937_64 rng(mix(config.seed, restart));
      std::normal_distribution<double> normal(0.0, scale);
      for (Eigen::Index p = 0; p < x.size(); ++p) x(p) = normal(rng);
    }
    RunResult run = descend_and_polish(problem, std::move(x), config);
    report.iterations += run.iterations;
    if (run.max_abs < report.best_residual) {
      report.best_residual = run.max_abs;
      report.best_restart = restart;
      report.witness = problem.factors(run.x);
    }
    if (report.best_residual <= config.success_threshold) break;
  }
  report.found = !exact_verdict.has_value() && report.best_residual <= config.success_threshold;
  return report;
}

}  // namespace psdrank
