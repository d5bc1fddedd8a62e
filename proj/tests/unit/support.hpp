#pragma once

// Random generators and independent oracles shared by the unit tests.

#include <map>
#include <random>
#include <vector>

#include "psdrank/formula.hpp"
#include "psdrank/polynomial.hpp"

namespace psdrank::testing {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// p/q with |p| <= range * q, q in [1, max_den].
inline Rational random_rational(Rng& rng, int range = 3, int max_den = 4) {
  const int q = uniform_int(rng, 1, max_den);
  return make_rational(uniform_int(rng, -range * q, range * q), q);
}

/// Sum of up to `terms` signed monomials in x1..x_nvars of degree <= max_degree.
inline Polynomial random_polynomial(Rng& rng, int nvars, int max_degree, int terms) {
  std::vector<Monomial> list;
  const int count = uniform_int(rng, 1, terms);
  for (int t = 0; t < count; ++t) {
    std::vector<VarId> vars;
    const int deg = uniform_int(rng, 0, max_degree);
    for (int d = 0; d < deg; ++d) vars.push_back(x_var(static_cast<std::uint32_t>(uniform_int(rng, 1, nvars))));
    std::sort(vars.begin(), vars.end());
    list.emplace_back(uniform_int(rng, 0, 1) ? 1 : -1, vars);
  }
  return canonicalize(list);
}

inline ExactPoint random_point(Rng& rng, int nvars, int range = 3, int max_den = 4) {
  ExactPoint p;
  for (int i = 1; i <= nvars; ++i) p[x_var(static_cast<std::uint32_t>(i))] = random_rational(rng, range, max_den);
  return p;
}

/// Dense oracle: exponent vector over x1..x_n -> integer coefficient.
/// Arithmetic is the schoolbook definition, written independently of
/// the library's sorted-multiset representation.
class DensePoly {
 public:
  explicit DensePoly(int nvars) : n_(nvars) {}

  static DensePoly from(const Polynomial& p, int nvars) {
    DensePoly d(nvars);
    for (const Monomial& m : p.terms()) {
      std::vector<int> e(static_cast<std::size_t>(nvars), 0);
      for (const VarId& v : m.vars) ++e[v.index - 1];
      d.coeffs_[e] += m.sign;
    }
    d.prune();
    return d;
  }

  DensePoly operator+(const DensePoly& o) const {
    DensePoly r = *this;
    for (const auto& [e, c] : o.coeffs_) r.coeffs_[e] += c;
    r.prune();
    return r;
  }

  DensePoly operator-(const DensePoly& o) const {
    DensePoly r = *this;
    for (const auto& [e, c] : o.coeffs_) r.coeffs_[e] -= c;
    r.prune();
    return r;
  }

  DensePoly operator*(const DensePoly& o) const {
    DensePoly r(n_);
    for (const auto& [e1, c1] : coeffs_) {
      for (const auto& [e2, c2] : o.coeffs_) {
        std::vector<int> e(e1.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
        r.coeffs_[e] += c1 * c2;
      }
    }
    r.prune();
    return r;
  }

  bool operator==(const DensePoly& o) const { return coeffs_ == o.coeffs_; }

  Rational eval(const ExactPoint& p) const {
    Rational total = 0;
    for (const auto& [e, c] : coeffs_) {
      Rational term(static_cast<long>(c));
      for (std::size_t i = 0; i < e.size(); ++i) {
        for (int k = 0; k < e[i]; ++k) term *= p.at(x_var(static_cast<std::uint32_t>(i + 1)));
      }
      total += term;
    }
    return total;
  }

 private:
  void prune() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) it = it->second == 0 ? coeffs_.erase(it) : std::next(it);
  }
  int n_;
  std::map<std::vector<int>, long long> coeffs_;
};

/// Random formula over x1..x_nvars with exactly `atoms` atoms.
inline Formula random_formula(Rng& rng, int atoms, int nvars) {
  if (atoms == 1) {
    const Relation rels[] = {Relation::greater, Relation::greater_equal, Relation::equal,
                             Relation::not_equal, Relation::less,    Relation::less_equal};
    Formula a = Formula::atom(random_polynomial(rng, nvars, 2, 3), rels[uniform_int(rng, 0, 5)]);
    return uniform_int(rng, 0, 3) == 0 ? Formula::negation(a) : a;
  }
  const int left = uniform_int(rng, 1, atoms - 1);
  Formula l = random_formula(rng, left, nvars);
  Formula r = random_formula(rng, atoms - left, nvars);
  Formula f = uniform_int(rng, 0, 1) ? Formula::conjunction(l, r) : Formula::disjunction(l, r);
  return uniform_int(rng, 0, 4) == 0 ? Formula::negation(f) : f;
}

/// Truth of a single relation, computed from the sign directly.
inline bool relation_holds(const Rational& v, Relation rel) {
  const int s = sgn(v);
  switch (rel) {
    case Relation::greater: return s > 0;
    case Relation::greater_equal: return s >= 0;
    case Relation::equal: return s == 0;
    case Relation::not_equal: return s != 0;
    case Relation::less: return s < 0;
    case Relation::less_equal: return s <= 0;
  }
  return false;
}

}  // namespace psdrank::testing
