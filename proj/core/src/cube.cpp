#include "psdrank/cube.hpp"

#include <cmath>

#include "psdrank/error.hpp"

namespace psdrank {

Polynomial homogenize(const Polynomial& f, VarId hom_var) {
  if (f.is_zero()) throw Error(ErrorCode::zero_polynomial, "cannot homogenize the zero polynomial");
  const std::size_t d = f.degree();
  std::vector<Polynomial::Entry> entries;
  for (const auto& e : f.entries()) {
    Polynomial::Entry padded = e;
    padded.vars.insert(padded.vars.end(), d - e.vars.size(), hom_var);
    entries.push_back(std::move(padded));
  }
  return from_entries(std::move(entries));
}

BoundedInstance build_phi(const Polynomial& f, unsigned m) {
  if (f.is_zero()) throw Error(ErrorCode::zero_polynomial, "cannot bound the zero polynomial");
  if (m == 0 || m > 20) throw Error(ErrorCode::precondition, "tower height m must be in [1, 20]");
  BoundedInstance inst;
  inst.m = m;
  inst.degree = static_cast<unsigned>(f.degree());
  for (const VarId& v : f.variables()) {
    if (v.kind == VarKind::homogenization || v.kind == VarKind::slack) {
      throw Error(ErrorCode::precondition, "f may not use reserved variable " + v.name());
    }
    inst.x_vars.push_back(v);
  }
  for (unsigned j = 0; j <= m; ++j) inst.y_vars.push_back({VarKind::homogenization, j});
  for (std::size_t i = 0; i < inst.x_vars.size(); ++i) {
    inst.z_vars.push_back({VarKind::slack, static_cast<std::uint32_t>(i + 1)});
  }

  const Polynomial one = Polynomial::constant(1);
  auto y = [&](unsigned j) { return Polynomial::variable(inst.y_vars[j]); };
  for (unsigned j = 0; j < m; ++j) inst.summands.push_back(y(j + 1) - y(j) * y(j));
  inst.summands.push_back(Polynomial::constant(2) * y(0) - one);
  for (std::size_t i = 0; i < inst.x_vars.size(); ++i) {
    Polynomial x = Polynomial::variable(inst.x_vars[i]);
    Polynomial z = Polynomial::variable(inst.z_vars[i]);
    inst.summands.push_back(x * x + z * z - one);
  }
  inst.homogenized = homogenize(f, inst.y_vars[m]);
  inst.summands.push_back(inst.homogenized);

  std::vector<Polynomial::Entry> all;
  for (const Polynomial& s : inst.summands) {
    Polynomial sq = s * s;
    all.insert(all.end(), sq.entries().begin(), sq.entries().end());
  }
  inst.phi = from_entries(std::move(all));
  return inst;
}

ExactPoint ScaledRoot::full_exact() const {
  if (!z_rational) throw Error(ErrorCode::precondition, "some z_i is irrational");
  ExactPoint out = exact;
  for (const auto& [z, sq] : z_squared) out[z] = *exact_sqrt(sq);
  return out;
}

ScaledRoot scale_root(const BoundedInstance& inst, const ExactPoint& xi) {
  Integer tower = 1;  // 2^{2^m}
  mpz_mul_2exp(tower.get_mpz_t(), tower.get_mpz_t(), 1UL << inst.m);
  ScaledRoot out;
  out.z_rational = true;
  for (std::size_t i = 0; i < inst.x_vars.size(); ++i) {
    const VarId x = inst.x_vars[i];
    auto it = xi.find(x);
    if (it == xi.end()) throw Error(ErrorCode::missing_binding, "no root coordinate for " + x.name());
    if (abs(it->second) >= Rational(tower)) {
      throw Error(ErrorCode::out_of_range,
                  "|" + x.name() + "| must be below 2^(2^" + std::to_string(inst.m) + ") for scale_root");
    }
    Rational scaled = it->second / Rational(tower);
    Rational zsq = Rational(1) - scaled * scaled;
    out.exact[x] = scaled;
    out.z_squared[inst.z_vars[i]] = zsq;
    out.approx[x] = to_double(scaled);
    out.approx[inst.z_vars[i]] = std::sqrt(to_double(zsq));
    if (!exact_sqrt(zsq)) out.z_rational = false;
  }
  for (unsigned j = 0; j <= inst.m; ++j) {
    Integer den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), 1UL << j);
    Rational yj(Integer(1), den);
    out.exact[inst.y_vars[j]] = yj;
    out.approx[inst.y_vars[j]] = to_double(yj);
  }
  return out;
}

Rational evaluate_phi_exact(const BoundedInstance& inst, const ScaledRoot& root) {
  Rational sum = 0;
  for (const auto& e : inst.phi.entries()) {
    Rational term(static_cast<long>(e.coeff));
    std::map<VarId, unsigned> z_power;
    for (const VarId& v : e.vars) {
      if (v.kind == VarKind::slack) {
        ++z_power[v];
        continue;
      }
      auto it = root.exact.find(v);
      if (it == root.exact.end()) throw Error(ErrorCode::missing_binding, "no value bound to " + v.name());
      term *= it->second;
    }
    for (const auto& [z, power] : z_power) {
      if (power % 2 != 0) throw Error(ErrorCode::precondition, "phi has an odd power of " + z.name());
      const Rational& sq = root.z_squared.at(z);
      for (unsigned k = 0; k < power / 2; ++k) term *= sq;
    }
    sum += term;
  }
  return sum;
}

double evaluate_phi_float(const BoundedInstance& inst, const FloatPoint& point) { return evaluate(inst.phi, point); }

}  // namespace psdrank
