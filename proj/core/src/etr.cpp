#include "psdrank/etr.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <unordered_map>

#include "psdrank/error.hpp"

namespace psdrank {

struct Expr::Node {
  Kind kind;
  VarId var;
  int constant = 0;
  std::vector<Expr> operands;
};

Expr Expr::var(VarId v) { return Expr(std::make_shared<const Node>(Node{Kind::variable, v, 0, {}})); }

Expr Expr::constant(int value) {
  if (value != 0 && value != 1) throw Error(ErrorCode::precondition, "expression constants are 0 or 1");
  return Expr(std::make_shared<const Node>(Node{Kind::constant, {}, value, {}}));
}

Expr Expr::binary(Kind op, Expr lhs, Expr rhs) {
  if (op == Kind::variable || op == Kind::constant) throw Error(ErrorCode::precondition, "not a binary operator");
  return Expr(std::make_shared<const Node>(Node{op, {}, 0, {std::move(lhs), std::move(rhs)}}));
}

Expr Expr::from_polynomial(const Polynomial& p) {
  std::vector<Monomial> terms = p.terms();
  if (terms.empty()) return constant(0);
  auto monomial = [](const Monomial& m) {
    if (m.vars.empty()) return constant(1);
    Expr e = var(m.vars.front());
    for (std::size_t i = 1; i < m.vars.size(); ++i) e = e * var(m.vars[i]);
    return e;
  };
  Expr e = terms.front().sign < 0 ? constant(0) - monomial(terms.front()) : monomial(terms.front());
  for (std::size_t i = 1; i < terms.size(); ++i) {
    e = terms[i].sign < 0 ? e - monomial(terms[i]) : e + monomial(terms[i]);
  }
  return e;
}

Expr::Kind Expr::kind() const { return node_->kind; }

VarId Expr::variable() const {
  if (kind() != Kind::variable) throw Error(ErrorCode::precondition, "not a variable");
  return node_->var;
}

int Expr::constant_value() const {
  if (kind() != Kind::constant) throw Error(ErrorCode::precondition, "not a constant");
  return node_->constant;
}

const Expr& Expr::lhs() const {
  if (is_atomic()) throw Error(ErrorCode::precondition, "atomic expression has no operands");
  return node_->operands[0];
}

const Expr& Expr::rhs() const {
  if (is_atomic()) throw Error(ErrorCode::precondition, "atomic expression has no operands");
  return node_->operands[1];
}

std::size_t Expr::operation_count() const {
  if (is_atomic()) return 0;
  return 1 + lhs().operation_count() + rhs().operation_count();
}

Polynomial Expr::expand() const {
  switch (kind()) {
    case Kind::variable: return Polynomial::variable(variable());
    case Kind::constant: return Polynomial::constant(constant_value());
    case Kind::add: return lhs().expand() + rhs().expand();
    case Kind::sub: return lhs().expand() - rhs().expand();
    case Kind::mul: return lhs().expand() * rhs().expand();
  }
  return {};
}

std::string Expr::to_string() const {
  switch (kind()) {
    case Kind::variable: return variable().name();
    case Kind::constant: return std::to_string(constant_value());
    case Kind::add: return "(" + lhs().to_string() + " + " + rhs().to_string() + ")";
    case Kind::sub: return "(" + lhs().to_string() + " - " + rhs().to_string() + ")";
    case Kind::mul: return "(" + lhs().to_string() + " * " + rhs().to_string() + ")";
  }
  return {};
}

Expr atom_gadget(const Expr& g, VarId u, VarId v, VarId w) {
  const Expr one = Expr::constant(1);
  const Expr U = Expr::var(u);
  const Expr V = Expr::var(v);
  const Expr W = Expr::var(w);
  const Expr inverse = g * U * U - one;
  const Expr truth = W - one;
  const Expr positive_branch = inverse * inverse + truth * truth;
  const Expr shifted = g + V * V;
  const Expr negative_branch = shifted * shifted + W * W;
  return positive_branch * negative_branch;
}

namespace {

class SystemBuilder {
 public:
  explicit SystemBuilder(EquationSystem& sys) : sys_(sys) {}

  VarId encode(const Formula& f) {
    const Expr one = Expr::constant(1);
    switch (f.kind()) {
      case Formula::Kind::atom: {
        ++atom_count_;
        AtomGadget gadget{f.lhs(), {VarKind::gadget_u, atom_count_}, {VarKind::gadget_v, atom_count_}, fresh_value()};
        sys_.equations.push_back(atom_gadget(Expr::from_polynomial(gadget.g), gadget.u, gadget.v, gadget.w));
        sys_.trace.push_back("atom " + gadget.w.name() + ": " + gadget.g.to_string() + " > 0");
        sys_.atoms.push_back(std::move(gadget));
        return sys_.atoms.back().w;
      }
      case Formula::Kind::negation: {
        VarId a = encode(f.operand());
        VarId out = fresh_value();
        sys_.equations.push_back(Expr::var(out) - (one - Expr::var(a)));
        sys_.connectives.push_back({Formula::Kind::negation, out, a, a});
        sys_.trace.push_back("not " + out.name() + " = 1 - " + a.name());
        return out;
      }
      case Formula::Kind::conjunction:
      case Formula::Kind::disjunction: {
        VarId a = encode(f.left());
        VarId b = encode(f.right());
        VarId out = fresh_value();
        const Expr A = Expr::var(a);
        const Expr B = Expr::var(b);
        if (f.kind() == Formula::Kind::conjunction) {
          sys_.equations.push_back(Expr::var(out) - A * B);
          sys_.trace.push_back("and " + out.name() + " = " + a.name() + "*" + b.name());
        } else {
          sys_.equations.push_back(Expr::var(out) - ((A + B) - A * B));
          sys_.trace.push_back("or " + out.name() + " = " + a.name() + " + " + b.name() + " - " + a.name() + "*" +
                               b.name());
        }
        sys_.connectives.push_back({f.kind(), out, a, b});
        return out;
      }
    }
    throw Error(ErrorCode::precondition, "unknown formula node");
  }

 private:
  VarId fresh_value() { return {VarKind::value, ++value_count_}; }

  EquationSystem& sys_;
  std::uint32_t atom_count_ = 0;
  std::uint32_t value_count_ = 0;
};

}  // namespace

EquationSystem to_equation_system(const Formula& normalized) {
  if (!is_atom_normalized(normalized)) {
    throw Error(ErrorCode::precondition, "formula must be atom-normalized (only g > 0 atoms)");
  }
  EquationSystem sys{{}, {}, normalized, {}, {}, {}, {}};
  SystemBuilder builder(sys);
  sys.value_var = builder.encode(normalized);
  sys.equations.push_back(Expr::var(sys.value_var) - Expr::constant(1));
  sys.trace.push_back("assert " + sys.value_var.name() + " = 1");
  return sys;
}

EquationSystem flatten(const EquationSystem& system) {
  EquationSystem out = system;
  out.equations.clear();
  std::uint32_t next_t = 0;
  for (const auto& d : system.definitions) next_t = std::max(next_t, d.var.index);
  std::unordered_map<const void*, Expr> names;

  std::function<Expr(const Expr&)> name = [&](const Expr& e) -> Expr {
    if (e.is_atomic()) return e;
    if (auto it = names.find(e.id()); it != names.end()) return it->second;
    Expr flat = Expr::binary(e.kind(), name(e.lhs()), name(e.rhs()));
    VarId t{VarKind::flat, ++next_t};
    out.definitions.push_back({t, flat});
    out.equations.push_back(flat - Expr::var(t));
    Expr named = Expr::var(t);
    names.emplace(e.id(), named);
    return named;
  };

  for (const Expr& eq : system.equations) {
    if (eq.is_atomic()) {
      out.equations.push_back(eq);
    } else {
      out.equations.push_back(Expr::binary(eq.kind(), name(eq.lhs()), name(eq.rhs())));
    }
  }
  out.trace.push_back("flatten: " + std::to_string(system.equations.size()) + " equations -> " +
                      std::to_string(out.equations.size()) + ", " +
                      std::to_string(out.definitions.size() - system.definitions.size()) + " fresh variables");
  return out;
}

std::size_t max_operations(const EquationSystem& system) {
  std::size_t m = 0;
  for (const Expr& e : system.equations) m = std::max(m, e.operation_count());
  return m;
}

Polynomial to_single_polynomial(const EquationSystem& system) {
  std::vector<Polynomial::Entry> all;
  for (const Expr& eq : system.equations) {
    Polynomial p = eq.expand();
    Polynomial sq = p * p;
    all.insert(all.end(), sq.entries().begin(), sq.entries().end());
  }
  return from_entries(std::move(all));
}

namespace {

// Values of the non-original variables; T is Rational or double.
template <class T>
void lift_connectives_and_definitions(const EquationSystem& system, std::map<VarId, T>& point) {
  for (const auto& c : system.connectives) {
    const T& a = point.at(c.a);
    const T& b = point.at(c.b);
    switch (c.kind) {
      case Formula::Kind::negation: point[c.out] = T(1) - a; break;
      case Formula::Kind::conjunction: point[c.out] = a * b; break;
      default: point[c.out] = a + b - a * b; break;
    }
  }
  for (const auto& d : system.definitions) point[d.var] = evaluate(d.expr.expand(), point);
}

std::optional<ExactPoint> lift_exact(const EquationSystem& system, const ExactPoint& original) {
  ExactPoint point = original;
  for (const auto& atom : system.atoms) {
    Rational gv = evaluate(atom.g, original);
    if (sgn(gv) > 0) {
      auto root = exact_sqrt(gv);
      if (!root) return std::nullopt;
      point[atom.u] = Rational(1) / *root;
      point[atom.v] = 0;
      point[atom.w] = 1;
    } else {
      auto root = exact_sqrt(Rational(-gv));
      if (!root) return std::nullopt;
      point[atom.u] = 0;
      point[atom.v] = *root;
      point[atom.w] = 0;
    }
  }
  lift_connectives_and_definitions(system, point);
  return point;
}

FloatPoint lift_float(const EquationSystem& system, const ExactPoint& original) {
  FloatPoint point = to_float(original);
  for (const auto& atom : system.atoms) {
    double gv = to_double(evaluate(atom.g, original));
    if (gv > 0) {
      point[atom.u] = 1.0 / std::sqrt(gv);
      point[atom.v] = 0.0;
      point[atom.w] = 1.0;
    } else {
      point[atom.u] = 0.0;
      point[atom.v] = std::sqrt(-gv);
      point[atom.w] = 0.0;
    }
  }
  lift_connectives_and_definitions(system, point);
  return point;
}

}  // namespace

LiftedWitness lift_witness(const EquationSystem& system, const ExactPoint& original) {
  if (!holds(system.formula, original)) {
    throw Error(ErrorCode::unsatisfied, "the assignment does not satisfy the formula");
  }
  LiftedWitness out;
  if (auto exact = lift_exact(system, original)) {
    out.point = std::move(*exact);
    out.trace.push_back("lift mode=exact");
  } else {
    out.point = lift_float(system, original);
    out.trace.push_back("lift mode=float (irrational square root)");
  }
  return out;
}

NormalizedFormula reduce_formula(const Formula& formula) {
  Formula normalized = normalize_atoms(formula);
  EquationSystem flat = flatten(to_equation_system(normalized));
  Polynomial single = to_single_polynomial(flat);
  return {normalized, std::move(flat), std::move(single)};
}

}  // namespace psdrank
