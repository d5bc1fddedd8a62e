#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "psdrank/formula.hpp"
#include "psdrank/polynomial.hpp"

namespace psdrank {

/// Arithmetic expression over variables and the constants 0 and 1, kept
/// unexpanded so that flattening can name shared subexpressions once.
class Expr {
 public:
  enum class Kind { variable, constant, add, sub, mul };

  static Expr var(VarId v);
  static Expr constant(int value);  // 0 or 1
  static Expr binary(Kind op, Expr lhs, Expr rhs);

  /// Chain form of a standard-form polynomial: ((m1 +- m2) +- m3)..., each
  /// monomial a left-nested product, constants as sums of 1.
  static Expr from_polynomial(const Polynomial& p);

  Kind kind() const;
  bool is_atomic() const { return kind() == Kind::variable || kind() == Kind::constant; }
  VarId variable() const;
  int constant_value() const;
  const Expr& lhs() const;
  const Expr& rhs() const;

  /// Stable identity of the shared node, used to memoize naming.
  const void* id() const { return node_.get(); }

  /// Number of binary operations in the tree (shared nodes counted once per use).
  std::size_t operation_count() const;

  Polynomial expand() const;
  std::string to_string() const;

  friend Expr operator+(const Expr& a, const Expr& b) { return binary(Kind::add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(Kind::sub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(Kind::mul, a, b); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct AtomGadget {
  Polynomial g;  // the atom is g > 0
  VarId u, v, w;
};

struct ConnectiveEncoding {
  Formula::Kind kind;  // negation, conjunction or disjunction
  VarId out;
  VarId a;
  VarId b;  // unused for negation
};

/// A fresh variable t introduced by flatten together with the flat
/// expression it names (operands are atomic).
struct FlatDefinition {
  VarId var;
  Expr expr;
};

/// Conjunction of equations expr = 0.
struct EquationSystem {
  std::vector<Expr> equations;
  VarId value_var;
  Formula formula;  // the atom-normalized source formula
  std::vector<AtomGadget> atoms;
  std::vector<ConnectiveEncoding> connectives;
  std::vector<FlatDefinition> definitions;
  std::vector<std::string> trace;
};

/// The atom gadget ((g u^2 - 1)^2 + (w - 1)^2)((g + v^2)^2 + w^2).
Expr atom_gadget(const Expr& g, VarId u, VarId v, VarId w);

/// Emits one gadget per atom and one encoder per connective, numbering
/// fresh variables children-first, then asserts value_var - 1 = 0.
/// Throws precondition if the formula is not atom-normalized.
EquationSystem to_equation_system(const Formula& normalized);

/// Names every non-root internal node with a fresh t-variable so each
/// equation carries at most two operations over variables and 0, 1.
EquationSystem flatten(const EquationSystem& system);

/// Largest operation count over the equations.
std::size_t max_operations(const EquationSystem& system);

/// Expanded sum of squares of all equations.
Polynomial to_single_polynomial(const EquationSystem& system);

struct LiftedWitness {
  Assignment point;  // ExactPoint when every radical was rational
  bool exact() const { return point.index() == 0; }
  std::vector<std::string> trace;
};

/// Extends a satisfying assignment of the original variables to every
/// gadget, value and flatten variable of the system.
LiftedWitness lift_witness(const EquationSystem& system, const ExactPoint& original);

/// parse -> normalize -> equation system -> flatten -> single polynomial.
struct NormalizedFormula {
  Formula normalized;
  EquationSystem flat;
  Polynomial polynomial;
};
NormalizedFormula reduce_formula(const Formula& formula);

}  // namespace psdrank
