#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "psdrank/polynomial.hpp"

namespace psdrank {

enum class Relation { greater, greater_equal, equal, not_equal, less, less_equal };

std::string_view relation_symbol(Relation rel);

/// Quantifier-free formula over the reals. Atoms are stored as "lhs REL 0".
/// Nodes are immutable and shared between copies.
class Formula {
 public:
  enum class Kind { atom, negation, conjunction, disjunction };

  static Formula atom(Polynomial lhs, Relation rel);
  static Formula negation(Formula operand);
  static Formula conjunction(Formula left, Formula right);
  static Formula disjunction(Formula left, Formula right);

  Kind kind() const;
  const Polynomial& lhs() const;
  Relation relation() const;
  const Formula& operand() const;
  const Formula& left() const;
  const Formula& right() const;

  std::size_t atom_count() const;
  /// Nodes plus the term-degree size of every atom polynomial.
  std::size_t size() const;

  bool operator==(const Formula& other) const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

std::string to_string(const Formula& formula);

/// Exact truth value at a rational point.
bool holds(const Formula& formula, const ExactPoint& point);

/// Parses the formula grammar; atoms may only mention x-variables.
Formula parse_formula(std::string_view text);

/// Rewrites every atom into the form g > 0 under !, &, |.
Formula normalize_atoms(const Formula& formula);

bool is_atom_normalized(const Formula& formula);

}  // namespace psdrank
