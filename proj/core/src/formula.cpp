#include "psdrank/formula.hpp"

#include <vector>

#include "lexer.hpp"
#include "psdrank/error.hpp"

namespace psdrank {

struct Formula::Node {
  Kind kind;
  Polynomial lhs;
  Relation rel = Relation::greater;
  std::vector<Formula> children;
};

std::string_view relation_symbol(Relation rel) {
  switch (rel) {
    case Relation::greater: return ">";
    case Relation::greater_equal: return ">=";
    case Relation::equal: return "=";
    case Relation::not_equal: return "!=";
    case Relation::less: return "<";
    case Relation::less_equal: return "<=";
  }
  return "?";
}

Formula Formula::atom(Polynomial lhs, Relation rel) {
  return Formula(std::make_shared<const Node>(Node{Kind::atom, std::move(lhs), rel, {}}));
}

Formula Formula::negation(Formula operand) {
  return Formula(std::make_shared<const Node>(Node{Kind::negation, {}, {}, {std::move(operand)}}));
}

Formula Formula::conjunction(Formula left, Formula right) {
  return Formula(std::make_shared<const Node>(Node{Kind::conjunction, {}, {}, {std::move(left), std::move(right)}}));
}

Formula Formula::disjunction(Formula left, Formula right) {
  return Formula(std::make_shared<const Node>(Node{Kind::disjunction, {}, {}, {std::move(left), std::move(right)}}));
}

Formula::Kind Formula::kind() const { return node_->kind; }

const Polynomial& Formula::lhs() const {
  if (node_->kind != Kind::atom) throw Error(ErrorCode::precondition, "not an atom");
  return node_->lhs;
}

Relation Formula::relation() const {
  if (node_->kind != Kind::atom) throw Error(ErrorCode::precondition, "not an atom");
  return node_->rel;
}

const Formula& Formula::operand() const {
  if (node_->kind != Kind::negation) throw Error(ErrorCode::precondition, "not a negation");
  return node_->children[0];
}

const Formula& Formula::left() const {
  if (node_->kind != Kind::conjunction && node_->kind != Kind::disjunction) {
    throw Error(ErrorCode::precondition, "not a binary connective");
  }
  return node_->children[0];
}

const Formula& Formula::right() const {
  if (node_->kind != Kind::conjunction && node_->kind != Kind::disjunction) {
    throw Error(ErrorCode::precondition, "not a binary connective");
  }
  return node_->children[1];
}

std::size_t Formula::atom_count() const {
  switch (kind()) {
    case Kind::atom: return 1;
    case Kind::negation: return operand().atom_count();
    default: return left().atom_count() + right().atom_count();
  }
}

std::size_t Formula::size() const {
  switch (kind()) {
    case Kind::atom: {
      std::size_t n = 1;
      for (const auto& e : lhs().entries()) {
        std::uint64_t c = e.coeff < 0 ? -static_cast<std::uint64_t>(e.coeff) : e.coeff;
        n += c * (e.vars.size() + 1);
      }
      return n;
    }
    case Kind::negation: return 1 + operand().size();
    default: return 1 + left().size() + right().size();
  }
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::atom: return lhs() == other.lhs() && relation() == other.relation();
    case Kind::negation: return operand() == other.operand();
    default: return left() == other.left() && right() == other.right();
  }
}

std::string to_string(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::atom:
      return f.lhs().to_string() + " " + std::string(relation_symbol(f.relation())) + " 0";
    case Formula::Kind::negation: return "!(" + to_string(f.operand()) + ")";
    case Formula::Kind::conjunction: return "(" + to_string(f.left()) + ") & (" + to_string(f.right()) + ")";
    case Formula::Kind::disjunction: return "(" + to_string(f.left()) + ") | (" + to_string(f.right()) + ")";
  }
  return {};
}

bool holds(const Formula& f, const ExactPoint& point) {
  switch (f.kind()) {
    case Formula::Kind::atom: {
      int s = sgn(evaluate(f.lhs(), point));
      switch (f.relation()) {
        case Relation::greater: return s > 0;
        case Relation::greater_equal: return s >= 0;
        case Relation::equal: return s == 0;
        case Relation::not_equal: return s != 0;
        case Relation::less: return s < 0;
        case Relation::less_equal: return s <= 0;
      }
      return false;
    }
    case Formula::Kind::negation: return !holds(f.operand(), point);
    case Formula::Kind::conjunction: return holds(f.left(), point) && holds(f.right(), point);
    case Formula::Kind::disjunction: return holds(f.left(), point) || holds(f.right(), point);
  }
  return false;
}

namespace {

using detail::TokenKind;
using detail::TokenStream;

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : ts_(detail::tokenize(text)) {}

  Formula parse() {
    Formula f = parse_or();
    if (ts_.peek().kind != TokenKind::end) ts_.fail("unexpected trailing input");
    return f;
  }

 private:
  Formula parse_or() {
    Formula f = parse_and();
    while (ts_.accept(TokenKind::pipe)) f = Formula::disjunction(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_not();
    while (ts_.accept(TokenKind::amp)) f = Formula::conjunction(f, parse_not());
    return f;
  }

  Formula parse_not() {
    if (ts_.accept(TokenKind::bang)) return Formula::negation(parse_not());
    if (ts_.accept(TokenKind::lparen)) {
      Formula f = parse_or();
      ts_.expect(TokenKind::rparen, "')'");
      return f;
    }
    return parse_atom();
  }

  Formula parse_atom() {
    Polynomial lhs = detail::parse_poly(ts_, only_x);
    Relation rel;
    switch (ts_.peek().kind) {
      case TokenKind::gt: rel = Relation::greater; break;
      case TokenKind::ge: rel = Relation::greater_equal; break;
      case TokenKind::eq: rel = Relation::equal; break;
      case TokenKind::ne: rel = Relation::not_equal; break;
      case TokenKind::lt: rel = Relation::less; break;
      case TokenKind::le: rel = Relation::less_equal; break;
      default: ts_.fail("expected relation");
    }
    ts_.next();
    Polynomial rhs = detail::parse_poly(ts_, only_x);
    return Formula::atom(lhs - rhs, rel);
  }

  static void only_x(const detail::Token& tok, VarId v) {
    if (v.kind != VarKind::original) {
      throw Error(ErrorCode::unknown_variable, "unknown variable '" + tok.text + "' at position " +
                                                   std::to_string(tok.pos) + " (formulas use x-variables)");
    }
  }

  TokenStream ts_;
};

Formula positive(const Polynomial& g) { return Formula::atom(g, Relation::greater); }

}  // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

Formula normalize_atoms(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::atom: {
      const Polynomial& g = f.lhs();
      switch (f.relation()) {
        case Relation::greater: return f;
        case Relation::equal:
          return Formula::conjunction(Formula::negation(positive(g)), Formula::negation(positive(-g)));
        case Relation::not_equal: return Formula::disjunction(positive(g), positive(-g));
        case Relation::greater_equal: return Formula::negation(positive(-g));
        case Relation::less: return positive(-g);
        case Relation::less_equal: return Formula::negation(positive(g));
      }
      return f;
    }
    case Formula::Kind::negation: return Formula::negation(normalize_atoms(f.operand()));
    case Formula::Kind::conjunction:
      return Formula::conjunction(normalize_atoms(f.left()), normalize_atoms(f.right()));
    case Formula::Kind::disjunction:
      return Formula::disjunction(normalize_atoms(f.left()), normalize_atoms(f.right()));
  }
  return f;
}

bool is_atom_normalized(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::atom: return f.relation() == Relation::greater;
    case Formula::Kind::negation: return is_atom_normalized(f.operand());
    default: return is_atom_normalized(f.left()) && is_atom_normalized(f.right());
  }
}

}  // namespace psdrank
