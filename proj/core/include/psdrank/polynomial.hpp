#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "psdrank/rational.hpp"

namespace psdrank {

// Each kind owns a dense index space and a one-letter display prefix.
enum class VarKind : std::uint8_t {
  original,        // x: variables of the input formula or polynomial
  gadget_u,        // u: inverse-square-root witness of an atom gadget
  gadget_v,        // v: square-root witness of an atom gadget
  value,           // w: Boolean value of an atom or connective
  flat,            // t: definitions introduced by flattening
  homogenization,  // y: the y_0..y_m tower of the cube bound
  slack,           // z: the z_i completing x_i^2 + z_i^2 = 1
};

char kind_letter(VarKind kind);

struct VarId {
  VarKind kind = VarKind::original;
  std::uint32_t index = 0;

  auto operator<=>(const VarId&) const = default;

  std::string name() const;
};

inline VarId x_var(std::uint32_t i) { return {VarKind::original, i}; }

/// Parses a display name such as "x3" or "y0".
VarId parse_var(std::string_view text);

/// A signed product of variables; an empty product is the constant +1 or -1.
struct Monomial {
  int sign = 1;
  std::vector<VarId> vars;  // sorted, with multiplicity

  Monomial() = default;
  Monomial(int sign, std::vector<VarId> vars);

  std::size_t degree() const { return vars.size(); }
  bool operator==(const Monomial&) const = default;
};

/// Exact polynomial in standard form: a sum of +-1 monomials.
///
/// Values are always canonical. Equal monomials are grouped and opposite
/// signs cancel; what remains is kept as (monomial, integer multiplicity)
/// pairs so that long standard-form sums stay compact. terms() expands the
/// multiplicities back into the +-1 term list. Monomials are ordered by
/// descending degree, then lexicographically on the sorted variable list,
/// which is graded-lex with x1 > x2 > ... and is the order used for division.
class Polynomial {
 public:
  struct Entry {
    std::vector<VarId> vars;
    std::int64_t coeff = 0;
    bool operator==(const Entry&) const = default;
  };

  Polynomial() = default;

  static Polynomial constant(std::int64_t c);
  static Polynomial variable(VarId v);
  static Polynomial monomial(const Monomial& m);

  /// Expanded standard form: every entry repeated |coeff| times with sign.
  std::vector<Monomial> terms() const;

  /// Read-only integer-coefficient view.
  const std::vector<Entry>& entries() const { return entries_; }

  bool is_zero() const { return entries_.empty(); }
  bool is_constant() const;
  /// Requires is_constant().
  std::int64_t constant_value() const;
  std::size_t degree() const;
  /// Number of +-1 terms in standard form.
  std::uint64_t length() const;
  std::set<VarId> variables() const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);

  bool operator==(const Polynomial&) const = default;
  friend std::strong_ordering operator<=>(const Polynomial& a, const Polynomial& b);

  /// "x1*x1 - 1"; the zero polynomial prints as "0".
  std::string to_string() const;
  /// Same text with whitespace removed, for use inside labels.
  std::string compact_string() const;

 private:
  friend Polynomial canonicalize(std::span<const Monomial> terms);
  friend Polynomial from_entries(std::vector<Entry> entries);

  std::vector<Entry> entries_;
};

/// Builds the canonical form of an arbitrary +-1 term list.
Polynomial canonicalize(std::span<const Monomial> terms);

/// Sums coefficients of equal monomials and sorts; zero entries are dropped.
Polynomial from_entries(std::vector<Polynomial::Entry> entries);

enum class ArithOp { add, sub, mul };
Polynomial arith(const Polynomial& p, const Polynomial& q, ArithOp op);

Polynomial pow(const Polynomial& p, unsigned exponent);

/// Substitutes polynomials for variables; unbound variables are kept.
Polynomial substitute(const Polynomial& p, const std::map<VarId, Polynomial>& values);

using ExactPoint = std::map<VarId, Rational>;
using FloatPoint = std::map<VarId, double>;
/// A point is exact (rationals) or floating; the alternative is the mode flag.
using Assignment = std::variant<ExactPoint, FloatPoint>;

Rational evaluate(const Polynomial& p, const ExactPoint& point);
double evaluate(const Polynomial& p, const FloatPoint& point);

FloatPoint to_float(const ExactPoint& point);

/// True iff f divides g over the rationals. Uses single-divisor reduction
/// under the graded-lex order; {f} is a Groebner basis of (f), so the
/// remainder vanishes exactly on multiples.
bool is_multiple_of(const Polynomial& g, const Polynomial& f);

/// Number of standard-form terms of a nonzero polynomial.
std::uint64_t length_of(const Polynomial& f);

/// Grammar: poly := term {("+"|"-") term}; term := ["-"] factor {"*" factor};
/// factor := integer | var, with var one of x,u,v,w,t,y,z followed by digits.
Polynomial parse_polynomial(std::string_view text);

}  // namespace psdrank
