#include "psdrank/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "lexer.hpp"
#include "psdrank/error.hpp"

namespace psdrank {

namespace {

using VarList = std::vector<VarId>;

// Strict order putting the larger graded-lex monomial first.
struct MonomialFirst {
  bool operator()(const VarList& a, const VarList& b) const {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  }
};

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::out_of_range, "polynomial coefficient overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::out_of_range, "polynomial coefficient overflow");
  return r;
}

VarList merge_vars(const VarList& a, const VarList& b) {
  VarList out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Multiset inclusion of sorted lists; on success writes big \ small.
bool divides(const VarList& small, const VarList& big, VarList* quotient) {
  quotient->clear();
  std::size_t i = 0;
  for (const VarId& v : big) {
    if (i < small.size() && small[i] == v) {
      ++i;
    } else if (i < small.size() && small[i] < v) {
      return false;
    } else {
      quotient->push_back(v);
    }
  }
  return i == small.size();
}

std::string monomial_text(const VarList& vars) {
  if (vars.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) s += '*';
    s += vars[i].name();
  }
  return s;
}

}  // namespace

char kind_letter(VarKind kind) {
  switch (kind) {
    case VarKind::original: return 'x';
    case VarKind::gadget_u: return 'u';
    case VarKind::gadget_v: return 'v';
    case VarKind::value: return 'w';
    case VarKind::flat: return 't';
    case VarKind::homogenization: return 'y';
    case VarKind::slack: return 'z';
  }
  return '?';
}

std::string VarId::name() const { return std::string(1, kind_letter(kind)) + std::to_string(index); }

VarId parse_var(std::string_view text) {
  if (text.size() < 2) throw Error(ErrorCode::unknown_variable, "unknown variable '" + std::string(text) + "'");
  VarKind kind;
  switch (text.front()) {
    case 'x': kind = VarKind::original; break;
    case 'u': kind = VarKind::gadget_u; break;
    case 'v': kind = VarKind::gadget_v; break;
    case 'w': kind = VarKind::value; break;
    case 't': kind = VarKind::flat; break;
    case 'y': kind = VarKind::homogenization; break;
    case 'z': kind = VarKind::slack; break;
    default: throw Error(ErrorCode::unknown_variable, "unknown variable '" + std::string(text) + "'");
  }
  std::string_view digits = text.substr(1);
  if (digits.size() > 9 || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(ErrorCode::unknown_variable, "unknown variable '" + std::string(text) + "'");
  }
  return {kind, static_cast<std::uint32_t>(std::stoul(std::string(digits)))};
}

Monomial::Monomial(int s, std::vector<VarId> v) : sign(s), vars(std::move(v)) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::precondition, "monomial sign must be +1 or -1");
  std::sort(vars.begin(), vars.end());
}

Polynomial from_entries(std::vector<Polynomial::Entry> entries) {
  for (auto& e : entries) std::sort(e.vars.begin(), e.vars.end());
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return MonomialFirst{}(a.vars, b.vars); });
  Polynomial p;
  for (auto& e : entries) {
    if (!p.entries_.empty() && p.entries_.back().vars == e.vars) {
      p.entries_.back().coeff = checked_add(p.entries_.back().coeff, e.coeff);
    } else {
      p.entries_.push_back(std::move(e));
    }
  }
  std::erase_if(p.entries_, [](const auto& e) { return e.coeff == 0; });
  return p;
}

Polynomial canonicalize(std::span<const Monomial> terms) {
  std::vector<Polynomial::Entry> entries;
  entries.reserve(terms.size());
  for (const Monomial& m : terms) entries.push_back({m.vars, m.sign});
  return from_entries(std::move(entries));
}

Polynomial Polynomial::constant(std::int64_t c) { return from_entries({{{}, c}}); }

Polynomial Polynomial::variable(VarId v) { return from_entries({{{v}, 1}}); }

Polynomial Polynomial::monomial(const Monomial& m) { return from_entries({{m.vars, m.sign}}); }

std::vector<Monomial> Polynomial::terms() const {
  std::vector<Monomial> out;
  for (const Entry& e : entries_) {
    int sign = e.coeff < 0 ? -1 : 1;
    std::uint64_t count = e.coeff < 0 ? -static_cast<std::uint64_t>(e.coeff) : static_cast<std::uint64_t>(e.coeff);
    for (std::uint64_t i = 0; i < count; ++i) out.emplace_back(sign, e.vars);
  }
  return out;
}

bool Polynomial::is_constant() const {
  return entries_.empty() || (entries_.size() == 1 && entries_.front().vars.empty());
}

std::int64_t Polynomial::constant_value() const {
  if (!is_constant()) throw Error(ErrorCode::precondition, "polynomial is not constant");
  return entries_.empty() ? 0 : entries_.front().coeff;
}

std::size_t Polynomial::degree() const { return entries_.empty() ? 0 : entries_.front().vars.size(); }

std::uint64_t Polynomial::length() const {
  std::uint64_t n = 0;
  for (const Entry& e : entries_) {
    n += e.coeff < 0 ? -static_cast<std::uint64_t>(e.coeff) : static_cast<std::uint64_t>(e.coeff);
  }
  return n;
}

std::set<VarId> Polynomial::variables() const {
  std::set<VarId> out;
  for (const Entry& e : entries_) out.insert(e.vars.begin(), e.vars.end());
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (Entry& e : p.entries_) e.coeff = checked_mul(e.coeff, -1);
  return p;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Polynomial::Entry> all = a.entries_;
  all.insert(all.end(), b.entries_.begin(), b.entries_.end());
  return from_entries(std::move(all));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::map<VarList, std::int64_t, MonomialFirst> acc;
  for (const auto& ea : a.entries_) {
    for (const auto& eb : b.entries_) {
      auto& slot = acc[merge_vars(ea.vars, eb.vars)];
      slot = checked_add(slot, checked_mul(ea.coeff, eb.coeff));
    }
  }
  Polynomial p;
  for (auto& [vars, c] : acc) {
    if (c != 0) p.entries_.push_back({vars, c});
  }
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) { return *this = *this + other; }
Polynomial& Polynomial::operator-=(const Polynomial& other) { return *this = *this - other; }
Polynomial& Polynomial::operator*=(const Polynomial& other) { return *this = *this * other; }

std::strong_ordering operator<=>(const Polynomial& a, const Polynomial& b) {
  std::size_t n = std::min(a.entries_.size(), b.entries_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ea = a.entries_[i];
    const auto& eb = b.entries_[i];
    if (ea.vars != eb.vars) {
      return MonomialFirst{}(ea.vars, eb.vars) ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (ea.coeff != eb.coeff) return ea.coeff <=> eb.coeff;
  }
  return a.entries_.size() <=> b.entries_.size();
}

std::string Polynomial::to_string() const {
  if (entries_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const Monomial& m : terms()) {
    if (first) {
      if (m.sign < 0) s += '-';
    } else {
      s += m.sign < 0 ? " - " : " + ";
    }
    s += monomial_text(m.vars);
    first = false;
  }
  return s;
}

std::string Polynomial::compact_string() const {
  std::string s = to_string();
  std::erase(s, ' ');
  return s;
}

Polynomial arith(const Polynomial& p, const Polynomial& q, ArithOp op) {
  switch (op) {
    case ArithOp::add: return p + q;
    case ArithOp::sub: return p - q;
    case ArithOp::mul: return p * q;
  }
  return {};
}

Polynomial pow(const Polynomial& p, unsigned exponent) {
  Polynomial result = Polynomial::constant(1);
  for (unsigned i = 0; i < exponent; ++i) result *= p;
  return result;
}

Polynomial substitute(const Polynomial& p, const std::map<VarId, Polynomial>& values) {
  Polynomial out;
  for (const auto& e : p.entries()) {
    Polynomial term = Polynomial::constant(e.coeff);
    std::vector<VarId> kept;
    for (const VarId& v : e.vars) {
      if (auto it = values.find(v); it != values.end()) {
        term *= it->second;
      } else {
        kept.push_back(v);
      }
    }
    term *= from_entries({{kept, 1}});
    out += term;
  }
  return out;
}

namespace {

template <class T>
T evaluate_impl(const Polynomial& p, const std::map<VarId, T>& point) {
  T sum = 0;
  for (const auto& e : p.entries()) {
    T term = static_cast<T>(e.coeff);
    for (const VarId& v : e.vars) {
      auto it = point.find(v);
      if (it == point.end()) throw Error(ErrorCode::missing_binding, "no value bound to " + v.name());
      term *= it->second;
    }
    sum += term;
  }
  return sum;
}

}  // namespace

Rational evaluate(const Polynomial& p, const ExactPoint& point) {
  Rational sum = 0;
  for (const auto& e : p.entries()) {
    Rational term(static_cast<long>(e.coeff));
    for (const VarId& v : e.vars) {
      auto it = point.find(v);
      if (it == point.end()) throw Error(ErrorCode::missing_binding, "no value bound to " + v.name());
      term *= it->second;
    }
    sum += term;
  }
  return sum;
}

double evaluate(const Polynomial& p, const FloatPoint& point) { return evaluate_impl<double>(p, point); }

FloatPoint to_float(const ExactPoint& point) {
  FloatPoint out;
  for (const auto& [v, q] : point) out.emplace(v, to_double(q));
  return out;
}

bool is_multiple_of(const Polynomial& g, const Polynomial& f) {
  if (f.is_zero()) throw Error(ErrorCode::zero_polynomial, "divisor must be nonzero");
  if (g.is_zero()) return true;
  if (f.is_constant()) return true;

  using RationalPoly = std::map<VarList, Rational, MonomialFirst>;
  RationalPoly rem;
  for (const auto& e : g.entries()) rem.emplace(e.vars, Rational(static_cast<long>(e.coeff)));
  const auto& lead_f = f.entries().front();
  const Rational lead_coeff(static_cast<long>(lead_f.coeff));

  VarList quotient;
  // Terms not divisible by lt(f) stay in `rem` but are skipped on later passes.
  auto cursor = rem.begin();
  while (cursor != rem.end()) {
    if (!divides(lead_f.vars, cursor->first, &quotient)) {
      return false;  // the remainder has a nonzero term
    }
    Rational factor = cursor->second / lead_coeff;
    VarList shift = quotient;
    for (const auto& e : f.entries()) {
      VarList vars = merge_vars(e.vars, shift);
      Rational delta = factor * Rational(static_cast<long>(e.coeff));
      auto [it, inserted] = rem.try_emplace(std::move(vars), 0);
      it->second -= delta;
      if (sgn(it->second) == 0) rem.erase(it);
    }
    cursor = rem.begin();
  }
  return true;
}

std::uint64_t length_of(const Polynomial& f) {
  if (f.is_zero()) throw Error(ErrorCode::zero_polynomial, "length of the zero polynomial is undefined");
  return f.length();
}

Polynomial parse_polynomial(std::string_view text) {
  detail::TokenStream ts(detail::tokenize(text));
  Polynomial p = detail::parse_poly(ts, {});
  if (ts.peek().kind != detail::TokenKind::end) ts.fail("unexpected trailing input");
  return p;
}

}  // namespace psdrank
