#include "psdrank/rational.hpp"

#include "psdrank/error.hpp"

namespace psdrank {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw Error(ErrorCode::parse, "malformed number '" + std::string(s) + "'");
  }
  Integer value(std::string(s), 10);
  return negative ? Integer(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::parse, "empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) {
      throw Error(ErrorCode::parse, "malformed denominator in '" + std::string(text) + "'");
    }
    Integer den(std::string(den_text), 10);
    if (den == 0) throw Error(ErrorCode::parse, "zero denominator in '" + std::string(text) + "'");
    Rational value(num, den);
    value.canonicalize();
    return value;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw Error(ErrorCode::parse, "malformed decimal '" + std::string(text) + "'");
    }
    Integer scale = 1;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer digits(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    Rational value(digits, scale);
    value.canonicalize();
    return negative ? Rational(-value) : value;
  }
  return Rational(parse_integer(text));
}

std::string to_fraction_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_str();
}

std::optional<Rational> exact_sqrt(const Rational& value) {
  if (sgn(value) < 0) return std::nullopt;
  const Integer& num = value.get_num();
  const Integer& den = value.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) {
    return std::nullopt;
  }
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  Rational root(rn, rd);
  root.canonicalize();
  return root;
}

Rational make_rational(long num, long den) {
  if (den == 0) throw Error(ErrorCode::parse, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

double to_double(const Rational& value) { return value.get_d(); }

Rational abs(const Rational& value) { return sgn(value) < 0 ? Rational(-value) : value; }

}  // namespace psdrank
