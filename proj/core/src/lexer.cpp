#include "lexer.hpp"

#include <cctype>

#include "psdrank/error.hpp"

namespace psdrank::detail {

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](TokenKind k, std::size_t len) {
    out.push_back({k, std::string(text.substr(i, len)), i});
    i += len;
  };
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      push(TokenKind::integer, j - i);
      continue;
    }
    if (std::isalpha(c)) {
      std::size_t j = i;
      while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
      push(TokenKind::identifier, j - i);
      continue;
    }
    char n = i + 1 < text.size() ? text[i + 1] : '\0';
    switch (c) {
      case '+': push(TokenKind::plus, 1); break;
      case '-': push(TokenKind::minus, 1); break;
      case '*': push(TokenKind::star, 1); break;
      case '(': push(TokenKind::lparen, 1); break;
      case ')': push(TokenKind::rparen, 1); break;
      case '&': push(TokenKind::amp, 1); break;
      case '|': push(TokenKind::pipe, 1); break;
      case '=': push(TokenKind::eq, 1); break;
      case '!':
        if (n == '=') push(TokenKind::ne, 2);
        else push(TokenKind::bang, 1);
        break;
      case '>':
        if (n == '=') push(TokenKind::ge, 2);
        else push(TokenKind::gt, 1);
        break;
      case '<':
        if (n == '=') push(TokenKind::le, 2);
        else push(TokenKind::lt, 1);
        break;
      default:
        throw Error(ErrorCode::parse, "unexpected character '" + std::string(1, static_cast<char>(c)) +
                                          "' at position " + std::to_string(i));
    }
  }
  out.push_back({TokenKind::end, "", text.size()});
  return out;
}

bool TokenStream::accept(TokenKind kind) {
  if (peek().kind != kind) return false;
  next();
  return true;
}

const Token& TokenStream::expect(TokenKind kind, std::string_view what) {
  if (peek().kind != kind) fail("expected " + std::string(what));
  return next();
}

void TokenStream::fail(const std::string& message) const {
  const Token& t = peek();
  std::string found = t.kind == TokenKind::end ? "end of input" : "'" + t.text + "'";
  throw Error(ErrorCode::parse, message + " at position " + std::to_string(t.pos) + ", found " + found);
}

namespace {

Polynomial parse_factor(TokenStream& ts, const VarCheck& check) {
  const Token& t = ts.peek();
  if (t.kind == TokenKind::integer) {
    ts.next();
    std::int64_t value = 0;
    try {
      value = std::stoll(t.text);
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse, "integer too large at position " + std::to_string(t.pos));
    }
    return Polynomial::constant(value);
  }
  if (t.kind == TokenKind::identifier) {
    Token tok = ts.next();
    VarId v;
    try {
      v = parse_var(tok.text);
    } catch (const Error&) {
      throw Error(ErrorCode::unknown_variable,
                  "unknown variable '" + tok.text + "' at position " + std::to_string(tok.pos));
    }
    if (check) check(tok, v);
    return Polynomial::variable(v);
  }
  ts.fail("expected integer or variable");
}

Polynomial parse_term(TokenStream& ts, const VarCheck& check) {
  bool negate = ts.accept(TokenKind::minus);
  Polynomial p = parse_factor(ts, check);
  while (ts.accept(TokenKind::star)) p *= parse_factor(ts, check);
  return negate ? -p : p;
}

}  // namespace

Polynomial parse_poly(TokenStream& ts, const VarCheck& check) {
  Polynomial p = parse_term(ts, check);
  for (;;) {
    if (ts.accept(TokenKind::plus)) {
      p += parse_term(ts, check);
    } else if (ts.accept(TokenKind::minus)) {
      p -= parse_term(ts, check);
    } else {
      return p;
    }
  }
}

}  // namespace psdrank::detail
