#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "psdrank/polynomial.hpp"

namespace psdrank::detail {

enum class TokenKind {
  integer,
  identifier,
  plus,
  minus,
  star,
  lparen,
  rparen,
  bang,
  amp,
  pipe,
  gt,
  ge,
  eq,
  ne,
  lt,
  le,
  end,
};

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view text);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool accept(TokenKind kind);
  const Token& expect(TokenKind kind, std::string_view what);
  [[noreturn]] void fail(const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Called for every variable token; may throw to reject it.
using VarCheck = std::function<void(const Token&, VarId)>;

/// poly := term {("+"|"-") term}; term := ["-"] factor {"*" factor}.
Polynomial parse_poly(TokenStream& ts, const VarCheck& check);

}  // namespace psdrank::detail
