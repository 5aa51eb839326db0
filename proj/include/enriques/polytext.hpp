#pragma once

#include <string>

#include "enriques/bipoly.hpp"

namespace enriques {

// Recursive-descent parser for the CLI polynomial grammar:
// variables x1, x2 (aliases x, y), integer (and a/b rational) literals,
// + - * ^ and parentheses.  Errors carry the byte offset.
class PolyParser {
 public:
  PolyParser(std::string text, FieldSpec fs) : text_(std::move(text)), fs_(fs) {}

  BiPoly parse() {
    BiPoly r = expr();
    skip_ws();
    if (pos_ != text_.size()) err("unexpected trailing input");
    return r;
  }

 private:
  [[noreturn]] void err(const std::string& msg) {
    fail(Errc::ParseError, msg + " at offset " + std::to_string(pos_), {(long)pos_});
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  BiPoly expr() {
    bool neg = false;
    skip_ws();
    if (eat('-'))
      neg = true;
    else
      eat('+');
    BiPoly acc = term();
    if (neg) acc = -acc;
    for (;;) {
      if (eat('+'))
        acc += term();
      else if (eat('-'))
        acc -= term();
      else
        break;
    }
    return acc;
  }

  BiPoly term() {
    BiPoly acc = factor();
    while (eat('*')) acc *= factor();
    return acc;
  }

  BiPoly factor() {
    BiPoly base = primary();
    if (eat('^')) {
      long e = integer_literal("exponent expected");
      if (e < 0) err("negative exponent");
      return base.pow((int)e);
    }
    return base;
  }

  BiPoly primary() {
    skip_ws();
    if (pos_ >= text_.size()) err("operand expected");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      BiPoly inner = expr();
      if (!eat(')')) err("')' expected");
      return inner;
    }
    if (c >= '0' && c <= '9') {
      mpz_class num = natural_literal();
      if (peek() == '/') {
        ++pos_;
        mpz_class den = natural_literal();
        if (den == 0) err("zero denominator");
        return BiPoly::constant(Scalar::of_mpq(fs_, mpq_class(num, den)));
      }
      return BiPoly::constant(Scalar::of_mpq(fs_, mpq_class(num)));
    }
    if (c == 'x') {
      ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '1') {
        ++pos_;
        return BiPoly::var_x(fs_);
      }
      if (pos_ < text_.size() && text_[pos_] == '2') {
        ++pos_;
        return BiPoly::var_y(fs_);
      }
      return BiPoly::var_x(fs_);
    }
    if (c == 'y') {
      ++pos_;
      return BiPoly::var_y(fs_);
    }
    err("operand expected");
  }

  mpz_class natural_literal() {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] < '0' || text_[pos_] > '9') err("digit expected");
    mpz_class v = 0;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  long integer_literal(const std::string& what) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] < '0' || text_[pos_] > '9') err(what);
    mpz_class v = natural_literal();
    if (v > 1000000) err("exponent too large");
    return v.get_si();
  }

  std::string text_;
  FieldSpec fs_;
  size_t pos_ = 0;
};

inline BiPoly parse_polynomial(const std::string& text, const FieldSpec& fs) {
  return PolyParser(text, fs).parse();
}

// Canonical printer: terms in descending graded-lex order; output re-parses
// to the same polynomial over the same field.
inline std::string poly_to_string(const BiPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  // map iterates ascending graded-lex; walk it backwards
  std::vector<std::pair<Exp, Scalar>> ts(f.terms().begin(), f.terms().end());
  for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
    auto& [e, c] = *it;
    mpq_class v = c.value();
    bool neg = v < 0 && !c.spec().dual;
    mpq_class av = neg ? mpq_class(-v) : v;
    std::string cs;
    if (c.spec().dual && !c.deriv_part().is_zero()) {
      cs = "(" + c.str() + ")";  // dual coefficients are display-only
      neg = false;
    } else {
      cs = av.get_str();
    }
    std::string mono;
    if (e.dx > 0) mono += "x" + (e.dx > 1 ? "^" + std::to_string(e.dx) : "");
    if (e.dy > 0) mono += (mono.empty() ? "" : "*") + std::string("y") +
                          (e.dy > 1 ? "^" + std::to_string(e.dy) : "");
    std::string body;
    if (mono.empty())
      body = cs;
    else if (cs == "1")
      body = mono;
    else
      body = cs + "*" + mono;
    if (out.empty())
      out = (neg ? "-" : "") + body;
    else
      out += (neg ? " - " : " + ") + body;
  }
  return out;
}

}  // namespace enriques
