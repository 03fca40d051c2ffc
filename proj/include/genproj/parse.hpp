#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "genproj/errors.hpp"
#include "genproj/poly.hpp"

namespace genproj {

namespace detail {

// Recursive-descent parser for
//   expr   := '-'? term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' nat)?
//   base   := rational | 'i' | var | '(' expr ')'
//   var    := 'u' nat          rational := int ('/' nat)?
class ExprParser {
public:
  ExprParser(std::string_view text, std::size_t num_vars) : text_(text), n_(num_vars) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool at_digit() const {
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  Integer digits(const char* what) {
    skip_ws();
    if (!at_digit()) fail(std::string("expected ") + what);
    std::size_t start = pos_;
    while (at_digit()) ++pos_;
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  Polynomial expr() {
    bool negate = accept('-');
    Polynomial acc = term();
    if (negate) acc = -acc;
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        break;
      }
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = factor();
    while (accept('*')) acc = acc * factor();
    return acc;
  }

  Polynomial factor() {
    Polynomial b = base();
    if (accept('^')) {
      std::size_t at = pos_;
      Integer e = digits("natural number exponent");
      if (e > 100000) {
        pos_ = at;
        fail("exponent too large");
      }
      b = b.pow(e.convert_to<unsigned>());
    }
    return b;
  }

  Polynomial base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c == 'i') {
      ++pos_;
      return Polynomial::constant(n_, GaussRational::imaginary_unit());
    }
    if (c == 'u') {
      std::size_t at = pos_;
      ++pos_;
      if (!at_digit()) fail("expected variable index after 'u'");
      std::size_t start = pos_;
      while (at_digit()) ++pos_;
      Integer idx(std::string(text_.substr(start, pos_ - start)));
      if (idx < 1 || idx > n_) {
        pos_ = at;
        fail("variable index out of range (have " + std::to_string(n_) + " variables)");
      }
      return Polynomial::variable(n_, idx.convert_to<std::size_t>() - 1);
    }
    if (at_digit()) {
      Integer num = digits("integer");
      Rational value(num);
      if (accept('/')) {
        std::size_t at = pos_;
        Integer den = digits("denominator");
        if (den == 0) {
          pos_ = at;
          fail("zero denominator");
        }
        value = Rational(num, den);
      }
      return Polynomial::constant(n_, GaussRational(value));
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses an expression in variables u1..u{num_vars} into canonical form.
/// Throws ParseError carrying the 0-based offset of the offending character.
inline Polynomial parse_poly(std::string_view text, std::size_t num_vars) {
  return detail::ExprParser(text, num_vars).parse();
}

/// Parses a variable-free expression such as "3/2", "-i" or "(1 + 2*i)".
inline GaussRational parse_constant(std::string_view text) {
  Polynomial p = parse_poly(text, 0);
  return p.coefficient(Exponent{});
}

}  // namespace genproj
