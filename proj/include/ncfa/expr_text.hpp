#pragma once

// Prefix S-expression grammar for rational/meromorphic expressions:
//   expr := (const <number>) | (var <i>) | (leaf <path>)
//         | (add e1 e2 ...) | (sub e1 e2) | (mul e1 e2 ...)
//         | (inv e) | (neg e)
// Numbers are re or re+imi / re-imi. add/mul with more than two operands
// fold left; sub/neg desugar through mul by -1 so only the core node kinds
// remain. (leaf p) loads a series file through the supplied loader.

#include <cctype>
#include <functional>
#include <string>

#include "ncfa/realization.hpp"
#include "ncfa/series_io.hpp"

namespace ncfa {

using SeriesLoader = std::function<FreeSeries(const std::string&)>;

namespace detail {

struct ExprParser {
  const std::string& text;
  std::size_t pos = 0;
  SeriesLoader loader;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    if (pos >= text.size()) throw std::runtime_error("expr parse: unexpected end of input");
    return text[pos];
  }
  void expect(char c) {
    if (peek() != c) throw std::runtime_error(std::string("expr parse: expected '") + c + "' at position " + std::to_string(pos));
    ++pos;
  }
  std::string token() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '(' && text[pos] != ')')
      ++pos;
    if (start == pos) throw std::runtime_error("expr parse: expected a token at position " + std::to_string(pos));
    return text.substr(start, pos - start);
  }

  cplx parse_number(const std::string& tok) {
    const char* s = tok.c_str();
    char* end = nullptr;
    double re = std::strtod(s, &end);
    if (end == s) throw std::runtime_error("expr parse: bad number " + tok);
    if (*end == '\0') return cplx(re, 0.0);
    const char* imstart = end;
    char* imend = nullptr;
    double im = std::strtod(imstart, &imend);
    if (imend == imstart || *imend != 'i' || *(imend + 1) != '\0')
      throw std::runtime_error("expr parse: bad number " + tok);
    return cplx(re, im);
  }

  ExprPtr parse() {
    expect('(');
    std::string head = token();
    ExprPtr result;
    if (head == "const") {
      result = Expr::constant(parse_number(token()));
    } else if (head == "var") {
      result = Expr::variable(std::stoi(token()));
    } else if (head == "leaf") {
      if (!loader) throw std::runtime_error("expr parse: no series loader supplied for (leaf ...)");
      result = Expr::leaf(loader(token()));
    } else if (head == "inv" || head == "neg") {
      ExprPtr child = parse();
      result = head == "inv" ? Expr::inv(child) : Expr::neg(child);
    } else if (head == "add" || head == "mul" || head == "sub") {
      ExprPtr acc = parse();
      int operands = 1;
      while (peek() != ')') {
        ExprPtr next = parse();
        ++operands;
        if (head == "add")
          acc = Expr::add(acc, next);
        else if (head == "mul")
          acc = Expr::mul(acc, next);
        else
          acc = Expr::sub(acc, next);
      }
      if (operands < 2) throw std::runtime_error("expr parse: '" + head + "' needs at least two operands");
      if (head == "sub" && operands != 2) throw std::runtime_error("expr parse: 'sub' takes exactly two operands");
      result = acc;
    } else {
      throw std::runtime_error("expr parse: unknown head '" + head + "'");
    }
    expect(')');
    return result;
  }
};

}  // namespace detail

inline ExprPtr parse_expr(const std::string& text, SeriesLoader loader = {}) {
  detail::ExprParser p{text, 0, std::move(loader)};
  ExprPtr e = p.parse();
  p.skip_ws();
  if (p.pos != text.size()) throw std::runtime_error("expr parse: trailing input after expression");
  return e;
}

inline std::string print_expr(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Const: {
      char buf[96];
      if (e->value.imag() == 0.0)
        std::snprintf(buf, sizeof buf, "(const %.17g)", e->value.real());
      else
        std::snprintf(buf, sizeof buf, "(const %.17g%+.17gi)", e->value.real(), e->value.imag());
      return buf;
    }
    case Expr::Kind::Var:
      return "(var " + std::to_string(e->var) + ")";
    case Expr::Kind::Leaf:
      return "(leaf <series>)";
    case Expr::Kind::Add:
      return "(add " + print_expr(e->a) + " " + print_expr(e->b) + ")";
    case Expr::Kind::Mul:
      return "(mul " + print_expr(e->a) + " " + print_expr(e->b) + ")";
    case Expr::Kind::Inv:
      return "(inv " + print_expr(e->a) + ")";
  }
  return "?";
}

}  // namespace ncfa
