#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fpcert/certificate.hpp"
#include "fpcert/metric_space.hpp"

namespace fpcert {

// Parse failure with a 1-based character position into the source text.
struct ExpressionError : std::invalid_argument {
  std::size_t position;

  ExpressionError(const std::string& message, std::size_t pos)
      : std::invalid_argument(message + " at position " + std::to_string(pos)),
        position(pos) {}
};

namespace expr {

enum class Fn1 { abs_fn, sqrt_fn, exp_fn, log_fn, sin_fn, cos_fn };
enum class Fn2 { min_fn, max_fn };

struct Node {
  enum class Kind {
    literal,
    variable,
    negate,
    add,
    sub,
    mul,
    div,
    call1,
    call2,
  };

  Kind kind = Kind::literal;
  double value = 0.0;      // literal
  std::size_t index = 0;   // variable, 0-based coordinate
  Fn1 fn1 = Fn1::abs_fn;
  Fn2 fn2 = Fn2::min_fn;
  std::unique_ptr<Node> a, b;
};

// Plain double arithmetic, one operation per node, so an expression and a
// handwritten lambda with the same operation order produce identical bits.
inline double eval(const Node& n, const Point& x) {
  switch (n.kind) {
    case Node::Kind::literal: return n.value;
    case Node::Kind::variable: return x[n.index];
    case Node::Kind::negate: return -eval(*n.a, x);
    case Node::Kind::add: return eval(*n.a, x) + eval(*n.b, x);
    case Node::Kind::sub: return eval(*n.a, x) - eval(*n.b, x);
    case Node::Kind::mul: return eval(*n.a, x) * eval(*n.b, x);
    case Node::Kind::div: return eval(*n.a, x) / eval(*n.b, x);
    case Node::Kind::call1:
      switch (n.fn1) {
        case Fn1::abs_fn: return std::fabs(eval(*n.a, x));
        case Fn1::sqrt_fn: return std::sqrt(eval(*n.a, x));
        case Fn1::exp_fn: return std::exp(eval(*n.a, x));
        case Fn1::log_fn: return std::log(eval(*n.a, x));
        case Fn1::sin_fn: return std::sin(eval(*n.a, x));
        case Fn1::cos_fn: return std::cos(eval(*n.a, x));
      }
      return quiet_nan();
    case Node::Kind::call2: {
      const double a = eval(*n.a, x);
      const double b = eval(*n.b, x);
      return n.fn2 == Fn2::min_fn ? std::fmin(a, b) : std::fmax(a, b);
    }
  }
  return quiet_nan();
}

namespace detail {

struct Parser {
  const std::string& text;
  std::size_t dimension;
  std::size_t pos = 0;  // 0-based cursor; reported positions are pos + 1

  explicit Parser(const std::string& t, std::size_t dim)
      : text(t), dimension(dim) {}

  [[noreturn]] void fail(const std::string& message, std::size_t at) const {
    throw ExpressionError(message, at + 1);
  }

  void skip_space() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  bool at_end() {
    skip_space();
    return pos >= text.size();
  }

  char peek() {
    skip_space();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::unique_ptr<Node> parse_sum() {
    auto node = parse_product();
    for (;;) {
      if (consume('+')) {
        auto rhs = parse_product();
        auto add = std::make_unique<Node>();
        add->kind = Node::Kind::add;
        add->a = std::move(node);
        add->b = std::move(rhs);
        node = std::move(add);
      } else if (consume('-')) {
        auto rhs = parse_product();
        auto sub = std::make_unique<Node>();
        sub->kind = Node::Kind::sub;
        sub->a = std::move(node);
        sub->b = std::move(rhs);
        node = std::move(sub);
      } else {
        return node;
      }
    }
  }

  std::unique_ptr<Node> parse_product() {
    auto node = parse_factor();
    for (;;) {
      if (consume('*')) {
        auto rhs = parse_factor();
        auto mul = std::make_unique<Node>();
        mul->kind = Node::Kind::mul;
        mul->a = std::move(node);
        mul->b = std::move(rhs);
        node = std::move(mul);
      } else if (consume('/')) {
        auto rhs = parse_factor();
        auto div = std::make_unique<Node>();
        div->kind = Node::Kind::div;
        div->a = std::move(node);
        div->b = std::move(rhs);
        node = std::move(div);
      } else {
        return node;
      }
    }
  }

  std::unique_ptr<Node> parse_factor() {
    if (consume('-')) {
      auto inner = parse_factor();
      auto neg = std::make_unique<Node>();
      neg->kind = Node::Kind::negate;
      neg->a = std::move(inner);
      return neg;
    }
    return parse_primary();
  }

  std::unique_ptr<Node> parse_primary() {
    skip_space();
    if (pos >= text.size()) fail("expected an operand", pos);
    const char c = text[pos];

    if (c == '(') {
      ++pos;
      auto inner = parse_sum();
      if (!consume(')')) fail("expected ')'", pos);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos + 1 < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[pos + 1])))) {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_identifier();
    }
    fail(std::string("unexpected character '") + c + "'", pos);
  }

  std::unique_ptr<Node> parse_number() {
    const char* begin = text.c_str() + pos;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) fail("expected a number", pos);
    pos += static_cast<std::size_t>(end - begin);
    auto node = std::make_unique<Node>();
    node->kind = Node::Kind::literal;
    node->value = value;
    return node;
  }

  std::unique_ptr<Node> parse_identifier() {
    const std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_')) {
      ++pos;
    }
    const std::string name = text.substr(start, pos - start);

    if (name.size() >= 2 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      const unsigned long idx = std::strtoul(name.c_str() + 1, nullptr, 10);
      if (idx == 0) {
        fail("coordinate variables start at x1", start);
      }
      if (idx > dimension) {
        fail("variable " + name + " exceeds dimension " +
                 std::to_string(dimension),
             start);
      }
      auto node = std::make_unique<Node>();
      node->kind = Node::Kind::variable;
      node->index = static_cast<std::size_t>(idx - 1);
      return node;
    }

    struct Fn1Entry { const char* name; Fn1 fn; };
    struct Fn2Entry { const char* name; Fn2 fn; };
    static constexpr Fn1Entry kUnary[] = {
        {"abs", Fn1::abs_fn}, {"sqrt", Fn1::sqrt_fn}, {"exp", Fn1::exp_fn},
        {"log", Fn1::log_fn}, {"sin", Fn1::sin_fn},   {"cos", Fn1::cos_fn}};
    static constexpr Fn2Entry kBinary[] = {{"min", Fn2::min_fn},
                                           {"max", Fn2::max_fn}};

    for (const auto& entry : kUnary) {
      if (name == entry.name) {
        if (!consume('(')) fail("expected '(' after " + name, pos);
        auto arg = parse_sum();
        if (!consume(')')) fail("expected ')'", pos);
        auto node = std::make_unique<Node>();
        node->kind = Node::Kind::call1;
        node->fn1 = entry.fn;
        node->a = std::move(arg);
        return node;
      }
    }
    for (const auto& entry : kBinary) {
      if (name == entry.name) {
        if (!consume('(')) fail("expected '(' after " + name, pos);
        auto first = parse_sum();
        if (!consume(',')) fail("expected ',' between arguments", pos);
        auto second = parse_sum();
        if (!consume(')')) fail("expected ')'", pos);
        auto node = std::make_unique<Node>();
        node->kind = Node::Kind::call2;
        node->fn2 = entry.fn;
        node->a = std::move(first);
        node->b = std::move(second);
        return node;
      }
    }
    fail("unknown identifier '" + name + "'", start);
  }
};

}  // namespace detail

struct ParsedExpression {
  std::vector<std::unique_ptr<Node>> parts;  // one per output coordinate
};

// One expression per output coordinate, separated by ';'. Variables x1..xk
// address the input coordinates; the part count must equal the dimension so
// the expression defines a self-map.
inline ParsedExpression parse_expression(const std::string& text,
                                         std::size_t dimension) {
  if (dimension == 0) {
    throw std::invalid_argument("parse_expression: dimension must be positive");
  }
  detail::Parser parser(text, dimension);
  ParsedExpression parsed;
  for (;;) {
    parsed.parts.push_back(parser.parse_sum());
    if (parser.at_end()) break;
    if (!parser.consume(';')) {
      parser.fail("unexpected token", parser.pos);
    }
  }
  if (parsed.parts.size() != dimension) {
    throw ExpressionError(
        "expression has " + std::to_string(parsed.parts.size()) +
            " coordinate part(s) but the space has dimension " +
            std::to_string(dimension),
        text.size() + 1);
  }
  return parsed;
}

}  // namespace expr

inline MapUnderTest make_expression_map(const std::string& text,
                                        const MetricSpaceHandle& space,
                                        const std::string& name = "") {
  auto parsed = std::make_shared<const expr::ParsedExpression>(
      expr::parse_expression(text, space.dimension()));
  return MapUnderTest(
      space,
      [parsed](const Point& x) {
        Point out(parsed->parts.size());
        for (std::size_t i = 0; i < parsed->parts.size(); ++i) {
          out[i] = expr::eval(*parsed->parts[i], x);
        }
        return out;
      },
      name.empty() ? text : name);
}

}  // namespace fpcert
