#include "coarse/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

namespace coarse {

struct Expression::Node {
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Exp, Log, Abs, Min, Max };
  Kind kind;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using Kind = Node::Kind;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->value = v;
  return n;
}

NodePtr make_node(Kind k, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr run() {
    if (src_.find_first_not_of(" \t\r\n") == std::string_view::npos)
      throw ParseError("empty expression", 0);
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (accept('+'))
        lhs = make_node(Kind::Add, lhs, term());
      else if (accept('-'))
        lhs = make_node(Kind::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (true) {
      if (accept('*'))
        lhs = make_node(Kind::Mul, lhs, unary());
      else if (accept('/'))
        lhs = make_node(Kind::Div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_node(Kind::Neg, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make_node(Kind::Pow, base, unary());
    return base;
  }

  NodePtr atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError("expected number, 'x', function or '('", pos_);
  }

  NodePtr number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    // exponent suffix: 1e-3, 2.5E+10
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' belongs to something else
      }
    }
    std::string text(src_.substr(start, pos_ - start));
    try {
      std::size_t used = 0;
      double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return make_number(v);
    } catch (const std::exception&) {
      throw ParseError("malformed number '" + text + "'", start);
    }
  }

  NodePtr identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (name == "x") {
      auto n = std::make_shared<Node>();
      n->kind = Kind::Var;
      return n;
    }
    Kind k;
    int arity;
    if (name == "exp") {
      k = Kind::Exp;
      arity = 1;
    } else if (name == "log") {
      k = Kind::Log;
      arity = 1;
    } else if (name == "abs") {
      k = Kind::Abs;
      arity = 1;
    } else if (name == "min") {
      k = Kind::Min;
      arity = 2;
    } else if (name == "max") {
      k = Kind::Max;
      arity = 2;
    } else {
      throw ParseError("unknown identifier '" + name + "'", start);
    }
    expect('(');
    NodePtr a = expr();
    NodePtr b;
    if (arity == 2) {
      expect(',');
      b = expr();
    }
    expect(')');
    return make_node(k, a, b);
  }
};

double eval_node(const Node& n, double x) {
  double v;
  switch (n.kind) {
    case Kind::Number: v = n.value; break;
    case Kind::Var: v = x; break;
    case Kind::Neg: v = -eval_node(*n.a, x); break;
    case Kind::Add: v = eval_node(*n.a, x) + eval_node(*n.b, x); break;
    case Kind::Sub: v = eval_node(*n.a, x) - eval_node(*n.b, x); break;
    case Kind::Mul: v = eval_node(*n.a, x) * eval_node(*n.b, x); break;
    case Kind::Div: v = eval_node(*n.a, x) / eval_node(*n.b, x); break;
    case Kind::Pow: v = std::pow(eval_node(*n.a, x), eval_node(*n.b, x)); break;
    case Kind::Exp: v = std::exp(eval_node(*n.a, x)); break;
    case Kind::Log: v = std::log(eval_node(*n.a, x)); break;
    case Kind::Abs: v = std::abs(eval_node(*n.a, x)); break;
    case Kind::Min: v = std::min(eval_node(*n.a, x), eval_node(*n.b, x)); break;
    case Kind::Max: v = std::max(eval_node(*n.a, x), eval_node(*n.b, x)); break;
    default: throw EvalError("corrupt expression node");
  }
  if (!std::isfinite(v))
    throw EvalError("expression is not finite at x = " + std::to_string(x));
  return v;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::Number: out += format_number(n.value); return;
    case Kind::Var: out += 'x'; return;
    case Kind::Neg:
      out += "(-";
      print_node(*n.a, out);
      out += ')';
      return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
    case Kind::Pow: {
      char op = n.kind == Kind::Add   ? '+'
                : n.kind == Kind::Sub ? '-'
                : n.kind == Kind::Mul ? '*'
                : n.kind == Kind::Div ? '/'
                                      : '^';
      out += '(';
      print_node(*n.a, out);
      out += op;
      print_node(*n.b, out);
      out += ')';
      return;
    }
    case Kind::Exp:
    case Kind::Log:
    case Kind::Abs: {
      out += n.kind == Kind::Exp ? "exp(" : n.kind == Kind::Log ? "log(" : "abs(";
      print_node(*n.a, out);
      out += ')';
      return;
    }
    case Kind::Min:
    case Kind::Max: {
      out += n.kind == Kind::Min ? "min(" : "max(";
      print_node(*n.a, out);
      out += ',';
      print_node(*n.b, out);
      out += ')';
      return;
    }
  }
}

bool nodes_identical(const Node* a, const Node* b) {
  if (a == nullptr || b == nullptr) return a == b;
  if (a->kind != b->kind) return false;
  if (a->kind == Kind::Number && !(a->value == b->value)) return false;
  return nodes_identical(a->a.get(), b->a.get()) && nodes_identical(a->b.get(), b->b.get());
}

}  // namespace

Expression Expression::parse(std::string_view source) {
  return Expression(Parser(source).run());
}

double Expression::eval(double x) const { return eval_node(*root_, x); }

std::string Expression::to_string() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool Expression::identical(const Expression& other) const {
  return nodes_identical(root_.get(), other.root_.get());
}

}  // namespace coarse
