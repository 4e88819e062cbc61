#include "glab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "glab/error.hpp"
#include "glab/vec2.hpp"

namespace glab {

struct Expression::Node {
  enum class Kind { kConst, kVar, kAdd, kSub, kMul, kDiv, kPow, kNeg, kSin, kCos };
  Kind kind = Kind::kConst;
  double value = 0.0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

struct Dual {
  double v;
  double d;
};

Dual eval(const Expression::Node& n, double x) {
  switch (n.kind) {
    case Kind::kConst: return {n.value, 0.0};
    case Kind::kVar: return {x, 1.0};
    case Kind::kAdd: { auto p = eval(*n.a, x), q = eval(*n.b, x); return {p.v + q.v, p.d + q.d}; }
    case Kind::kSub: { auto p = eval(*n.a, x), q = eval(*n.b, x); return {p.v - q.v, p.d - q.d}; }
    case Kind::kMul: { auto p = eval(*n.a, x), q = eval(*n.b, x); return {p.v * q.v, p.d * q.v + p.v * q.d}; }
    case Kind::kDiv: {
      auto p = eval(*n.a, x), q = eval(*n.b, x);
      return {p.v / q.v, (p.d * q.v - p.v * q.d) / (q.v * q.v)};
    }
    case Kind::kPow: {
      auto p = eval(*n.a, x), q = eval(*n.b, x);
      const double v = std::pow(p.v, q.v);
      double d = q.v * std::pow(p.v, q.v - 1.0) * p.d;
      if (q.d != 0.0) d += v * std::log(p.v) * q.d;
      return {v, d};
    }
    case Kind::kNeg: { auto p = eval(*n.a, x); return {-p.v, -p.d}; }
    case Kind::kSin: { auto p = eval(*n.a, x); return {std::sin(p.v), std::cos(p.v) * p.d}; }
    case Kind::kCos: { auto p = eval(*n.a, x); return {std::cos(p.v), -std::sin(p.v) * p.d}; }
  }
  return {0.0, 0.0};
}

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  n->value = v;
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, std::string_view var) : s_(text), var_(var) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::kParse, "expression '" + std::string(s_) + "': " + why +
                                       " at column " + std::to_string(pos_ + 1));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
    return false;
  }
  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) n = make(Kind::kAdd, n, term());
      else if (accept('-')) n = make(Kind::kSub, n, term());
      else return n;
    }
  }
  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = make(Kind::kMul, n, unary());
      else if (accept('/')) n = make(Kind::kDiv, n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Kind::kNeg, unary());
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Kind::kPow, base, unary());
    return base;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("bad number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return make(Kind::kConst, nullptr, nullptr, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string_view id = s_.substr(start, pos_ - start);
      if (id == var_) return make(Kind::kVar);
      if (id == "pi") return make(Kind::kConst, nullptr, nullptr, kPi);
      if (id == "sin" || id == "cos") {
        if (!accept('(')) fail("expected '(' after " + std::string(id));
        NodePtr arg = expr();
        if (!accept(')')) fail("expected ')'");
        return make(id == "sin" ? Kind::kSin : Kind::kCos, arg);
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(id) + "' (variable is '" + std::string(var_) + "')");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::string_view var_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : root_(make(Kind::kConst)), text_("0") {}

Expression Expression::parse(std::string_view text, std::string_view variable) {
  Expression e;
  e.root_ = Parser(text, variable).parse();
  e.text_ = std::string(text);
  return e;
}

Expression Expression::constant(double value) {
  Expression e;
  e.root_ = make(Kind::kConst, nullptr, nullptr, value);
  e.text_ = std::to_string(value);
  return e;
}

double Expression::operator()(double x) const { return eval(*root_, x).v; }
double Expression::derivative(double x) const { return eval(*root_, x).d; }

}  // namespace glab
