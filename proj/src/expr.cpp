#include "aplab/expr.hpp"

#include <cmath>
#include <cstring>
#include <functional>

namespace aplab::expr {

namespace {

enum class Op {
  Const, Var, Neg,
  Add, Sub, Mul, Div, Pow,
  Conj, Re, Im, Abs, Exp, Log, Sqrt, Sin, Cos,
};

}  // namespace

struct Expression::Node {
  Op op = Op::Const;
  cplx value;
  int slot = 0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

struct Parser {
  const std::string& s;
  std::size_t pos = 0;
  const std::vector<std::string>& vars;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::SchemaError,
                "expression error at position " + std::to_string(pos) + " in '" +
                    s + "': " + msg);
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  NodePtr constant(cplx v) {
    auto n = std::make_shared<Expression::Node>();
    n->op = Op::Const;
    n->value = v;
    return n;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      skip_ws();
      if (eat('+'))
        lhs = make(Op::Add, lhs, parse_term());
      else if (eat('-'))
        lhs = make(Op::Sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      skip_ws();
      if (eat('*'))
        lhs = make(Op::Mul, lhs, parse_unary());
      else if (eat('/'))
        lhs = make(Op::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    skip_ws();
    if (eat('-')) return make(Op::Neg, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    skip_ws();
    if (eat('^')) return make(Op::Pow, base, parse_unary());
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of expression");
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = std::stod(s.substr(pos), &used);
      pos += used;
      return constant(cplx(v, 0.0));
    }
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr();
      if (!eat(')')) fail("missing ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
        ++pos;
      std::string name = s.substr(start, pos - start);
      skip_ws();
      if (pos < s.size() && s[pos] == '(') {
        ++pos;
        std::vector<NodePtr> args;
        if (!eat(')')) {
          args.push_back(parse_expr());
          while (eat(',')) args.push_back(parse_expr());
          if (!eat(')')) fail("missing ')' after arguments of " + name);
        }
        return call(name, std::move(args), start);
      }
      if (name == "i") return constant(cplx(0.0, 1.0));
      if (name == "pi") return constant(cplx(kPi, 0.0));
      for (std::size_t v = 0; v < vars.size(); ++v)
        if (vars[v] == name) {
          auto n = std::make_shared<Expression::Node>();
          n->op = Op::Var;
          n->slot = static_cast<int>(v);
          return n;
        }
      pos = start;
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr call(const std::string& name, std::vector<NodePtr> args, std::size_t at) {
    auto unary = [&](Op op) {
      if (args.size() != 1) {
        pos = at;
        fail(name + " takes one argument");
      }
      return make(op, args[0]);
    };
    if (name == "conj") return unary(Op::Conj);
    if (name == "re") return unary(Op::Re);
    if (name == "im") return unary(Op::Im);
    if (name == "abs") return unary(Op::Abs);
    if (name == "exp") return unary(Op::Exp);
    if (name == "log") return unary(Op::Log);
    if (name == "sqrt") return unary(Op::Sqrt);
    if (name == "sin") return unary(Op::Sin);
    if (name == "cos") return unary(Op::Cos);
    if (name == "pow") {
      if (args.size() != 2) {
        pos = at;
        fail("pow takes two arguments");
      }
      return make(Op::Pow, args[0], args[1]);
    }
    pos = at;
    fail("unknown function '" + name + "'");
  }
};

cplx eval_node(const Expression::Node& n, std::span<const cplx> vals) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return vals[n.slot];
    case Op::Neg: return -eval_node(*n.a, vals);
    case Op::Add: return eval_node(*n.a, vals) + eval_node(*n.b, vals);
    case Op::Sub: return eval_node(*n.a, vals) - eval_node(*n.b, vals);
    case Op::Mul: return eval_node(*n.a, vals) * eval_node(*n.b, vals);
    case Op::Div: return eval_node(*n.a, vals) / eval_node(*n.b, vals);
    case Op::Pow: {
      cplx base = eval_node(*n.a, vals);
      cplx e = eval_node(*n.b, vals);
      double er = e.real();
      if (e.imag() == 0.0 && er == std::floor(er) && std::abs(er) <= 64.0) {
        long k = static_cast<long>(er);
        cplx acc(1.0, 0.0);
        cplx b = (k >= 0) ? base : cplx(1.0, 0.0) / base;
        for (long q = std::labs(k); q > 0; --q) acc *= b;
        return acc;
      }
      return std::pow(base, e);
    }
    case Op::Conj: return std::conj(eval_node(*n.a, vals));
    case Op::Re: return {eval_node(*n.a, vals).real(), 0.0};
    case Op::Im: return {eval_node(*n.a, vals).imag(), 0.0};
    case Op::Abs: return {std::abs(eval_node(*n.a, vals)), 0.0};
    case Op::Exp: return std::exp(eval_node(*n.a, vals));
    case Op::Log: return std::log(eval_node(*n.a, vals));
    case Op::Sqrt: return std::sqrt(eval_node(*n.a, vals));
    case Op::Sin: return std::sin(eval_node(*n.a, vals));
    case Op::Cos: return std::cos(eval_node(*n.a, vals));
  }
  return {0.0, 0.0};
}

}  // namespace

Expression Expression::parse(const std::string& text,
                             const std::vector<std::string>& variables) {
  Parser p{text, 0, variables};
  Expression e;
  e.root_ = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing characters");
  e.text_ = text;
  e.num_vars_ = variables.size();
  return e;
}

cplx Expression::eval(std::span<const cplx> values) const {
  if (!root_) throw Error(ErrorCode::InvalidArgument, "empty expression");
  if (values.size() < num_vars_)
    throw Error(ErrorCode::InvalidArgument, "expression variable values missing");
  return eval_node(*root_, values);
}

}  // namespace aplab::expr
