#include "cgholo/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "cgholo/error.hpp"

namespace cgholo {
namespace detail {

enum class Fn { Sin, Cos, Tan, Exp, Log, Sqrt };

struct Node {
  enum class Kind { Num, Var, Add, Sub, Mul, Div, Neg, Pow, Fun };
  Kind kind;
  double num = 0.0;       // Num
  int var = -1;           // Var
  double expo = 0.0;      // Pow
  Fn fn = Fn::Sin;        // Fun
  std::shared_ptr<const Node> a, b;
};

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_num(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Num;
  n->num = v;
  return n;
}
NodePtr make_var(int idx) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Var;
  n->var = idx;
  return n;
}
NodePtr make_bin(Node::Kind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}
NodePtr make_neg(NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Neg;
  n->a = std::move(a);
  return n;
}
NodePtr make_pow(NodePtr a, double e) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Pow;
  n->a = std::move(a);
  n->expo = e;
  return n;
}
NodePtr make_fun(Fn f, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Fun;
  n->fn = f;
  n->a = std::move(a);
  return n;
}

struct Token {
  enum class Kind { Num, Ident, Op, LParen, RParen, End };
  Kind kind;
  double num = 0.0;
  std::string text;
  char op = 0;
  std::size_t offset = 0;
};

class Lexer {
public:
  explicit Lexer(const std::string& s) : s_(s) { advance(); }
  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    tok_ = Token{};
    tok_.offset = pos_;
    if (pos_ >= s_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end;
      try {
        tok_.num = std::stod(s_.substr(pos_), &end);
      } catch (const std::exception&) {
        throw ParseError("malformed number", pos_);
      }
      tok_.kind = Token::Kind::Num;
      pos_ += end;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      tok_.kind = Token::Kind::Ident;
      tok_.text = s_.substr(start, pos_ - start);
      return;
    }
    if (c == '(') {
      tok_.kind = Token::Kind::LParen;
      ++pos_;
      return;
    }
    if (c == ')') {
      tok_.kind = Token::Kind::RParen;
      ++pos_;
      return;
    }
    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      tok_.kind = Token::Kind::Op;
      tok_.op = c;
      ++pos_;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
public:
  Parser(const std::string& text, const std::vector<std::string>& vars)
      : lex_(text), vars_(vars) {}

  NodePtr parse() {
    NodePtr e = expr();
    if (lex_.peek().kind != Token::Kind::End)
      throw ParseError("trailing input", lex_.peek().offset);
    return e;
  }

private:
  NodePtr expr() {
    NodePtr lhs = term();
    while (lex_.peek().kind == Token::Kind::Op &&
           (lex_.peek().op == '+' || lex_.peek().op == '-')) {
      char op = lex_.next().op;
      NodePtr rhs = term();
      lhs = make_bin(op == '+' ? Node::Kind::Add : Node::Kind::Sub, lhs, rhs);
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (lex_.peek().kind == Token::Kind::Op &&
           (lex_.peek().op == '*' || lex_.peek().op == '/')) {
      char op = lex_.next().op;
      NodePtr rhs = unary();
      lhs = make_bin(op == '*' ? Node::Kind::Mul : Node::Kind::Div, lhs, rhs);
    }
    return lhs;
  }

  NodePtr unary() {
    if (lex_.peek().kind == Token::Kind::Op && lex_.peek().op == '-') {
      lex_.next();
      NodePtr inner = unary();
      // fold a negated literal so the printer's "(-c)" re-parses identically
      if (inner->kind == Node::Kind::Num) return make_num(-inner->num);
      return make_neg(inner);
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (lex_.peek().kind == Token::Kind::Op && lex_.peek().op == '^') {
      std::size_t caret = lex_.next().offset;
      NodePtr e = unary();
      double val;
      if (!fold_constant(e, &val))
        throw ParseError("exponent must be a constant", caret);
      return make_pow(base, val);
    }
    return base;
  }

  NodePtr atom() {
    Token t = lex_.next();
    switch (t.kind) {
      case Token::Kind::Num:
        return make_num(t.num);
      case Token::Kind::LParen: {
        NodePtr e = expr();
        if (lex_.peek().kind != Token::Kind::RParen)
          throw ParseError("expected ')'", lex_.peek().offset);
        lex_.next();
        return e;
      }
      case Token::Kind::Ident: {
        if (lex_.peek().kind == Token::Kind::LParen) {
          Fn fn;
          if (t.text == "sin") fn = Fn::Sin;
          else if (t.text == "cos") fn = Fn::Cos;
          else if (t.text == "tan") fn = Fn::Tan;
          else if (t.text == "exp") fn = Fn::Exp;
          else if (t.text == "log") fn = Fn::Log;
          else if (t.text == "sqrt") fn = Fn::Sqrt;
          else throw ParseError("unknown function '" + t.text + "'", t.offset);
          lex_.next();
          NodePtr arg = expr();
          if (lex_.peek().kind != Token::Kind::RParen)
            throw ParseError("expected ')'", lex_.peek().offset);
          lex_.next();
          return make_fun(fn, arg);
        }
        for (std::size_t i = 0; i < vars_.size(); ++i)
          if (vars_[i] == t.text) return make_var(static_cast<int>(i));
        throw ParseError("unknown identifier '" + t.text + "'", t.offset);
      }
      default:
        throw ParseError("expected a value", t.offset);
    }
  }

  static bool fold_constant(const NodePtr& n, double* out) {
    switch (n->kind) {
      case Node::Kind::Num:
        *out = n->num;
        return true;
      case Node::Kind::Var:
        return false;
      case Node::Kind::Neg: {
        double a;
        if (!fold_constant(n->a, &a)) return false;
        *out = -a;
        return true;
      }
      case Node::Kind::Pow: {
        double a;
        if (!fold_constant(n->a, &a)) return false;
        *out = std::pow(a, n->expo);
        return true;
      }
      case Node::Kind::Fun:
        return false;
      default: {
        double a, b;
        if (!fold_constant(n->a, &a) || !fold_constant(n->b, &b)) return false;
        switch (n->kind) {
          case Node::Kind::Add: *out = a + b; return true;
          case Node::Kind::Sub: *out = a - b; return true;
          case Node::Kind::Mul: *out = a * b; return true;
          case Node::Kind::Div: *out = a / b; return true;
          default: return false;
        }
      }
    }
  }

  Lexer lex_;
  const std::vector<std::string>& vars_;
};

// ---- evaluation ---------------------------------------------------------

template <class T, class ConstFn, class VarFn>
T eval_node(const Node* n, const ConstFn& mk_const, const VarFn& mk_var) {
  switch (n->kind) {
    case Node::Kind::Num: return mk_const(n->num);
    case Node::Kind::Var: return mk_var(n->var);
    case Node::Kind::Add:
      return eval_node<T>(n->a.get(), mk_const, mk_var) + eval_node<T>(n->b.get(), mk_const, mk_var);
    case Node::Kind::Sub:
      return eval_node<T>(n->a.get(), mk_const, mk_var) - eval_node<T>(n->b.get(), mk_const, mk_var);
    case Node::Kind::Mul:
      return eval_node<T>(n->a.get(), mk_const, mk_var) * eval_node<T>(n->b.get(), mk_const, mk_var);
    case Node::Kind::Div:
      return eval_node<T>(n->a.get(), mk_const, mk_var) / eval_node<T>(n->b.get(), mk_const, mk_var);
    case Node::Kind::Neg: return -eval_node<T>(n->a.get(), mk_const, mk_var);
    case Node::Kind::Pow: return pow(eval_node<T>(n->a.get(), mk_const, mk_var), n->expo);
    case Node::Kind::Fun: {
      T a = eval_node<T>(n->a.get(), mk_const, mk_var);
      switch (n->fn) {
        case Fn::Sin: return sin(a);
        case Fn::Cos: return cos(a);
        case Fn::Tan: return tan(a);
        case Fn::Exp: return exp(a);
        case Fn::Log: return log(a);
        case Fn::Sqrt: return sqrt(a);
      }
    }
  }
  throw Error("corrupt expression tree");
}

double eval_plain(const Node* n, const Vec& p) {
  switch (n->kind) {
    case Node::Kind::Num: return n->num;
    case Node::Kind::Var: return p[n->var];
    case Node::Kind::Add: return eval_plain(n->a.get(), p) + eval_plain(n->b.get(), p);
    case Node::Kind::Sub: return eval_plain(n->a.get(), p) - eval_plain(n->b.get(), p);
    case Node::Kind::Mul: return eval_plain(n->a.get(), p) * eval_plain(n->b.get(), p);
    case Node::Kind::Div: {
      double d = eval_plain(n->b.get(), p);
      if (d == 0.0) throw DomainError("division by zero");
      return eval_plain(n->a.get(), p) / d;
    }
    case Node::Kind::Neg: return -eval_plain(n->a.get(), p);
    case Node::Kind::Pow: return std::pow(eval_plain(n->a.get(), p), n->expo);
    case Node::Kind::Fun: {
      double a = eval_plain(n->a.get(), p);
      switch (n->fn) {
        case Fn::Sin: return std::sin(a);
        case Fn::Cos: return std::cos(a);
        case Fn::Tan: return std::tan(a);
        case Fn::Exp: return std::exp(a);
        case Fn::Log:
          if (a <= 0.0) throw DomainError("log of non-positive value");
          return std::log(a);
        case Fn::Sqrt:
          if (a < 0.0) throw DomainError("sqrt of negative value");
          return std::sqrt(a);
      }
    }
  }
  throw Error("corrupt expression tree");
}

// ---- printing -----------------------------------------------------------

int prec(const Node* n) {
  switch (n->kind) {
    case Node::Kind::Add:
    case Node::Kind::Sub: return 1;
    case Node::Kind::Mul:
    case Node::Kind::Div: return 2;
    case Node::Kind::Neg: return 3;
    case Node::Kind::Pow: return 4;
    default: return 5;
  }
}

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_node(const Node* n, const std::vector<std::string>& vars, std::ostringstream& out) {
  auto child = [&](const Node* c, int min_prec) {
    bool parens = prec(c) < min_prec;
    if (parens) out << '(';
    print_node(c, vars, out);
    if (parens) out << ')';
  };
  switch (n->kind) {
    case Node::Kind::Num:
      if (n->num < 0) {
        out << '(' << fmt_num(n->num) << ')';
      } else {
        out << fmt_num(n->num);
      }
      return;
    case Node::Kind::Var: out << vars[n->var]; return;
    case Node::Kind::Add:
      child(n->a.get(), 1);
      out << " + ";
      child(n->b.get(), 2);
      return;
    case Node::Kind::Sub:
      child(n->a.get(), 1);
      out << " - ";
      child(n->b.get(), 2);
      return;
    case Node::Kind::Mul:
      child(n->a.get(), 2);
      out << "*";
      child(n->b.get(), 3);
      return;
    case Node::Kind::Div:
      child(n->a.get(), 2);
      out << "/";
      child(n->b.get(), 3);
      return;
    case Node::Kind::Neg:
      out << "-";
      child(n->a.get(), 3);
      return;
    case Node::Kind::Pow:
      child(n->a.get(), 5);
      out << "^";
      if (n->expo < 0) {
        out << '(' << fmt_num(n->expo) << ')';
      } else {
        out << fmt_num(n->expo);
      }
      return;
    case Node::Kind::Fun: {
      const char* names[] = {"sin", "cos", "tan", "exp", "log", "sqrt"};
      out << names[static_cast<int>(n->fn)] << '(';
      print_node(n->a.get(), vars, out);
      out << ')';
      return;
    }
  }
}

NodePtr subst_node(const NodePtr& n, int var, const NodePtr& repl) {
  if (n->kind == Node::Kind::Var) return n->var == var ? repl : n;
  if (!n->a) return n;
  auto m = std::make_shared<Node>(*n);
  m->a = subst_node(n->a, var, repl);
  if (n->b) m->b = subst_node(n->b, var, repl);
  return m;
}

bool same_node(const Node* a, const Node* b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Node::Kind::Num: return a->num == b->num;
    case Node::Kind::Var: return a->var == b->var;
    case Node::Kind::Pow: return a->expo == b->expo && same_node(a->a.get(), b->a.get());
    case Node::Kind::Fun: return a->fn == b->fn && same_node(a->a.get(), b->a.get());
    case Node::Kind::Neg: return same_node(a->a.get(), b->a.get());
    default: return same_node(a->a.get(), b->a.get()) && same_node(a->b.get(), b->b.get());
  }
}

}  // namespace detail

Expr Expr::parse(const std::string& text, const std::vector<std::string>& vars) {
  if (text.empty()) throw ParseError("empty expression", 0);
  detail::Parser p(text, vars);
  return Expr(p.parse(), vars);
}

Expr Expr::number(double v, const std::vector<std::string>& vars) {
  return Expr(detail::make_num(v), vars);
}

Expr Expr::var(const std::string& name, const std::vector<std::string>& vars) {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return Expr(detail::make_var(static_cast<int>(i)), vars);
  throw Error("unknown variable '" + name + "'");
}

std::string Expr::str() const {
  std::ostringstream out;
  detail::print_node(root_.get(), vars_, out);
  return out.str();
}

double Expr::eval(const Vec& point) const { return detail::eval_plain(root_.get(), point); }

Jet2 Expr::eval_jet2(const Vec& point) const {
  int n = static_cast<int>(vars_.size());
  return detail::eval_node<Jet2>(
      root_.get(), [n](double c) { return Jet2::constant(c, n); },
      [n, &point](int i) { return Jet2::variable(point[i], i, n); });
}

Taylor4 Expr::eval_taylor4(double t0) const {
  if (vars_.size() != 1) throw Error("eval_taylor4 requires a univariate expression");
  return detail::eval_node<Taylor4>(
      root_.get(), [](double c) { return Taylor4::constant(c); },
      [t0](int) { return Taylor4::variable(t0); });
}

Expr Expr::substitute(const std::string& name, const Expr& e) const {
  int idx = -1;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) idx = static_cast<int>(i);
  if (idx < 0) throw Error("unknown variable '" + name + "'");
  return Expr(detail::subst_node(root_, idx, e.root_), vars_);
}

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(detail::make_bin(detail::Node::Kind::Add, a.root_, b.root_), a.vars_);
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr(detail::make_bin(detail::Node::Kind::Sub, a.root_, b.root_), a.vars_);
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(detail::make_bin(detail::Node::Kind::Mul, a.root_, b.root_), a.vars_);
}
Expr operator/(const Expr& a, const Expr& b) {
  return Expr(detail::make_bin(detail::Node::Kind::Div, a.root_, b.root_), a.vars_);
}
Expr operator-(const Expr& a) { return Expr(detail::make_neg(a.root_), a.vars_); }
Expr operator*(double c, const Expr& a) {
  return Expr(detail::make_bin(detail::Node::Kind::Mul, detail::make_num(c), a.root_), a.vars_);
}

bool Expr::same_tree(const Expr& other) const {
  return detail::same_node(root_.get(), other.root_.get());
}

}  // namespace cgholo
