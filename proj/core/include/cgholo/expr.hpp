#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cgholo/jet.hpp"

namespace cgholo {

namespace detail {
struct Node;
}

/// Immutable expression tree over a fixed list of variable names.
/// Supports +, -, *, / with the usual precedence and left associativity,
/// ^ with a constant (integer or rational) exponent binding tighter than
/// unary minus, and the functions sin, cos, tan, exp, log, sqrt.
class Expr {
public:
  Expr() = default;

  /// Parses `text` over the declared variables. Throws ParseError with the
  /// byte offset of the offending token.
  static Expr parse(const std::string& text, const std::vector<std::string>& vars);

  /// A literal constant (no variables).
  static Expr number(double v, const std::vector<std::string>& vars = {});

  /// The named variable as an expression.
  static Expr var(const std::string& name, const std::vector<std::string>& vars);

  bool valid() const { return root_ != nullptr; }
  const std::vector<std::string>& vars() const { return vars_; }

  /// Prints in a form that re-parses to a structurally identical tree.
  std::string str() const;

  double eval(const Vec& point) const;
  Jet2 eval_jet2(const Vec& point) const;
  /// Univariate only (one declared variable).
  Taylor4 eval_taylor4(double t0) const;

  /// Returns a copy with every occurrence of `name` replaced by `e`.
  /// `e` must be declared over the same variable list.
  Expr substitute(const std::string& name, const Expr& e) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr operator*(double c, const Expr& a);

  /// Structural equality of trees (used by the round-trip invariant tests).
  bool same_tree(const Expr& other) const;

private:
  Expr(std::shared_ptr<const detail::Node> root, std::vector<std::string> vars)
      : root_(std::move(root)), vars_(std::move(vars)) {}

  std::shared_ptr<const detail::Node> root_;
  std::vector<std::string> vars_;
};

}  // namespace cgholo
