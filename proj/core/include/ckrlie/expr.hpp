/**
 * @file expr.hpp
 * @brief Closed-form expressions in one real variable `x`.
 *
 * Grammar (lowest to highest precedence):
 *
 *     expr    := term (('+' | '-') term)*
 *     term    := unary (('*' | '/') unary)*
 *     unary   := ('-' | '+') unary | power
 *     power   := primary ('^' unary)?          right-associative
 *     primary := number | 'x' | 'pi' | name '(' expr ')' | '(' expr ')'
 *     name    := sin cos tan sinh cosh tanh exp log sqrt abs sign
 *
 * so `-x^2` is `-(x^2)` and `2^-1` is `0.5`. Numbers accept decimal exponents.
 *
 * Expr values are immutable and share structure; copies are cheap and every
 * operation is safe to call concurrently.
 */
#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace ckrlie::expr {

enum class Function { kSin, kCos, kTan, kSinh, kCosh, kTanh, kExp, kLog, kSqrt, kAbs, kSign };
enum class BinaryOp { kAdd, kSub, kMul, kDiv, kPow };

[[nodiscard]] std::string_view name(Function f) noexcept;

class Expr {
 public:
  /// The constant 0.
  Expr();
  /// A numeric constant. Implicit so that builder code reads like the formula.
  Expr(double value);  // NOLINT(google-explicit-constructor)

  [[nodiscard]] static Expr variable();

  /// Evaluates at `x`; throws DomainError when any node is undefined there.
  [[nodiscard]] double operator()(double x) const;

  /// True when the tree contains no occurrence of `x`.
  [[nodiscard]] bool is_constant() const noexcept;
  /// True when the root is a literal equal to `value`.
  [[nodiscard]] bool is_literal(double value) const noexcept;

  /// Fully parenthesised text that parses back to an evaluation-identical tree.
  [[nodiscard]] std::string to_string() const;

  struct Node;
  [[nodiscard]] const Node& node() const noexcept { return *node_; }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  friend Expr make_negate(Expr);
  friend Expr make_binary(BinaryOp, Expr, Expr);
  friend Expr make_function(Function, Expr);

  std::shared_ptr<const Node> node_;
};

/// Parses `text`; throws ParseError carrying the byte offset of the failure.
[[nodiscard]] Expr parse(std::string_view text);

[[nodiscard]] double eval(const Expr& e, double x);

/// Exact derivative d/dx. `abs` differentiates to `sign(u) u'` with sign(0) = 0.
/// Throws ckrlie::Error for `u^v` when `v` depends on `x`.
[[nodiscard]] Expr differentiate(const Expr& e);

/// W(u, v) = u' v - u v'.
[[nodiscard]] Expr wronskian(const Expr& u, const Expr& v);

// Builders. Literal operands are constant-folded when the result is finite.
[[nodiscard]] Expr make_negate(Expr u);
[[nodiscard]] Expr make_binary(BinaryOp op, Expr lhs, Expr rhs);
[[nodiscard]] Expr make_function(Function f, Expr u);

[[nodiscard]] Expr operator-(const Expr& u);
[[nodiscard]] Expr operator+(const Expr& a, const Expr& b);
[[nodiscard]] Expr operator-(const Expr& a, const Expr& b);
[[nodiscard]] Expr operator*(const Expr& a, const Expr& b);
[[nodiscard]] Expr operator/(const Expr& a, const Expr& b);
[[nodiscard]] Expr pow(const Expr& base, const Expr& exponent);

[[nodiscard]] Expr sin(const Expr& u);
[[nodiscard]] Expr cos(const Expr& u);
[[nodiscard]] Expr tan(const Expr& u);
[[nodiscard]] Expr sinh(const Expr& u);
[[nodiscard]] Expr cosh(const Expr& u);
[[nodiscard]] Expr tanh(const Expr& u);
[[nodiscard]] Expr exp(const Expr& u);
[[nodiscard]] Expr log(const Expr& u);
[[nodiscard]] Expr sqrt(const Expr& u);
[[nodiscard]] Expr abs(const Expr& u);

}  // namespace ckrlie::expr
