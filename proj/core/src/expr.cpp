#include "ckrlie/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <utility>

#include "ckrlie/errors.hpp"

namespace ckrlie::expr {

struct Expr::Node {
  enum class Kind { kConstant, kVariable, kNegate, kBinary, kFunction };

  Kind kind = Kind::kConstant;
  double value = 0.0;
  BinaryOp op = BinaryOp::kAdd;
  Function fn = Function::kSin;
  Expr lhs{std::shared_ptr<const Node>()};  // empty unless used
  Expr rhs{std::shared_ptr<const Node>()};  // empty unless used
  bool constant = true;  // no x anywhere below
};

namespace {

using Kind = Expr::Node::Kind;

constexpr std::array<std::pair<std::string_view, Function>, 11> kFunctionNames{{
    {"sin", Function::kSin},
    {"cos", Function::kCos},
    {"tan", Function::kTan},
    {"sinh", Function::kSinh},
    {"cosh", Function::kCosh},
    {"tanh", Function::kTanh},
    {"exp", Function::kExp},
    {"log", Function::kLog},
    {"sqrt", Function::kSqrt},
    {"abs", Function::kAbs},
    {"sign", Function::kSign},
}};

double checked(double v, double x) {
  if (!std::isfinite(v)) throw DomainError(DomainKind::kNonFinite, x);
  return v;
}

double apply_function(Function f, double u, double x) {
  switch (f) {
    case Function::kSin:
      return std::sin(u);
    case Function::kCos:
      return std::cos(u);
    case Function::kTan:
      return checked(std::tan(u), x);
    case Function::kSinh:
      return checked(std::sinh(u), x);
    case Function::kCosh:
      return checked(std::cosh(u), x);
    case Function::kTanh:
      return std::tanh(u);
    case Function::kExp:
      return checked(std::exp(u), x);
    case Function::kLog:
      if (!(u > 0.0)) throw DomainError(DomainKind::kLogNonPositive, x);
      return std::log(u);
    case Function::kSqrt:
      if (u < 0.0) throw DomainError(DomainKind::kSqrtNegative, x);
      return std::sqrt(u);
    case Function::kAbs:
      return std::abs(u);
    case Function::kSign:
      return u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
  }
  return 0.0;
}

double apply_binary(BinaryOp op, double a, double b, double x) {
  switch (op) {
    case BinaryOp::kAdd:
      return checked(a + b, x);
    case BinaryOp::kSub:
      return checked(a - b, x);
    case BinaryOp::kMul:
      return checked(a * b, x);
    case BinaryOp::kDiv:
      if (b == 0.0) throw DomainError(DomainKind::kDivisionByZero, x);
      return checked(a / b, x);
    case BinaryOp::kPow: {
      if (a == 0.0 && b < 0.0) throw DomainError(DomainKind::kPowUndefined, x);
      if (a < 0.0 && b != std::trunc(b)) throw DomainError(DomainKind::kPowUndefined, x);
      return checked(std::pow(a, b), x);
    }
  }
  return 0.0;
}

double evaluate(const Expr::Node& n, double x) {
  switch (n.kind) {
    case Kind::kConstant:
      return n.value;
    case Kind::kVariable:
      return x;
    case Kind::kNegate:
      return -evaluate(n.lhs.node(), x);
    case Kind::kBinary:
      return apply_binary(n.op, evaluate(n.lhs.node(), x), evaluate(n.rhs.node(), x), x);
    case Kind::kFunction:
      return apply_function(n.fn, evaluate(n.lhs.node(), x), x);
  }
  return 0.0;
}

std::optional<double> literal(const Expr& e) {
  if (e.node().kind == Kind::kConstant) return e.node().value;
  return std::nullopt;
}

char op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::kAdd:
      return '+';
    case BinaryOp::kSub:
      return '-';
    case BinaryOp::kMul:
      return '*';
    case BinaryOp::kDiv:
      return '/';
    case BinaryOp::kPow:
      return '^';
  }
  return '?';
}

void print(const Expr::Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::kConstant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      if (n.value < 0.0 || std::signbit(n.value)) {
        out += '(';
        out += buf;
        out += ')';
      } else {
        out += buf;
      }
      return;
    }
    case Kind::kVariable:
      out += 'x';
      return;
    case Kind::kNegate:
      out += "(-";
      print(n.lhs.node(), out);
      out += ')';
      return;
    case Kind::kBinary:
      out += '(';
      print(n.lhs.node(), out);
      out += ' ';
      out += op_symbol(n.op);
      out += ' ';
      print(n.rhs.node(), out);
      out += ')';
      return;
    case Kind::kFunction:
      out += name(n.fn);
      out += '(';
      print(n.lhs.node(), out);
      out += ')';
      return;
  }
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    Expr e = parse_expr();
    skip_space();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') throw ParseError("unbalanced parentheses: unexpected ')'", pos_);
      throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(BinaryOp::kAdd, lhs, parse_term());
      } else if (accept('-')) {
        lhs = make_binary(BinaryOp::kSub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(BinaryOp::kMul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(BinaryOp::kDiv, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return make_negate(parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return make_binary(BinaryOp::kPow, base, parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      const std::size_t open = pos_++;
      Expr inner = parse_expr();
      if (!accept(')')) throw ParseError("unbalanced parentheses: missing ')'", open);
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (is_ident_start(c)) return parse_identifier();
    if (c == ')') throw ParseError("unbalanced parentheses: unexpected ')'", pos_);
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && ((text_[pos_] >= '0' && text_[pos_] <= '9') || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && text_[look] >= '0' && text_[look] <= '9') {
        pos_ = look;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ParseError("malformed number", start);
    return Expr(value);
  }

  static bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
  static bool is_ident(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident(text_[pos_])) ++pos_;
    const std::string_view id = text_.substr(start, pos_ - start);
    skip_space();
    const bool call = pos_ < text_.size() && text_[pos_] == '(';
    if (!call) {
      if (id == "x") return Expr::variable();
      if (id == "pi") return Expr(std::numbers::pi);
      throw ParseError("unknown identifier '" + std::string(id) + "'", start);
    }
    for (const auto& [fname, f] : kFunctionNames) {
      if (fname == id) {
        const std::size_t open = pos_++;
        Expr arg = parse_expr();
        if (!accept(')')) throw ParseError("unbalanced parentheses: missing ')'", open);
        return make_function(f, arg);
      }
    }
    throw ParseError("unknown function '" + std::string(id) + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Pruning builders used by differentiate(); they drop exact 0 and 1 literals
// so derivative trees stay small.

Expr d_add(const Expr& a, const Expr& b) {
  if (a.is_literal(0.0)) return b;
  if (b.is_literal(0.0)) return a;
  return a + b;
}

Expr d_sub(const Expr& a, const Expr& b) {
  if (b.is_literal(0.0)) return a;
  if (a.is_literal(0.0)) return -b;
  return a - b;
}

Expr d_mul(const Expr& a, const Expr& b) {
  if (a.is_literal(0.0) || b.is_literal(0.0)) return Expr(0.0);
  if (a.is_literal(1.0)) return b;
  if (b.is_literal(1.0)) return a;
  return a * b;
}

Expr d_div(const Expr& a, const Expr& b) {
  if (a.is_literal(0.0)) return Expr(0.0);
  if (b.is_literal(1.0)) return a;
  return a / b;
}

Expr derive(const Expr& e) {
  const Expr::Node& n = e.node();
  if (n.constant) return Expr(0.0);
  switch (n.kind) {
    case Kind::kConstant:
      return Expr(0.0);
    case Kind::kVariable:
      return Expr(1.0);
    case Kind::kNegate: {
      Expr du = derive(n.lhs);
      return du.is_literal(0.0) ? du : -du;
    }
    case Kind::kBinary: {
      const Expr& u = n.lhs;
      const Expr& v = n.rhs;
      switch (n.op) {
        case BinaryOp::kAdd:
          return d_add(derive(u), derive(v));
        case BinaryOp::kSub:
          return d_sub(derive(u), derive(v));
        case BinaryOp::kMul:
          return d_add(d_mul(derive(u), v), d_mul(u, derive(v)));
        case BinaryOp::kDiv: {
          Expr du = derive(u);
          Expr dv = derive(v);
          if (dv.is_literal(0.0)) return d_div(du, v);
          return d_div(d_sub(d_mul(du, v), d_mul(u, dv)), v * v);
        }
        case BinaryOp::kPow: {
          if (!v.is_constant()) {
            throw Error("differentiate: power with x-dependent exponent is not supported: " + e.to_string());
          }
          const double c = v(0.0);
          Expr du = derive(u);
          if (c == 0.0) return Expr(0.0);
          if (c == 1.0) return du;
          Expr outer = c == 2.0 ? u : pow(u, Expr(c - 1.0));
          return d_mul(d_mul(Expr(c), outer), du);
        }
      }
      break;
    }
    case Kind::kFunction: {
      const Expr& u = n.lhs;
      Expr du = derive(u);
      switch (n.fn) {
        case Function::kSin:
          return d_mul(cos(u), du);
        case Function::kCos:
          return d_mul(-sin(u), du);
        case Function::kTan: {
          Expr c = cos(u);
          return d_div(du, c * c);
        }
        case Function::kSinh:
          return d_mul(cosh(u), du);
        case Function::kCosh:
          return d_mul(sinh(u), du);
        case Function::kTanh: {
          Expr t = tanh(u);
          return d_mul(Expr(1.0) - t * t, du);
        }
        case Function::kExp:
          return d_mul(e, du);
        case Function::kLog:
          return d_div(du, u);
        case Function::kSqrt:
          return d_div(du, Expr(2.0) * e);
        case Function::kAbs:
          return d_mul(make_function(Function::kSign, u), du);
        case Function::kSign:
          return Expr(0.0);
      }
      break;
    }
  }
  return Expr(0.0);
}

std::shared_ptr<const Expr::Node> constant_node(double value) {
  auto node = std::make_shared<Expr::Node>();
  node->kind = Kind::kConstant;
  node->value = value;
  return node;
}

}  // namespace

std::string_view name(Function f) noexcept {
  for (const auto& [fname, fn] : kFunctionNames) {
    if (fn == f) return fname;
  }
  return "?";
}

Expr::Expr() : node_(constant_node(0.0)) {}

Expr::Expr(double value) : node_(constant_node(value)) {}

Expr Expr::variable() {
  static const std::shared_ptr<const Node> node = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kVariable;
    n->constant = false;
    return n;
  }();
  return Expr(node);
}

double Expr::operator()(double x) const { return evaluate(*node_, x); }

bool Expr::is_constant() const noexcept { return node_->constant; }

bool Expr::is_literal(double value) const noexcept {
  return node_->kind == Kind::kConstant && node_->value == value;
}

std::string Expr::to_string() const {
  std::string out;
  print(*node_, out);
  return out;
}

Expr make_negate(Expr u) {
  if (auto v = literal(u)) return Expr(-*v);
  auto node = std::make_shared<Expr::Node>();
  node->kind = Kind::kNegate;
  node->constant = u.is_constant();
  node->lhs = std::move(u);
  return Expr(std::shared_ptr<const Expr::Node>(std::move(node)));
}

Expr make_binary(BinaryOp op, Expr lhs, Expr rhs) {
  if (auto a = literal(lhs)) {
    if (auto b = literal(rhs)) {
      try {
        return Expr(apply_binary(op, *a, *b, 0.0));
      } catch (const DomainError&) {
        // left unfolded; evaluation reports the error
      }
    }
  }
  auto node = std::make_shared<Expr::Node>();
  node->kind = Kind::kBinary;
  node->op = op;
  node->constant = lhs.is_constant() && rhs.is_constant();
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return Expr(std::shared_ptr<const Expr::Node>(std::move(node)));
}

Expr make_function(Function f, Expr u) {
  if (auto a = literal(u)) {
    try {
      return Expr(apply_function(f, *a, 0.0));
    } catch (const DomainError&) {
    }
  }
  auto node = std::make_shared<Expr::Node>();
  node->kind = Kind::kFunction;
  node->fn = f;
  node->constant = u.is_constant();
  node->lhs = std::move(u);
  return Expr(std::shared_ptr<const Expr::Node>(std::move(node)));
}

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

double eval(const Expr& e, double x) { return e(x); }

Expr differentiate(const Expr& e) { return derive(e); }

Expr wronskian(const Expr& u, const Expr& v) { return differentiate(u) * v - u * differentiate(v); }

Expr operator-(const Expr& u) { return make_negate(u); }
Expr operator+(const Expr& a, const Expr& b) { return make_binary(BinaryOp::kAdd, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return make_binary(BinaryOp::kSub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return make_binary(BinaryOp::kMul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return make_binary(BinaryOp::kDiv, a, b); }
Expr pow(const Expr& base, const Expr& exponent) { return make_binary(BinaryOp::kPow, base, exponent); }

Expr sin(const Expr& u) { return make_function(Function::kSin, u); }
Expr cos(const Expr& u) { return make_function(Function::kCos, u); }
Expr tan(const Expr& u) { return make_function(Function::kTan, u); }
Expr sinh(const Expr& u) { return make_function(Function::kSinh, u); }
Expr cosh(const Expr& u) { return make_function(Function::kCosh, u); }
Expr tanh(const Expr& u) { return make_function(Function::kTanh, u); }
Expr exp(const Expr& u) { return make_function(Function::kExp, u); }
Expr log(const Expr& u) { return make_function(Function::kLog, u); }
Expr sqrt(const Expr& u) { return make_function(Function::kSqrt, u); }
Expr abs(const Expr& u) { return make_function(Function::kAbs, u); }

}  // namespace ckrlie::expr
