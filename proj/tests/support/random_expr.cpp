#include "random_expr.hpp"

namespace ckrlie::support {

using expr::Expr;

Expr ExprSampler::leaf() {
  if (std::uniform_int_distribution<int>(0, 2)(rng_) == 0) {
    return Expr(static_cast<double>(std::uniform_int_distribution<int>(-20, 20)(rng_)) / 8.0);
  }
  return Expr::variable();
}

Expr ExprSampler::next(int depth) {
  if (depth <= 0) return leaf();
  const int pick = std::uniform_int_distribution<int>(0, 14)(rng_);
  // operands drawn in a fixed order so the sequence does not depend on argument evaluation order
  const Expr a = next(depth - 1);
  const Expr b = pick <= 3 ? next(depth - 1) : Expr(0.0);
  const double k = static_cast<double>(std::uniform_int_distribution<int>(2, 3)(rng_));
  switch (pick) {
    case 0: return a + b;
    case 1: return a - b;
    case 2: return a * b;
    case 3: return a / (Expr(2.0) + expr::cos(b));
    case 4: return expr::pow(a, Expr(k));
    case 5: return expr::sin(a);
    case 6: return expr::cos(a);
    case 7: return expr::tanh(a);
    case 8: return expr::exp(expr::sin(a));
    case 9: return expr::log(Expr(1.0) + expr::pow(a, Expr(2.0)));
    case 10: return expr::sqrt(Expr(1.0) + expr::pow(a, Expr(2.0)));
    case 11: return expr::sinh(expr::sin(a));
    case 12: return expr::cosh(expr::tanh(a));
    case 13: return expr::abs(Expr(2.0) + expr::sin(a));
    default: return -a;
  }
}

double richardson_derivative(const std::function<double(double)>& f, double x, double h) {
  auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

}  // namespace ckrlie::support
