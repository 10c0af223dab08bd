// Smooth configurations of the three physical cases shared by the tests.
#pragma once

#include <cmath>

#include "ckrlie/expr.hpp"
#include "ckrlie/model.hpp"

namespace ckrlie::support {

inline model::Grid unit_grid(std::size_t points = 101) { return {0.0, 1.0, points}; }

/// m = 1, V = x^2/2, E = 1/2 with the identity gauge.
struct Oscillator {
  model::ProblemSpec problem{1.0, expr::parse("x^2/2"), 0.5, {}};
  model::GaugeTriple gauge;
};

/// Non-eigen energy with a fully x-dependent gauge.
struct GaugedConstantMass {
  model::ProblemSpec problem{1.0, expr::parse("x^2/2"), 0.7, {}};
  model::GaugeTriple gauge{expr::parse("1 + 0.25*x^2"), expr::parse("1 + 0.1*x"), expr::parse("0.3*sin(x)")};
};

struct VariableMass {
  expr::Expr potential = expr::parse("x^2");
  double energy = 1.5;
  model::MassProfile mass{expr::parse("1 + 0.5*x^2")};
  model::MassOrdering ordering{-0.25, -0.5, -0.25};
};

struct Swanson {
  model::SwansonParams params{{1.0, 0.2, 0.1, 0.05, 0.02}, expr::parse("1 + 0.2*x^2"), expr::parse("x")};
  double energy = 0.8;
};

/// nu0 = 1, nu1 = nu2 = 0.55, alpha1 = e^x, alpha2 = g e^-x + b e^x with g, b chosen so that
/// k2 = E - nu~/alpha1^2 exactly.
struct ManufacturedSwanson {
  static constexpr double nu = 0.55;
  double gamma = std::sqrt((2 * nu - 1) / (2 * nu + 1));
  double beta = (nu + 1 + std::sqrt(1 - 3 * nu * nu)) / (2 * nu + 1);
  model::SwansonParams params{{1.0, nu, nu, 0.0, 0.0},
                              expr::parse("exp(x)"),
                              expr::Expr(gamma) * expr::parse("exp(-x)") + expr::Expr(beta) * expr::parse("exp(x)")};
  double energy = 2 * (2 * nu + 1) * beta * gamma - 2 * nu * gamma + 0.5;
};

}  // namespace ckrlie::support
