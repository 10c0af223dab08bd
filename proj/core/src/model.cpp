#include "ckrlie/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ckrlie/errors.hpp"

namespace ckrlie::model {
namespace {

using expr::Expr;

// Rejects zeros of `f` on the grid. Evaluation failures count as violations too.
void require_nonvanishing(const Expr& f, const Grid& grid, const std::string& invariant) {
  for (double x : grid.nodes()) {
    double v = 0.0;
    try {
      v = f(x);
    } catch (const DomainError& e) {
      throw ValidationError(invariant, e.what());
    }
    if (!(std::abs(v) > 0.0)) {
      throw ValidationError(invariant, "vanishes at x = " + std::to_string(x));
    }
  }
}

}  // namespace

std::vector<double> Grid::nodes() const {
  validate();
  std::vector<double> out(points);
  const double h = (x1 - x0) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) out[k] = x0 + h * static_cast<double>(k);
  out.back() = x1;
  return out;
}

void Grid::validate() const {
  if (!std::isfinite(x0) || !std::isfinite(x1) || x0 == x1) {
    throw ValidationError("grid.range", "interval must be finite and non-degenerate");
  }
  if (points < 2) throw ValidationError("grid.points", "at least two sample points are required");
}

MassOrdering::MassOrdering(double a, double b, double c) : a_(a), b_(b), c_(c) {
  const double sum = a + b + c;
  const double scale = std::abs(a) + std::abs(b) + std::abs(c) + 1.0;
  if (std::abs(sum + 1.0) > 4.0 * std::numeric_limits<double>::epsilon() * scale) {
    throw ValidationError("ordering.a+b+c=-1", "von Roos parameters must satisfy a + b + c = -1, got " +
                                                   std::to_string(sum));
  }
}

void check_real_finite(const CkrCoefficients& c, const Grid& grid) {
  const std::array<const Expr*, 3> parts{&c.a1, &c.a2, &c.a3};
  for (double x : grid.nodes()) {
    for (std::size_t j = 0; j < 3; ++j) {
      try {
        static_cast<void>((*parts[j])(x));
      } catch (const DomainError& e) {
        throw ValidationError("coefficients.a" + std::to_string(j + 1) + ".finite", e.what());
      }
    }
  }
}

CkrCoefficients build_case1(const ProblemSpec& problem, const GaugeTriple& gauge, const Grid& grid) {
  if (!(problem.mass > 0.0)) throw ValidationError("problem.m>0", "particle mass must be positive");
  if (problem.imaginary_potential) {
    for (double x : grid.nodes()) {
      if ((*problem.imaginary_potential)(x) != 0.0) {
        throw ValidationError("problem.V.real",
                              "the constant-mass CKR split requires a real potential");
      }
    }
  }
  require_nonvanishing(gauge.alpha, grid, "gauge.alpha!=0");
  require_nonvanishing(gauge.delta, grid, "gauge.delta!=0");

  const Expr& alpha = gauge.alpha;
  const Expr& delta = gauge.delta;
  const Expr& sigma = gauge.sigma;
  const Expr f = Expr(2.0 * problem.mass) * (problem.potential - Expr(problem.energy));
  const Expr alpha_delta = alpha * delta;

  CkrCoefficients c;
  c.a1 = expr::wronskian(sigma, alpha) / alpha_delta - alpha / delta * f + sigma * sigma / alpha_delta;
  c.a2 = -(Expr(2.0) * sigma / alpha + expr::wronskian(delta, alpha) / (delta * alpha));
  c.a3 = delta / alpha;
  check_real_finite(c, grid);
  return c;
}

Expr effective_potential(const MassProfile& m, const MassOrdering& o, const Expr& potential) {
  const Expr& M = m.mass;
  const Expr dM = expr::differentiate(M);
  const Expr ddM = expr::differentiate(dM);
  const double curvature = (o.b() + 1.0) / 2.0;
  const double gradient = 1.0 + o.b() - o.a() * o.c();
  Expr v = potential;
  if (curvature != 0.0) v = v + Expr(curvature) * ddM / (M * M);
  if (gradient != 0.0) v = v - Expr(gradient) * dM * dM / (M * M * M);
  return v;
}

CkrCoefficients build_case2(const Expr& potential, double energy, const MassProfile& m,
                            const MassOrdering& ordering, const Grid& grid) {
  require_nonvanishing(m.mass, grid, "mass.M!=0");
  const Expr v_eff = effective_potential(m, ordering, potential);
  CkrCoefficients c;
  c.a1 = m.mass * (Expr(energy) - v_eff);
  c.a2 = expr::differentiate(m.mass) / m.mass;
  c.a3 = 1.0;
  check_real_finite(c, grid);
  return c;
}

SwansonReduction swanson_reduce(const SwansonParams& s) {
  const auto& nu = s.nu;
  const double nu_tilde = s.nu_tilde();
  if (nu_tilde == 0.0) throw ValidationError("swanson.nu~!=0", "nu0 - nu1 - nu2 must be nonzero");

  const Expr& a1 = s.alpha1;
  const Expr& a2 = s.alpha2;
  const Expr da1 = expr::differentiate(a1);
  const Expr dda1 = expr::differentiate(da1);
  const Expr da2 = expr::differentiate(a2);

  SwansonReduction r{nu_tilde, {}, {}};
  r.k1 = Expr(nu[1] - nu[2]) * a1 * (Expr(2.0) * a2 - da1) + Expr(nu[3] - nu[4]) * a1;
  r.k2 = Expr(nu[0] + nu[1] + nu[2]) * a2 * a2 - Expr(nu[0] + 2.0 * nu[2]) * da1 * a2 -
         Expr(nu[0] - nu[1] + nu[2]) * a1 * da2 + Expr(nu[2]) * (a1 * dda1 + da1 * da1) +
         Expr(nu[3] + nu[4]) * a2 - Expr(nu[4]) * da1 + Expr(nu[0] / 2.0);
  return r;
}

CkrCoefficients build_case3(const SwansonParams& s, double energy, const Grid& grid) {
  const SwansonReduction r = swanson_reduce(s);
  require_nonvanishing(s.alpha1, grid, "swanson.alpha1!=0");
  const Expr& a1 = s.alpha1;
  const Expr denom = Expr(r.nu_tilde) * a1 * a1;
  CkrCoefficients c;
  c.a1 = (Expr(energy) - r.k2) / denom;
  c.a2 = (r.k1 - Expr(2.0 * r.nu_tilde) * a1 * expr::differentiate(a1)) / denom;
  c.a3 = 1.0;
  check_real_finite(c, grid);
  return c;
}

}  // namespace ckrlie::model
