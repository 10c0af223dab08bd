/**
 * @file symmetry.hpp
 * @brief Lie symmetries Y = lambda0 d/dx + sum_j lambda_j chi_j of the
 *        autonomized CKR field X~ = d/dx + sum_j a_j(x) chi_j.
 *
 * Y is a symmetry with multiplier lambda when [Y, X~] = lambda X~. Expanding
 * the bracket with the sl(2,R) table gives, with a0 = lambda0':
 *
 *     lambda1' = lambda0 a1' + lambda1 a2 - lambda2 a1 + a0 a1
 *     lambda2' = lambda0 a2' + 2 (lambda1 a3 - lambda3 a1) + a0 a2
 *     lambda3' = lambda0 a3' + lambda2 a3 - lambda3 a2 + a0 a3
 *
 * and lambda = -a0. solve_lambda() integrates this system; symmetry_residual()
 * evaluates [Y, X~] - lambda X~ directly from the vector fields and their
 * exact Jacobians, so the two are independent routes.
 */
#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "ckrlie/expr.hpp"
#include "ckrlie/model.hpp"
#include "ckrlie/ode.hpp"

namespace ckrlie::symmetry {

/// A point (x, p1, p2) of the autonomized space.
struct ExtendedPoint {
  double x = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
};

struct ExtendedVector {
  double dx = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

struct SymmetryCoefficients {
  expr::Expr lambda0;
  expr::Expr a0;  ///< d lambda0 / dx
  std::array<ode::Profile, 3> lambda;
  /// Backing samples (lambda1, lambda2, lambda3) when the coefficients came from solve_lambda.
  std::shared_ptr<const ode::SampledPath> path;

  /// lambda(x) = -a0(x).
  [[nodiscard]] double multiplier(double x) const { return -a0(x); }
};

/// Builds coefficients from closed forms or profiles; a0 is derived from lambda0.
[[nodiscard]] SymmetryCoefficients make_symmetry(const expr::Expr& lambda0,
                                                 std::array<ode::Profile, 3> lambda);

/// X~(q) = (1, a2 p1 + 2 a3 p1 p2, a1 + a2 p2 + a3 (p2^2 - p1^2)).
[[nodiscard]] ExtendedVector autonomized(const model::CkrCoefficients& c, ExtendedPoint q);

/// Integrates (lambda1, lambda2, lambda3) from `initial` at x0 for the given lambda0.
[[nodiscard]] SymmetryCoefficients solve_lambda(const model::CkrCoefficients& c, const expr::Expr& lambda0,
                                                std::array<double, 3> initial, double x0, double x1,
                                                const ode::IntegratorConfig& cfg);

/// The lambda0 = A e^x branch (lambda0 = a0).
[[nodiscard]] SymmetryCoefficients solve_lambda_exponential(const model::CkrCoefficients& c, double amplitude,
                                                            std::array<double, 3> initial, double x0,
                                                            double x1, const ode::IntegratorConfig& cfg);

/// [Y, X~](q) - lambda(x) X~(q).
[[nodiscard]] ExtendedVector symmetry_residual(const model::CkrCoefficients& c, const SymmetryCoefficients& s,
                                               ExtendedPoint q);

/// max over xs x points of the largest residual component, per abscissa.
[[nodiscard]] std::vector<double> residual_grid(const model::CkrCoefficients& c, const SymmetryCoefficients& s,
                                                std::span<const double> xs,
                                                std::span<const PhasePoint> points);

/// Left minus right side of the lambda system at x, using the profiles' derivatives.
[[nodiscard]] std::array<double, 3> lambda_system_residual(const model::CkrCoefficients& c,
                                                           const SymmetryCoefficients& s, double x);

/// Quadrature reconstructions of lambda1 and lambda3 for position-dependent mass
/// (a1 = M (E - V_eff), a2 = M'/M, a3 = 1, lambda0 = A e^x), anchored at the first
/// node of `s.path` and evaluated on its nodes:
///
///     lambda1 = M  int [ (1/M) d/dx(A e^x M (E - V_eff)) - lambda2 (E - V_eff) ]
///     lambda3 = (1/M) int M (A e^x + lambda2)
struct IntegralForms {
  ode::SampledPath lambda1;
  ode::SampledPath lambda3;
};

[[nodiscard]] IntegralForms mass_integral_forms(const expr::Expr& mass, const expr::Expr& v_eff, double energy,
                                                double amplitude, const SymmetryCoefficients& s);

/// lambda2(x0) + [lambda0 a2]_{x0}^{x} + int_{x0}^{x} 2 (lambda1 a3 - lambda3 a1), on the nodes of
/// `s.path`. Agrees with the solved lambda2 for any lambda0.
[[nodiscard]] ode::SampledPath lambda2_integral_form(const model::CkrCoefficients& c,
                                                     const SymmetryCoefficients& s);

}  // namespace ckrlie::symmetry
