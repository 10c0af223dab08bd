/**
 * @file model.hpp
 * @brief Cayley-Klein Riccati coefficient triples for the three physical cases.
 *
 * Unit conventions: hbar = 1 in the constant-mass case; hbar = 2 m0 = 1 for the
 * position-dependent-mass and Swanson cases, so mass enters only through the
 * dimensionless profile M(x).
 *
 * Every "nonvanishing on the interval" requirement is checked on an explicit
 * sample grid, never symbolically.
 */
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "ckrlie/expr.hpp"

namespace ckrlie::model {

/** @brief Working interval sampled at `points` equally spaced nodes (endpoints included). */
struct Grid {
  double x0 = 0.0;
  double x1 = 1.0;
  std::size_t points = 101;

  [[nodiscard]] std::vector<double> nodes() const;
  void validate() const;
};

/** @brief Constant-mass problem: mass m, real potential V(x) and the assumed energy E. */
struct ProblemSpec {
  double mass = 1.0;
  expr::Expr potential;
  double energy = 0.0;
  /// Imaginary part of a complex potential. Only its absence (or identically zero) is accepted.
  std::optional<expr::Expr> imaginary_potential;
};

/** @brief Real functions of the gauge p = (alpha * qmf + i sigma) / delta. */
struct GaugeTriple {
  expr::Expr alpha = 1.0;
  expr::Expr delta = 1.0;
  expr::Expr sigma = 0.0;

  [[nodiscard]] static GaugeTriple identity() { return {}; }
};

/** @brief von Roos ordering parameters, a + b + c = -1. */
class MassOrdering {
 public:
  MassOrdering(double a, double b, double c);
  [[nodiscard]] double a() const noexcept { return a_; }
  [[nodiscard]] double b() const noexcept { return b_; }
  [[nodiscard]] double c() const noexcept { return c_; }

 private:
  double a_, b_, c_;
};

/** @brief Dimensionless mass ratio M(x) = m(x) / m0. */
struct MassProfile {
  expr::Expr mass = 1.0;
};

/** @brief Swanson couplings nu0..nu4 and generalized ladder-operator functions. */
struct SwansonParams {
  std::array<double, 5> nu{1.0, 0.0, 0.0, 0.0, 0.0};
  expr::Expr alpha1 = 1.0;
  expr::Expr alpha2 = 0.0;

  [[nodiscard]] double nu_tilde() const noexcept { return nu[0] - nu[1] - nu[2]; }
};

struct CkrCoefficients {
  expr::Expr a1;
  expr::Expr a2;
  expr::Expr a3 = 1.0;

  [[nodiscard]] std::array<double, 3> operator()(double x) const { return {a1(x), a2(x), a3(x)}; }
};

/// Throws ValidationError unless every coefficient is finite on the grid.
void check_real_finite(const CkrCoefficients& c, const Grid& grid);

/// Case I. f = 2m(V - E);
///   a1 = W(sigma, alpha)/(alpha delta) - alpha f / delta + sigma^2/(alpha delta)
///   a2 = -(2 sigma / alpha + W(delta, alpha)/(delta alpha))
///   a3 = delta / alpha
[[nodiscard]] CkrCoefficients build_case1(const ProblemSpec& problem, const GaugeTriple& gauge,
                                          const Grid& grid);

/// V_eff = V + ((b+1)/2) M''/M^2 - (1 + b - ac) M'^2/M^3.
[[nodiscard]] expr::Expr effective_potential(const MassProfile& m, const MassOrdering& ordering,
                                             const expr::Expr& potential);

/// Case II. a1 = M (E - V_eff), a2 = M'/M, a3 = 1.
[[nodiscard]] CkrCoefficients build_case2(const expr::Expr& potential, double energy,
                                          const MassProfile& m, const MassOrdering& ordering,
                                          const Grid& grid);

struct SwansonReduction {
  double nu_tilde;
  expr::Expr k1;
  expr::Expr k2;
};

/// Writes the Swanson Hamiltonian as -nu~ d/dx alpha1^2 d/dx + k1 d/dx + k2.
[[nodiscard]] SwansonReduction swanson_reduce(const SwansonParams& s);

/// Case III. a1 = (E - k2)/(nu~ alpha1^2), a2 = (k1 - 2 nu~ alpha1 alpha1')/(nu~ alpha1^2), a3 = 1.
[[nodiscard]] CkrCoefficients build_case3(const SwansonParams& s, double energy, const Grid& grid);

}  // namespace ckrlie::model
