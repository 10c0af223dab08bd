/**
 * @file conserved.hpp
 * @brief Lie integrals Upsilon = U1 H1 + U2 H2 + U3 H3 of a CKR flow and the
 *        consistency conditions under which the U2 = 0 closed forms exist.
 *
 * The Euler triplet
 *
 *     U1' = a2 U1 - a1 U2
 *     U2' = 2 (a3 U1 - a1 U3)
 *     U3' = a3 U2 - a2 U3
 *
 * makes Upsilon constant along every trajectory of the same coefficients.
 */
#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ckrlie/expr.hpp"
#include "ckrlie/model.hpp"
#include "ckrlie/ode.hpp"
#include "ckrlie/phase.hpp"

namespace ckrlie::conserved {

struct UpsilonTriple {
  std::array<ode::Profile, 3> upsilon;
  /// Backing samples when the triple was integrated or built by quadrature.
  std::shared_ptr<const ode::SampledPath> path;

  /// sum_j U_j(x) H_j(q); throws DomainError(kChartAxis) near p1 = 0.
  [[nodiscard]] double operator()(double x, PhasePoint q) const;
};

[[nodiscard]] UpsilonTriple solve_euler(const model::CkrCoefficients& c, std::array<double, 3> initial,
                                        double x0, double x1, const ode::IntegratorConfig& cfg);

/// Left minus right side of the Euler triplet at x.
[[nodiscard]] std::array<double, 3> euler_residual(const model::CkrCoefficients& c, const UpsilonTriple& u,
                                                   double x);

/// a3 U1 - a1 U3, which must vanish for the U2 = 0 branch.
[[nodiscard]] double branch_constraint(const model::CkrCoefficients& c, const UpsilonTriple& u, double x);

enum class LieCase { kI, kII, kIII };

/// Integration constants (C-, C+), (B-, B+) or (K-, K+).
struct LieIntegralSpec {
  LieCase kind = LieCase::kI;
  double minus = 1.0;
  double plus = 1.0;

  /// C0 = C- / C+ (resp. B0, K0); throws ValidationError when plus == 0.
  [[nodiscard]] double ratio() const;
};

/// Case I with alpha = delta = 1: int sigma is anchored at x0 and sampled on `intervals` panels.
struct ConstantMassData {
  expr::Expr sigma = 0.0;
  double x0 = 0.0;
  double x1 = 1.0;
  std::size_t intervals = 1000;
};

struct VariableMassData {
  expr::Expr mass = 1.0;
};

struct SwansonData {
  model::SwansonParams params;
};

using CaseData = std::variant<ConstantMassData, VariableMassData, SwansonData>;

/// U2 = 0 closed forms:
///   I:   U1 = C- exp(-2 int sigma),  U3 = C+ exp(2 int sigma)
///   II:  U1 = B- M,                  U3 = B+ / M
///   III: U1 = K- / alpha1^2,         U3 = K+ alpha1^2   (requires nu1 = nu2, nu3 = nu4)
[[nodiscard]] UpsilonTriple closed_form_upsilon(const LieIntegralSpec& spec, const CaseData& data);

struct DriftReport {
  double reference = 0.0;  ///< Upsilon at the first sample
  double max_abs_drift = 0.0;
  double relative_drift = 0.0;  ///< max_abs_drift / |reference|, or max_abs_drift when reference = 0
  std::size_t samples = 0;
  std::vector<double> values;  ///< Upsilon at every sample
};

/// Evaluates Upsilon along every sample of `t`.
[[nodiscard]] DriftReport conservation_check(const UpsilonTriple& u, const ode::Trajectory& t);

struct SigmaProblem {
  expr::Expr potential = 0.0;
  double mass = 1.0;
  double energy = 0.0;
  /// Right-hand constant; defaults to 2 m E.
  std::optional<double> c0;
  double sigma0 = 0.0;
  model::Grid grid{0.0, 1.0, 1001};
  /// Use the linearized exponential: sigma' - 2mV + sigma^2 = -4 C0 int sigma.
  bool small_sigma = false;
  double damping = 0.5;
  std::size_t max_iterations = 200;
  double tolerance = 1e-10;
};

struct SigmaResult {
  ode::SampledPath sigma;
  /// Pointwise defect of the solved equation, with sigma' by finite differences.
  ode::SampledPath residual;
  double c0 = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double last_update = 0.0;
};

/// Damped Picard iteration for sigma' - 2m(V - E) + sigma^2 = C0 exp(-4 int sigma).
[[nodiscard]] SigmaResult sigma_constraint(const SigmaProblem& p);

struct MassProblem {
  expr::Expr potential = 0.0;
  double energy = 0.0;
  double b0 = 1.0;
  /// Ordering parameter a with b = -1, c = -a.
  double ordering_a = 0.0;
  /// +1 or -1: sign of M'.
  int branch = 1;
  double mass_start = 1.0;
  model::Grid grid;
};

/// B0 M = E - V - a^2 M'^2 / M^3, as M' = branch sqrt((E - V - B0 M) M^3) / |a|; for a = 0
/// the algebraic M = (E - V)/B0 on the grid.
[[nodiscard]] ode::SampledPath mass_constraint(const MassProblem& p, const ode::IntegratorConfig& cfg);

/// Column 0: k2' - 2 nu~ alpha1'/alpha1^3. Column 1: E - k2 - nu~/alpha1^2.
[[nodiscard]] ode::SampledPath swanson_condition(const model::SwansonParams& s, double energy,
                                                 const model::Grid& grid);

}  // namespace ckrlie::conserved
