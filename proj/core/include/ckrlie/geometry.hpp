/**
 * @file geometry.hpp
 * @brief sl(2,R) realization on the CKR plane and its Hamiltonian structures.
 *
 *     chi1 = d/dp2
 *     chi2 = p1 d/dp1 + p2 d/dp2
 *     chi3 = 2 p1 p2 d/dp1 + (p2^2 - p1^2) d/dp2
 *
 * with [chi1, chi2] = chi1, [chi2, chi3] = chi3, [chi1, chi3] = 2 chi2. The
 * symplectic form is omega = p1^-2 dp2 ^ dp1 and the Poisson bivector is
 * Lambda = p1^2 d/dp2 ^ d/dp1, both on the chart p1 != 0. Operations that need
 * the chart throw DomainError(kChartAxis) when |p1| < kAxisEpsilon.
 */
#pragma once

#include <array>
#include <functional>

#include "ckrlie/phase.hpp"

namespace ckrlie::geometry {

inline constexpr double kAxisEpsilon = 1e-9;

enum class Generator { k1 = 1, k2 = 2, k3 = 3 };

inline constexpr std::array<Generator, 3> kGenerators{Generator::k1, Generator::k2, Generator::k3};

/// Generator from its 1-based index; throws std::invalid_argument outside 1..3.
[[nodiscard]] Generator generator(int index);

/// Row-major 2x2 matrix: {d u1/d p1, d u1/d p2, d u2/d p1, d u2/d p2}.
using Jacobian = std::array<double, 4>;

/// Covector components (d/dp1, d/dp2).
struct Covector {
  double d1 = 0.0;
  double d2 = 0.0;
};

using ScalarField = std::function<double(PhasePoint)>;

[[nodiscard]] TangentPair chi(Generator i, PhasePoint q) noexcept;
[[nodiscard]] Jacobian chi_jacobian(Generator i, PhasePoint q) noexcept;

/// Lie bracket [X, Y] = (DY) X - (DX) Y with exact Jacobians.
[[nodiscard]] TangentPair commutator(Generator i, Generator j, PhasePoint q) noexcept;

[[nodiscard]] double hamiltonian(Generator i, PhasePoint q);
[[nodiscard]] Covector hamiltonian_differential(Generator i, PhasePoint q);

/// omega_q(u, v) = p1^-2 (u2 v1 - u1 v2).
[[nodiscard]] double symplectic(PhasePoint q, TangentPair u, TangentPair v);

/// {Hi, Hj}_omega = omega(chi_i, chi_j).
[[nodiscard]] double bracket_omega(Generator i, Generator j, PhasePoint q);

/// {U, V}_Lambda = p1^2 (dU/dp2 dV/dp1 - dV/dp2 dU/dp1) from exact differentials.
[[nodiscard]] double bracket_lambda(Covector du, Covector dv, PhasePoint q);

/// Central finite-difference differential, step 1e-6 (1 + |p_k|) per coordinate
/// unless `relative_step` overrides the 1e-6.
[[nodiscard]] Covector differential_fd(const ScalarField& f, PhasePoint q, double relative_step = 1e-6);

/// {f, g}_Lambda with finite-difference partials.
[[nodiscard]] double bracket_lambda(const ScalarField& f, const ScalarField& g, PhasePoint q,
                                    double relative_step = 1e-6);

/// The vector Lambda(df, .) at q.
[[nodiscard]] TangentPair bivector_contract(Covector df, PhasePoint q);

/// -Lambda(dHi) from exact differentials; equals chi(i, q).
[[nodiscard]] TangentPair bivector_field(Generator i, PhasePoint q);

}  // namespace ckrlie::geometry
