/**
 * @file oracle.hpp
 * @brief Schrodinger-side reference for the CKR flows.
 *
 * Every case reduces to the linear equation psi'' = A(x) psi' + B(x) psi:
 *
 *     I   (hbar = 1):      A = 0,       B = 2m (V - E)
 *     II  (hbar = 2m0 = 1): A = M'/M,   B = M (V_eff - E)
 *     III:                 A = (k1 - 2 nu~ alpha1 alpha1')/(nu~ alpha1^2),  B = (k2 - E)/(nu~ alpha1^2)
 *
 * The quantum momentum function qmf = -i psi'/psi mapped through the gauge
 * p = (alpha qmf + i sigma)/delta solves the CKR system built by the model.
 */
#pragma once

#include <complex>
#include <vector>

#include "ckrlie/expr.hpp"
#include "ckrlie/model.hpp"
#include "ckrlie/ode.hpp"

namespace ckrlie::oracle {

using Complex = std::complex<double>;

struct WaveSample {
  double x;
  Complex psi;
  Complex dpsi;
  /// psi == 0 here: the momentum function is undefined.
  bool node = false;
};

struct WavePath {
  std::vector<WaveSample> samples;
  ode::Status status = ode::Status::kCompleted;
  double stop_x = 0.0;
};

/** @brief psi'' = drift(x) psi' + potential_term(x) psi. */
struct LinearEquation {
  expr::Expr drift = 0.0;
  expr::Expr potential_term = 0.0;
};

[[nodiscard]] LinearEquation case1_equation(const model::ProblemSpec& p);
[[nodiscard]] LinearEquation case2_equation(const expr::Expr& potential, double energy, const model::MassProfile& m,
                                            const model::MassOrdering& ordering);
[[nodiscard]] LinearEquation case3_equation(const model::SwansonParams& s, double energy);

/// Real and imaginary parts are integrated together as a four-component real system.
[[nodiscard]] WavePath integrate_schrodinger(const LinearEquation& eq, Complex psi0, Complex dpsi0, double x0,
                                             double x1, const ode::IntegratorConfig& cfg);

/// Maps samples to p = (alpha qmf + i sigma)/delta. The trajectory stops (status kBlowUp)
/// at the first node or where |p| exceeds `threshold`.
[[nodiscard]] ode::Trajectory qmf(const WavePath& w, const model::GaugeTriple& g, double threshold = 1e8);

/// psi = psi0 exp(i int qmf) with qmf = (delta p - i sigma)/alpha, by cumulative quadrature
/// on the trajectory nodes.
[[nodiscard]] WavePath wave_from_qmf(const ode::Trajectory& t, const model::GaugeTriple& g, Complex psi0);

/// Per-sample defect |psi_fd' - psi'| + |psi'_fd' - (A psi' + B psi)|, with the x-derivatives
/// of the stored psi and psi' taken by five-point finite differences.
[[nodiscard]] ode::SampledPath schrodinger_residual(const WavePath& w, const LinearEquation& eq);

struct PairedSample {
  double x;
  double p1_reference;
  double p2_reference;
  double p1_candidate;
  double p2_candidate;
  double distance;
};

struct Comparison {
  std::vector<PairedSample> samples;
  double sup_distance = 0.0;
  /// End of the common interval.
  double x_end = 0.0;
};

/// Compares two trajectories on the reference nodes inside the common interval. Candidate
/// values are taken at matching nodes, otherwise linearly interpolated.
[[nodiscard]] Comparison compare(const ode::Trajectory& reference, const ode::Trajectory& candidate);

}  // namespace ckrlie::oracle
