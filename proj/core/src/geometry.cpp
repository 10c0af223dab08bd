#include "ckrlie/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ckrlie/errors.hpp"

namespace ckrlie::geometry {
namespace {

void require_chart(PhasePoint q) {
  if (!(std::abs(q.p1) >= kAxisEpsilon)) {
    throw DomainError(DomainKind::kChartAxis, q.p1, "p2 = " + std::to_string(q.p2));
  }
}

TangentPair mul(const Jacobian& j, TangentPair v) {
  return {j[0] * v.u1 + j[1] * v.u2, j[2] * v.u1 + j[3] * v.u2};
}

}  // namespace

Generator generator(int index) {
  if (index < 1 || index > 3) throw std::invalid_argument("generator index must be 1, 2 or 3");
  return static_cast<Generator>(index);
}

TangentPair chi(Generator i, PhasePoint q) noexcept {
  switch (i) {
    case Generator::k1:
      return {0.0, 1.0};
    case Generator::k2:
      return {q.p1, q.p2};
    case Generator::k3:
      return {2.0 * q.p1 * q.p2, q.p2 * q.p2 - q.p1 * q.p1};
  }
  return {};
}

Jacobian chi_jacobian(Generator i, PhasePoint q) noexcept {
  switch (i) {
    case Generator::k1:
      return {0.0, 0.0, 0.0, 0.0};
    case Generator::k2:
      return {1.0, 0.0, 0.0, 1.0};
    case Generator::k3:
      return {2.0 * q.p2, 2.0 * q.p1, -2.0 * q.p1, 2.0 * q.p2};
  }
  return {};
}

TangentPair commutator(Generator i, Generator j, PhasePoint q) noexcept {
  const TangentPair x = chi(i, q);
  const TangentPair y = chi(j, q);
  const TangentPair dy_x = mul(chi_jacobian(j, q), x);
  const TangentPair dx_y = mul(chi_jacobian(i, q), y);
  return {dy_x.u1 - dx_y.u1, dy_x.u2 - dx_y.u2};
}

double hamiltonian(Generator i, PhasePoint q) {
  require_chart(q);
  switch (i) {
    case Generator::k1:
      return -1.0 / q.p1;
    case Generator::k2:
      return -q.p2 / q.p1;
    case Generator::k3:
      return -(q.p1 * q.p1 + q.p2 * q.p2) / q.p1;
  }
  return 0.0;
}

Covector hamiltonian_differential(Generator i, PhasePoint q) {
  require_chart(q);
  const double inv = 1.0 / q.p1;
  switch (i) {
    case Generator::k1:
      return {inv * inv, 0.0};
    case Generator::k2:
      return {q.p2 * inv * inv, -inv};
    case Generator::k3:
      return {q.p2 * q.p2 * inv * inv - 1.0, -2.0 * q.p2 * inv};
  }
  return {};
}

double symplectic(PhasePoint q, TangentPair u, TangentPair v) {
  require_chart(q);
  return (u.u2 * v.u1 - u.u1 * v.u2) / (q.p1 * q.p1);
}

double bracket_omega(Generator i, Generator j, PhasePoint q) { return symplectic(q, chi(i, q), chi(j, q)); }

double bracket_lambda(Covector du, Covector dv, PhasePoint q) {
  require_chart(q);
  return q.p1 * q.p1 * (du.d2 * dv.d1 - dv.d2 * du.d1);
}

Covector differential_fd(const ScalarField& f, PhasePoint q, double relative_step) {
  const double h1 = relative_step * (1.0 + std::abs(q.p1));
  const double h2 = relative_step * (1.0 + std::abs(q.p2));
  const double d1 = (f({q.p1 + h1, q.p2}) - f({q.p1 - h1, q.p2})) / (2.0 * h1);
  const double d2 = (f({q.p1, q.p2 + h2}) - f({q.p1, q.p2 - h2})) / (2.0 * h2);
  return {d1, d2};
}

double bracket_lambda(const ScalarField& f, const ScalarField& g, PhasePoint q, double relative_step) {
  require_chart(q);
  return bracket_lambda(differential_fd(f, q, relative_step), differential_fd(g, q, relative_step), q);
}

TangentPair bivector_contract(Covector df, PhasePoint q) {
  require_chart(q);
  // Lambda(df, beta) = p1^2 (df_2 beta_1 - df_1 beta_2)
  return {q.p1 * q.p1 * df.d2, -q.p1 * q.p1 * df.d1};
}

TangentPair bivector_field(Generator i, PhasePoint q) {
  const TangentPair v = bivector_contract(hamiltonian_differential(i, q), q);
  return {-v.u1, -v.u2};
}

}  // namespace ckrlie::geometry
