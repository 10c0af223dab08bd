#include "ckrlie/symmetry.hpp"

#include <algorithm>
#include <cmath>

#include "ckrlie/errors.hpp"
#include "ckrlie/geometry.hpp"

namespace ckrlie::symmetry {
namespace {

using expr::Expr;
using geometry::Generator;
using geometry::kGenerators;

struct CoefficientJet {
  std::array<Expr, 3> a;
  std::array<Expr, 3> da;

  explicit CoefficientJet(const model::CkrCoefficients& c)
      : a{c.a1, c.a2, c.a3},
        da{expr::differentiate(c.a1), expr::differentiate(c.a2), expr::differentiate(c.a3)} {}
};

// 3x3 row-major Jacobian of an extended field w.r.t. (x, p1, p2), applied to v.
ExtendedVector mul(const std::array<double, 9>& j, const ExtendedVector& v) {
  return {j[0] * v.dx + j[1] * v.d1 + j[2] * v.d2, j[3] * v.dx + j[4] * v.d1 + j[5] * v.d2,
          j[6] * v.dx + j[7] * v.d1 + j[8] * v.d2};
}

// Value and Jacobian of dx0 d/dx + sum_j w_j(x) chi_j, given w, w' and dx0'.
struct FieldJet {
  ExtendedVector value;
  std::array<double, 9> jacobian{};
};

FieldJet field_jet(double x_component, double dx_component, const std::array<double, 3>& w,
                   const std::array<double, 3>& dw, PhasePoint p) {
  FieldJet f;
  f.value.dx = x_component;
  f.jacobian[0] = dx_component;
  for (std::size_t j = 0; j < 3; ++j) {
    const TangentPair v = geometry::chi(kGenerators[j], p);
    const geometry::Jacobian jac = geometry::chi_jacobian(kGenerators[j], p);
    f.value.d1 += w[j] * v.u1;
    f.value.d2 += w[j] * v.u2;
    f.jacobian[3] += dw[j] * v.u1;
    f.jacobian[6] += dw[j] * v.u2;
    f.jacobian[4] += w[j] * jac[0];
    f.jacobian[5] += w[j] * jac[1];
    f.jacobian[7] += w[j] * jac[2];
    f.jacobian[8] += w[j] * jac[3];
  }
  return f;
}

ExtendedVector residual(const CoefficientJet& jet, const SymmetryCoefficients& s, ExtendedPoint q) {
  const PhasePoint p{q.p1, q.p2};
  std::array<double, 3> a{}, da{}, l{}, dl{};
  for (std::size_t j = 0; j < 3; ++j) {
    a[j] = jet.a[j](q.x);
    da[j] = jet.da[j](q.x);
    l[j] = s.lambda[j].value(q.x);
    dl[j] = s.lambda[j].derivative(q.x);
  }
  const FieldJet y = field_jet(s.lambda0(q.x), s.a0(q.x), l, dl, p);
  const FieldJet xt = field_jet(1.0, 0.0, a, da, p);
  // [Y, X~] = (DX~) Y - (DY) X~
  const ExtendedVector dxy = mul(xt.jacobian, y.value);
  const ExtendedVector dyx = mul(y.jacobian, xt.value);
  const double mult = s.multiplier(q.x);
  return {dxy.dx - dyx.dx - mult * xt.value.dx, dxy.d1 - dyx.d1 - mult * xt.value.d1,
          dxy.d2 - dyx.d2 - mult * xt.value.d2};
}

}  // namespace

SymmetryCoefficients make_symmetry(const Expr& lambda0, std::array<ode::Profile, 3> lambda) {
  SymmetryCoefficients s;
  s.lambda0 = lambda0;
  s.a0 = expr::differentiate(lambda0);
  s.lambda = std::move(lambda);
  return s;
}

ExtendedVector autonomized(const model::CkrCoefficients& c, ExtendedPoint q) {
  const auto [a1, a2, a3] = c(q.x);
  return {1.0, a2 * q.p1 + 2.0 * a3 * q.p1 * q.p2, a1 + a2 * q.p2 + a3 * (q.p2 * q.p2 - q.p1 * q.p1)};
}

SymmetryCoefficients solve_lambda(const model::CkrCoefficients& c, const Expr& lambda0,
                                  std::array<double, 3> initial, double x0, double x1,
                                  const ode::IntegratorConfig& cfg) {
  const CoefficientJet jet(c);
  const Expr a0 = expr::differentiate(lambda0);
  ode::LinearSystem system;
  system.dimension = 3;
  system.coefficients = [&](double x, std::span<double> m, std::span<double> f) {
    const double a1 = jet.a[0](x), a2 = jet.a[1](x), a3 = jet.a[2](x);
    const double l0 = lambda0(x), d0 = a0(x);
    m[0] = a2, m[1] = -a1, m[2] = 0.0;
    m[3] = 2.0 * a3, m[4] = 0.0, m[5] = -2.0 * a1;
    m[6] = 0.0, m[7] = a3, m[8] = -a2;
    f[0] = l0 * jet.da[0](x) + d0 * a1;
    f[1] = l0 * jet.da[1](x) + d0 * a2;
    f[2] = l0 * jet.da[2](x) + d0 * a3;
  };
  auto path = std::make_shared<const ode::SampledPath>(ode::integrate_linear(system, x0, initial, x1, cfg));
  SymmetryCoefficients s =
      make_symmetry(lambda0, {ode::Profile(path, 0), ode::Profile(path, 1), ode::Profile(path, 2)});
  s.path = std::move(path);
  return s;
}

SymmetryCoefficients solve_lambda_exponential(const model::CkrCoefficients& c, double amplitude,
                                              std::array<double, 3> initial, double x0, double x1,
                                              const ode::IntegratorConfig& cfg) {
  return solve_lambda(c, Expr(amplitude) * expr::exp(Expr::variable()), initial, x0, x1, cfg);
}

ExtendedVector symmetry_residual(const model::CkrCoefficients& c, const SymmetryCoefficients& s,
                                 ExtendedPoint q) {
  return residual(CoefficientJet(c), s, q);
}

std::vector<double> residual_grid(const model::CkrCoefficients& c, const SymmetryCoefficients& s,
                                  std::span<const double> xs, std::span<const PhasePoint> points) {
  const CoefficientJet jet(c);
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    double worst = 0.0;
    for (const PhasePoint& p : points) {
      const ExtendedVector r = residual(jet, s, {x, p.p1, p.p2});
      worst = std::max({worst, std::abs(r.dx), std::abs(r.d1), std::abs(r.d2)});
    }
    out.push_back(worst);
  }
  return out;
}

std::array<double, 3> lambda_system_residual(const model::CkrCoefficients& c, const SymmetryCoefficients& s,
                                             double x) {
  const CoefficientJet jet(c);
  const double a1 = jet.a[0](x), a2 = jet.a[1](x), a3 = jet.a[2](x);
  const double l0 = s.lambda0(x), d0 = s.a0(x);
  const double l1 = s.lambda[0].value(x), l2 = s.lambda[1].value(x), l3 = s.lambda[2].value(x);
  return {
      s.lambda[0].derivative(x) - (l0 * jet.da[0](x) + l1 * a2 - l2 * a1 + d0 * a1),
      s.lambda[1].derivative(x) - (l0 * jet.da[1](x) + 2.0 * (l1 * a3 - l3 * a1) + d0 * a2),
      s.lambda[2].derivative(x) - (l0 * jet.da[2](x) + l2 * a3 - l3 * a2 + d0 * a3),
  };
}

IntegralForms mass_integral_forms(const Expr& mass, const Expr& v_eff, double energy, double amplitude,
                                  const SymmetryCoefficients& s) {
  if (!s.path) throw ValidationError("symmetry.path", "integral forms need sampled lambda coefficients");
  const ode::SampledPath& path = *s.path;
  const std::vector<double> xs(path.nodes().begin(), path.nodes().end());
  const Expr gap = Expr(energy) - v_eff;
  const Expr lambda0 = Expr(amplitude) * expr::exp(Expr::variable());
  const Expr d_source = expr::differentiate(lambda0 * mass * gap);

  std::vector<double> f1(xs.size()), f3(xs.size()), m(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double x = xs[k];
    m[k] = mass(x);
    const double lambda2 = path.node_value(k, 1);
    f1[k] = d_source(x) / m[k] - lambda2 * gap(x);
    f3[k] = m[k] * (lambda0(x) + lambda2);
  }
  const std::vector<double> i1 = ode::cumulative_integral(xs, f1);
  const std::vector<double> i3 = ode::cumulative_integral(xs, f3);
  const double c1 = path.node_value(0, 0) / m[0];
  const double c3 = path.node_value(0, 2) * m[0];
  std::vector<double> l1(xs.size()), l3(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    l1[k] = m[k] * (c1 + i1[k]);
    l3[k] = (c3 + i3[k]) / m[k];
  }
  return {ode::SampledPath(xs, 1, std::move(l1)), ode::SampledPath(xs, 1, std::move(l3))};
}

ode::SampledPath lambda2_integral_form(const model::CkrCoefficients& c, const SymmetryCoefficients& s) {
  if (!s.path) throw ValidationError("symmetry.path", "integral forms need sampled lambda coefficients");
  const ode::SampledPath& path = *s.path;
  const std::vector<double> xs(path.nodes().begin(), path.nodes().end());
  std::vector<double> f(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double x = xs[k];
    f[k] = 2.0 * (path.node_value(k, 0) * c.a3(x) - path.node_value(k, 2) * c.a1(x));
  }
  const std::vector<double> integral = ode::cumulative_integral(xs, f);
  const double base = s.lambda0(xs[0]) * c.a2(xs[0]);
  std::vector<double> out(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    out[k] = path.node_value(0, 1) + s.lambda0(xs[k]) * c.a2(xs[k]) - base + integral[k];
  }
  return ode::SampledPath(xs, 1, std::move(out));
}

}  // namespace ckrlie::symmetry
