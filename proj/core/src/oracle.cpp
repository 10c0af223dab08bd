#include "ckrlie/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ckrlie/errors.hpp"

namespace ckrlie::oracle {
namespace {

using expr::Expr;

constexpr Complex kI{0.0, 1.0};

}  // namespace

LinearEquation case1_equation(const model::ProblemSpec& p) {
  if (!(p.mass > 0.0)) throw ValidationError("problem.m>0", "particle mass must be positive");
  return {Expr(0.0), Expr(2.0 * p.mass) * (p.potential - Expr(p.energy))};
}

LinearEquation case2_equation(const Expr& potential, double energy, const model::MassProfile& m,
                              const model::MassOrdering& ordering) {
  const Expr v_eff = model::effective_potential(m, ordering, potential);
  return {expr::differentiate(m.mass) / m.mass, m.mass * (v_eff - Expr(energy))};
}

LinearEquation case3_equation(const model::SwansonParams& s, double energy) {
  const model::SwansonReduction r = model::swanson_reduce(s);
  const Expr nt(r.nu_tilde);
  const Expr lead = nt * s.alpha1 * s.alpha1;
  return {(r.k1 - Expr(2.0) * nt * s.alpha1 * expr::differentiate(s.alpha1)) / lead, (r.k2 - Expr(energy)) / lead};
}

WavePath integrate_schrodinger(const LinearEquation& eq, Complex psi0, Complex dpsi0, double x0, double x1,
                               const ode::IntegratorConfig& cfg) {
  // y = (Re psi, Im psi, Re psi', Im psi')
  const ode::Rhs rhs = [&eq](double x, std::span<const double> y, std::span<double> dy) {
    const double a = eq.drift(x), b = eq.potential_term(x);
    dy[0] = y[2];
    dy[1] = y[3];
    dy[2] = a * y[2] + b * y[0];
    dy[3] = a * y[3] + b * y[1];
  };
  const std::array<double, 4> y0{psi0.real(), psi0.imag(), dpsi0.real(), dpsi0.imag()};
  const ode::Solution sol = ode::integrate(rhs, x0, y0, x1, cfg);
  WavePath w;
  w.status = sol.status;
  w.stop_x = sol.stop_x;
  w.samples.reserve(sol.xs.size());
  for (std::size_t k = 0; k < sol.xs.size(); ++k) {
    const auto y = sol.state(k);
    const Complex psi{y[0], y[1]};
    w.samples.push_back({sol.xs[k], psi, {y[2], y[3]}, psi == 0.0});
  }
  return w;
}

ode::Trajectory qmf(const WavePath& w, const model::GaugeTriple& g, double threshold) {
  ode::Trajectory t;
  t.status = w.status;
  t.stop_x = w.stop_x;
  t.samples.reserve(w.samples.size());
  for (const WaveSample& s : w.samples) {
    if (s.node || s.psi == 0.0) {
      t.status = ode::Status::kBlowUp;
      t.stop_x = s.x;
      return t;
    }
    const Complex momentum = -kI * s.dpsi / s.psi;
    const Complex p = (g.alpha(s.x) * momentum + kI * g.sigma(s.x)) / g.delta(s.x);
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()) || std::abs(p) > threshold) {
      t.status = ode::Status::kBlowUp;
      t.stop_x = s.x;
      return t;
    }
    t.samples.push_back({s.x, p.real(), p.imag()});
  }
  return t;
}

WavePath wave_from_qmf(const ode::Trajectory& t, const model::GaugeTriple& g, Complex psi0) {
  const std::size_t n = t.samples.size();
  std::vector<double> xs(n), re(n), im(n);
  std::vector<Complex> momentum(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = t.samples[k];
    xs[k] = s.x;
    momentum[k] = (g.delta(s.x) * Complex{s.p1, s.p2} - kI * g.sigma(s.x)) / g.alpha(s.x);
    re[k] = momentum[k].real();
    im[k] = momentum[k].imag();
  }
  const std::vector<double> ire = ode::cumulative_integral(xs, re);
  const std::vector<double> iim = ode::cumulative_integral(xs, im);
  WavePath w;
  w.status = t.status;
  w.stop_x = t.stop_x;
  w.samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex psi = psi0 * std::exp(kI * Complex{ire[k], iim[k]});
    w.samples.push_back({xs[k], psi, kI * momentum[k] * psi, psi == 0.0});
  }
  return w;
}

ode::SampledPath schrodinger_residual(const WavePath& w, const LinearEquation& eq) {
  const std::size_t n = w.samples.size();
  std::vector<double> xs(n);
  std::array<std::vector<double>, 4> cols;
  for (auto& c : cols) c.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = w.samples[k];
    xs[k] = s.x;
    cols[0][k] = s.psi.real();
    cols[1][k] = s.psi.imag();
    cols[2][k] = s.dpsi.real();
    cols[3][k] = s.dpsi.imag();
  }
  std::array<std::vector<double>, 4> slopes;
  for (std::size_t c = 0; c < 4; ++c) slopes[c] = ode::differentiate_samples(xs, cols[c]);
  std::vector<double> defect(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = w.samples[k];
    const Complex dpsi_fd{slopes[0][k], slopes[1][k]};
    const Complex ddpsi_fd{slopes[2][k], slopes[3][k]};
    const Complex ddpsi = eq.drift(s.x) * s.dpsi + eq.potential_term(s.x) * s.psi;
    defect[k] = std::abs(dpsi_fd - s.dpsi) + std::abs(ddpsi_fd - ddpsi);
  }
  return ode::SampledPath(std::move(xs), 1, std::move(defect));
}

Comparison compare(const ode::Trajectory& reference, const ode::Trajectory& candidate) {
  Comparison out;
  if (reference.samples.empty() || candidate.samples.empty()) return out;
  std::vector<double> xs, values;
  xs.reserve(candidate.samples.size());
  values.reserve(2 * candidate.samples.size());
  for (const auto& s : candidate.samples) {
    xs.push_back(s.x);
    values.push_back(s.p1);
    values.push_back(s.p2);
  }
  const double lo = std::min(xs.front(), xs.back());
  const double hi = std::max(xs.front(), xs.back());
  const bool single = xs.size() < 2;
  const ode::SampledPath path = single ? ode::SampledPath() : ode::SampledPath(xs, 2, values);
  out.x_end = reference.samples.front().x;
  for (const auto& r : reference.samples) {
    if (r.x < lo || r.x > hi) break;
    double c1 = values[0], c2 = values[1];
    if (!single) {
      c1 = path.value(0, r.x);
      c2 = path.value(1, r.x);
    }
    const double d = std::hypot(r.p1 - c1, r.p2 - c2);
    out.samples.push_back({r.x, r.p1, r.p2, c1, c2, d});
    out.sup_distance = std::max(out.sup_distance, d);
    out.x_end = r.x;
  }
  return out;
}

}  // namespace ckrlie::oracle
