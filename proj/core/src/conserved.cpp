#include "ckrlie/conserved.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ckrlie/errors.hpp"
#include "ckrlie/geometry.hpp"

namespace ckrlie::conserved {
namespace {

using expr::Expr;

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void require_k1_zero(const model::SwansonParams& s) {
  if (s.nu[1] != s.nu[2] || s.nu[3] != s.nu[4]) {
    throw ValidationError("swanson.k1=0", "the U2 = 0 reduction needs nu1 = nu2 and nu3 = nu4");
  }
}

}  // namespace

double UpsilonTriple::operator()(double x, PhasePoint q) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    const double w = upsilon[j].value(x);
    if (w != 0.0) sum += w * geometry::hamiltonian(geometry::kGenerators[j], q);
  }
  return sum;
}

UpsilonTriple solve_euler(const model::CkrCoefficients& c, std::array<double, 3> initial, double x0, double x1,
                          const ode::IntegratorConfig& cfg) {
  ode::LinearSystem system;
  system.dimension = 3;
  system.coefficients = [&c](double x, std::span<double> m, std::span<double> f) {
    const auto [a1, a2, a3] = c(x);
    m[0] = a2, m[1] = -a1, m[2] = 0.0;
    m[3] = 2.0 * a3, m[4] = 0.0, m[5] = -2.0 * a1;
    m[6] = 0.0, m[7] = a3, m[8] = -a2;
    std::fill(f.begin(), f.end(), 0.0);
  };
  auto path = std::make_shared<const ode::SampledPath>(ode::integrate_linear(system, x0, initial, x1, cfg));
  UpsilonTriple u;
  u.upsilon = {ode::Profile(path, 0), ode::Profile(path, 1), ode::Profile(path, 2)};
  u.path = std::move(path);
  return u;
}

std::array<double, 3> euler_residual(const model::CkrCoefficients& c, const UpsilonTriple& u, double x) {
  const auto [a1, a2, a3] = c(x);
  const double u1 = u.upsilon[0].value(x), u2 = u.upsilon[1].value(x), u3 = u.upsilon[2].value(x);
  return {u.upsilon[0].derivative(x) - (a2 * u1 - a1 * u2),
          u.upsilon[1].derivative(x) - 2.0 * (a3 * u1 - a1 * u3),
          u.upsilon[2].derivative(x) - (a3 * u2 - a2 * u3)};
}

double branch_constraint(const model::CkrCoefficients& c, const UpsilonTriple& u, double x) {
  return c.a3(x) * u.upsilon[0].value(x) - c.a1(x) * u.upsilon[2].value(x);
}

double LieIntegralSpec::ratio() const {
  if (plus == 0.0) throw ValidationError("lie.plus!=0", "the constant multiplying H3 must be nonzero");
  return minus / plus;
}

UpsilonTriple closed_form_upsilon(const LieIntegralSpec& spec, const CaseData& data) {
  UpsilonTriple u;
  const Expr minus(spec.minus), plus(spec.plus);
  switch (spec.kind) {
    case LieCase::kI: {
      const auto* d = std::get_if<ConstantMassData>(&data);
      if (d == nullptr) throw ValidationError("lie.case", "case I needs sigma");
      const ode::SampledPath s = ode::antiderivative(d->sigma, d->x0, d->x1, d->intervals);
      const std::size_t n = s.size();
      std::vector<double> values(3 * n, 0.0), derivs(3 * n, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        const double sigma = s.node_derivative(k, 0);
        const double lo = spec.minus * std::exp(-2.0 * s.node_value(k, 0));
        const double hi = spec.plus * std::exp(2.0 * s.node_value(k, 0));
        values[3 * k] = lo;
        values[3 * k + 2] = hi;
        derivs[3 * k] = -2.0 * sigma * lo;
        derivs[3 * k + 2] = 2.0 * sigma * hi;
      }
      auto path = std::make_shared<const ode::SampledPath>(
          std::vector<double>(s.nodes().begin(), s.nodes().end()), 3, std::move(values), std::move(derivs));
      u.upsilon = {ode::Profile(path, 0), ode::Profile(path, 1), ode::Profile(path, 2)};
      u.path = std::move(path);
      return u;
    }
    case LieCase::kII: {
      const auto* d = std::get_if<VariableMassData>(&data);
      if (d == nullptr) throw ValidationError("lie.case", "case II needs the mass profile");
      u.upsilon = {ode::Profile(minus * d->mass), ode::Profile(Expr(0.0)), ode::Profile(plus / d->mass)};
      return u;
    }
    case LieCase::kIII: {
      const auto* d = std::get_if<SwansonData>(&data);
      if (d == nullptr) throw ValidationError("lie.case", "case III needs the Swanson parameters");
      require_k1_zero(d->params);
      const Expr sq = d->params.alpha1 * d->params.alpha1;
      u.upsilon = {ode::Profile(minus / sq), ode::Profile(Expr(0.0)), ode::Profile(plus * sq)};
      return u;
    }
  }
  return u;
}

DriftReport conservation_check(const UpsilonTriple& u, const ode::Trajectory& t) {
  DriftReport r;
  r.samples = t.samples.size();
  if (t.samples.empty()) return r;
  r.values.reserve(t.samples.size());
  for (const auto& s : t.samples) r.values.push_back(u(s.x, {s.p1, s.p2}));
  r.reference = r.values.front();
  for (double v : r.values) r.max_abs_drift = std::max(r.max_abs_drift, std::abs(v - r.reference));
  r.relative_drift = r.reference != 0.0 ? r.max_abs_drift / std::abs(r.reference) : r.max_abs_drift;
  return r;
}

SigmaResult sigma_constraint(const SigmaProblem& p) {
  p.grid.validate();
  if (!(p.mass > 0.0)) throw ValidationError("problem.m>0", "particle mass must be positive");
  if (!(p.damping > 0.0 && p.damping <= 1.0)) throw ValidationError("sigma.damping", "damping must lie in (0, 1]");
  const std::vector<double> xs = p.grid.nodes();
  const std::size_t n = xs.size();
  const double two_m = 2.0 * p.mass;
  const double c0 = p.c0.value_or(two_m * p.energy);

  std::vector<double> drive(n);
  for (std::size_t k = 0; k < n; ++k) {
    drive[k] = p.small_sigma ? two_m * p.potential(xs[k]) : two_m * (p.potential(xs[k]) - p.energy);
  }
  // sigma' = drive - sigma^2 + source(int sigma)
  auto source = [&](double integral) {
    return p.small_sigma ? -4.0 * c0 * integral : c0 * std::exp(-4.0 * integral);
  };

  SigmaResult out;
  out.c0 = c0;
  std::vector<double> sigma(n, p.sigma0), rhs(n), update(n);
  for (out.iterations = 1; out.iterations <= p.max_iterations; ++out.iterations) {
    const std::vector<double> integral = ode::cumulative_integral(xs, sigma);
    for (std::size_t k = 0; k < n; ++k) rhs[k] = drive[k] - sigma[k] * sigma[k] + source(integral[k]);
    const std::vector<double> next = ode::cumulative_integral(xs, rhs);
    for (std::size_t k = 0; k < n; ++k) update[k] = p.damping * (p.sigma0 + next[k] - sigma[k]);
    for (std::size_t k = 0; k < n; ++k) sigma[k] += update[k];
    out.last_update = sup_norm(update);
    if (!std::isfinite(out.last_update)) throw NumericalError("sigma iteration diverged", xs.back());
    if (out.last_update <= p.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.iterations = std::min(out.iterations, p.max_iterations);

  const std::vector<double> integral = ode::cumulative_integral(xs, sigma);
  const std::vector<double> slope = ode::differentiate_samples(xs, sigma);
  std::vector<double> residual(n);
  for (std::size_t k = 0; k < n; ++k) {
    residual[k] = slope[k] - drive[k] + sigma[k] * sigma[k] - source(integral[k]);
  }
  out.sigma = ode::SampledPath(xs, 1, std::move(sigma), slope);
  out.residual = ode::SampledPath(xs, 1, std::move(residual));
  return out;
}

ode::SampledPath mass_constraint(const MassProblem& p, const ode::IntegratorConfig& cfg) {
  p.grid.validate();
  if (p.b0 == 0.0) throw ValidationError("mass.B0!=0", "B0 must be nonzero");
  if (p.branch != 1 && p.branch != -1) throw ValidationError("mass.branch", "branch must be +1 or -1");
  const std::vector<double> xs = p.grid.nodes();
  if (p.ordering_a == 0.0) {
    std::vector<double> m(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) m[k] = (p.energy - p.potential(xs[k])) / p.b0;
    return ode::SampledPath(xs, 1, std::move(m));
  }
  if (p.mass_start == 0.0) throw ValidationError("mass.M!=0", "initial mass must be nonzero");

  const double scale = 1.0 / std::abs(p.ordering_a);
  auto slope = [&](double x, double m) {
    double radicand = (p.energy - p.potential(x) - p.b0 * m) * m * m * m;
    if (radicand < 0.0) {
      if (radicand > -1e-12 * (1.0 + std::abs(m * m * m))) {
        radicand = 0.0;
      } else {
        throw DomainError(DomainKind::kSqrtNegative, x, "mass constraint radicand");
      }
    }
    return p.branch * std::sqrt(radicand) * scale;
  };
  ode::IntegratorConfig run = cfg;
  if (run.output_step <= 0.0) run.output_step = (p.grid.x1 - p.grid.x0) / static_cast<double>(p.grid.points - 1);
  const ode::Rhs rhs = [&](double x, std::span<const double> y, std::span<double> dy) { dy[0] = slope(x, y[0]); };
  const std::array<double, 1> y0{p.mass_start};
  const ode::Solution sol = ode::integrate(rhs, p.grid.x0, y0, p.grid.x1, run);
  if (sol.status != ode::Status::kCompleted) throw NumericalError("mass constraint integration stopped", sol.stop_x);
  std::vector<double> derivs(sol.xs.size());
  for (std::size_t k = 0; k < sol.xs.size(); ++k) derivs[k] = slope(sol.xs[k], sol.states[k]);
  return ode::SampledPath(sol.xs, 1, sol.states, std::move(derivs));
}

ode::SampledPath swanson_condition(const model::SwansonParams& s, double energy, const model::Grid& grid) {
  grid.validate();
  require_k1_zero(s);
  const model::SwansonReduction r = model::swanson_reduce(s);
  const Expr dk2 = expr::differentiate(r.k2);
  const Expr da1 = expr::differentiate(s.alpha1);
  const std::vector<double> xs = grid.nodes();
  std::vector<double> values(2 * xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double x = xs[k];
    const double a1 = s.alpha1(x);
    if (a1 == 0.0) throw ValidationError("swanson.alpha1!=0", "alpha1 vanishes at x = " + std::to_string(x));
    values[2 * k] = dk2(x) - 2.0 * r.nu_tilde * da1(x) / (a1 * a1 * a1);
    values[2 * k + 1] = energy - r.k2(x) - r.nu_tilde / (a1 * a1);
  }
  return ode::SampledPath(xs, 2, std::move(values));
}

}  // namespace ckrlie::conserved
