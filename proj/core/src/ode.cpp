#include "ckrlie/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "ckrlie/errors.hpp"

namespace ckrlie::ode {
namespace {

using State = std::vector<double>;

bool beyond(std::span<const double> y, double threshold) {
  for (double v : y) {
    if (!std::isfinite(v) || std::abs(v) > threshold) return true;
  }
  return false;
}

bool all_finite(std::span<const double> y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

// Output abscissae after x0, ending exactly at x1.
std::vector<double> output_nodes(double x0, double x1, double step) {
  const double span = std::abs(x1 - x0);
  const double dir = x1 > x0 ? 1.0 : -1.0;
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(span / step - 1e-9)));
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t k = 1; k < n; ++k) out.push_back(x0 + dir * step * static_cast<double>(k));
  out.push_back(x1);
  return out;
}

class Engine {
 public:
  Engine(const Rhs& rhs, std::size_t n, const IntegratorConfig& cfg)
      : rhs_(rhs), n_(n), cfg_(cfg), k_(7, State(n)), tmp_(n), y5_(n) {}

  Solution run(double x0, std::span<const double> y0, double x1) {
    Solution sol;
    sol.dimension = n_;
    sol.stop_x = x0;
    State y(y0.begin(), y0.end());
    if (beyond(y, cfg_.blowup_threshold)) {
      sol.status = Status::kBlowUp;
      return sol;
    }
    record(sol, x0, y);
    if (x0 == x1) return sol;
    return cfg_.method == Method::kRk4 ? run_rk4(sol, x0, std::move(y), x1) : run_rk45(sol, x0, std::move(y), x1);
  }

 private:
  static void record(Solution& sol, double x, const State& y) {
    sol.xs.push_back(x);
    sol.states.insert(sol.states.end(), y.begin(), y.end());
    sol.stop_x = x;
  }

  void eval(double x, std::span<const double> y, State& dydx) { rhs_(x, y, dydx); }

  // One classical RK4 step; false when a stage is non-finite.
  bool rk4_step(double x, double h, State& y) {
    eval(x, y, k_[0]);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + 0.5 * h * k_[0][i];
    eval(x + 0.5 * h, tmp_, k_[1]);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + 0.5 * h * k_[1][i];
    eval(x + 0.5 * h, tmp_, k_[2]);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h * k_[2][i];
    eval(x + h, tmp_, k_[3]);
    for (int s = 0; s < 4; ++s) {
      if (!all_finite(k_[s])) return false;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      y[i] += h / 6.0 * (k_[0][i] + 2.0 * k_[1][i] + 2.0 * k_[2][i] + k_[3][i]);
    }
    return true;
  }

  Solution run_rk4(Solution& sol, double x, State y, double x1) {
    const double h_nominal = cfg_.step;
    const std::vector<double> targets =
        output_nodes(x, x1, cfg_.output_step > 0.0 ? cfg_.output_step : h_nominal);
    std::size_t steps = 0;
    for (double target : targets) {
      const double span = target - x;
      const auto n_sub =
          static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(span) / h_nominal - 1e-9)));
      const double h = span / static_cast<double>(n_sub);
      const double start = x;
      for (std::size_t s = 1; s <= n_sub; ++s) {
        if (steps++ >= cfg_.max_steps) {
          sol.status = Status::kStepLimit;
          return std::move(sol);
        }
        const double x_next = s == n_sub ? target : start + h * static_cast<double>(s);
        if (!rk4_step(x, h, y) || beyond(y, cfg_.blowup_threshold)) {
          sol.status = Status::kBlowUp;
          sol.stop_x = x_next;
          return std::move(sol);
        }
        x = x_next;
      }
      record(sol, x, y);
    }
    sol.status = Status::kCompleted;
    return std::move(sol);
  }

  // Dormand-Prince 5(4) tableau.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  // Attempts one step from (x, y) with k_[0] = f(x, y) already set. Returns the
  // scaled error norm (infinity for non-finite stages); y5_ holds the candidate.
  double dp_attempt(double x, double h, const State& y) {
    auto stage = [&](std::size_t out, double cx, std::initializer_list<double> a) {
      for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        std::size_t s = 0;
        for (double coef : a) acc += coef * k_[s++][i];
        tmp_[i] = y[i] + h * acc;
      }
      eval(x + cx * h, tmp_, k_[out]);
    };
    stage(1, c2, {a21});
    stage(2, c3, {a31, a32});
    stage(3, c4, {a41, a42, a43});
    stage(4, c5, {a51, a52, a53, a54});
    stage(5, 1.0, {a61, a62, a63, a64, a65});
    for (std::size_t i = 0; i < n_; ++i) {
      y5_[i] = y[i] + h * (b1 * k_[0][i] + b3 * k_[2][i] + b4 * k_[3][i] + b5 * k_[4][i] + b6 * k_[5][i]);
    }
    if (!all_finite(y5_)) return std::numeric_limits<double>::infinity();
    eval(x + h, y5_, k_[6]);
    double norm = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double e = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] + e5 * k_[4][i] +
                            e6 * k_[5][i] + e7 * k_[6][i]);
      const double scale = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y[i]), std::abs(y5_[i]));
      norm = std::max(norm, std::abs(e) / scale);
    }
    return std::isfinite(norm) ? norm : std::numeric_limits<double>::infinity();
  }

  Solution run_rk45(Solution& sol, double x, State y, double x1) {
    const double dir = x1 > x ? 1.0 : -1.0;
    const bool every_step = !(cfg_.output_step > 0.0);
    const std::vector<double> targets =
        every_step ? std::vector<double>{x1} : output_nodes(x, x1, cfg_.output_step);
    double h = std::min(cfg_.step, std::abs(x1 - x));
    std::size_t steps = 0;
    eval(x, y, k_[0]);
    for (double target : targets) {
      while (x != target) {
        if (steps++ >= cfg_.max_steps) {
          sol.status = Status::kStepLimit;
          return std::move(sol);
        }
        const double remaining = std::abs(target - x);
        const bool last = h >= remaining * (1.0 - 1e-12);
        const double step = last ? remaining : h;
        const double err = dp_attempt(x, dir * step, y);
        if (err <= 1.0) {
          x = last ? target : x + dir * step;
          y.swap(y5_);
          k_[0].swap(k_[6]);
          if (beyond(y, cfg_.blowup_threshold)) {
            sol.status = Status::kBlowUp;
            sol.stop_x = x;
            return std::move(sol);
          }
          if (every_step) record(sol, x, y);
          const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
          // keep the nominal step when the last one was shortened to hit a node
          h = std::max(h, step) * fac;
        } else {
          const double fac = std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0) : 0.25;
          h = step * fac;
        }
        const double h_min = 1e-14 * std::max(1.0, std::abs(x));
        if (h < h_min) {
          // the step collapsed against a singularity of the flow
          sol.status = Status::kBlowUp;
          sol.stop_x = x;
          return std::move(sol);
        }
      }
      if (!every_step) record(sol, x, y);
    }
    sol.status = Status::kCompleted;
    return std::move(sol);
  }

  const Rhs& rhs_;
  std::size_t n_;
  const IntegratorConfig& cfg_;
  std::vector<State> k_;
  State tmp_, y5_;
};

// Value at `at` of the Lagrange polynomial through (xs[i], ys[i]).
double lagrange(std::span<const double> xs, std::span<const double> ys, double at) {
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double w = ys[i];
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j != i) w *= (at - xs[j]) / (xs[i] - xs[j]);
    }
    sum += w;
  }
  return sum;
}

// Fornberg weights for the first derivative at `at` on the nodes `xs`.
std::vector<double> fd_weights(std::span<const double> xs, double at) {
  const std::size_t n = xs.size();
  std::vector<double> c0(n, 0.0), c1(n, 0.0);
  double c = 1.0;
  double prev = xs[0] - at;
  c0[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    double prod = 1.0;
    const double di = xs[i] - at;
    for (std::size_t j = 0; j < i; ++j) {
      const double diff = xs[i] - xs[j];
      prod *= diff;
      if (j == i - 1) {
        c1[i] = c * (c0[i - 1] - prev * c1[i - 1]) / prod;
        c0[i] = -c * prev * c0[i - 1] / prod;
      }
      c1[j] = (di * c1[j] - c0[j]) / diff;
      c0[j] = di * c0[j] / diff;
    }
    c = prod;
    prev = di;
  }
  return c1;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("integrator.h>0", "step must be positive");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw ValidationError("integrator.tolerances>0", "tolerances must be positive");
  }
  if (!(blowup_threshold > 0.0)) {
    throw ValidationError("integrator.threshold>0", "blow-up threshold must be positive");
  }
  if (max_steps == 0) throw ValidationError("integrator.max_steps>0", "max_steps must be positive");
  if (output_step < 0.0 || !std::isfinite(output_step)) {
    throw ValidationError("integrator.output_step>=0", "output step must be non-negative");
  }
}

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::kCompleted:
      return "completed";
    case Status::kBlowUp:
      return "blow-up";
    case Status::kStepLimit:
      return "step-limit";
  }
  return "unknown";
}

std::string_view to_string(Method m) noexcept { return m == Method::kRk4 ? "rk4" : "rk45"; }

Solution integrate(const Rhs& rhs, double x0, std::span<const double> y0, double x1,
                   const IntegratorConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(x0) || !std::isfinite(x1)) throw ValidationError("integrator.range", "non-finite bounds");
  Engine engine(rhs, y0.size(), cfg);
  return engine.run(x0, y0, x1);
}

Trajectory integrate_ckr(const model::CkrCoefficients& c, double x0, PhasePoint p0, double x1,
                         const IntegratorConfig& cfg) {
  const Rhs rhs = [&c](double x, std::span<const double> p, std::span<double> dp) {
    const double a1 = c.a1(x);
    const double a2 = c.a2(x);
    const double a3 = c.a3(x);
    dp[0] = a2 * p[0] + 2.0 * a3 * p[0] * p[1];
    dp[1] = a1 + a2 * p[1] + a3 * (p[1] * p[1] - p[0] * p[0]);
  };
  const std::array<double, 2> y0{p0.p1, p0.p2};
  const Solution sol = integrate(rhs, x0, y0, x1, cfg);
  Trajectory t;
  t.status = sol.status;
  t.stop_x = sol.stop_x;
  t.samples.reserve(sol.xs.size());
  for (std::size_t k = 0; k < sol.xs.size(); ++k) {
    t.samples.push_back({sol.xs[k], sol.states[2 * k], sol.states[2 * k + 1]});
  }
  return t;
}

// ---------------------------------------------------------------------------

SampledPath::SampledPath(std::vector<double> xs, std::size_t dimension, std::vector<double> values,
                         std::vector<double> derivatives)
    : xs_(std::move(xs)), dimension_(dimension), values_(std::move(values)), derivatives_(std::move(derivatives)) {
  if (dimension_ == 0 || xs_.empty() || values_.size() != xs_.size() * dimension_) {
    throw ValidationError("path.shape", "values must hold dimension entries per node");
  }
  if (!derivatives_.empty() && derivatives_.size() != values_.size()) {
    throw ValidationError("path.shape", "derivative samples must match values");
  }
  if (xs_.size() > 1) {
    const bool increasing = xs_[1] > xs_[0];
    for (std::size_t k = 1; k < xs_.size(); ++k) {
      if (increasing ? !(xs_[k] > xs_[k - 1]) : !(xs_[k] < xs_[k - 1])) {
        throw ValidationError("path.monotone", "nodes must be strictly monotone");
      }
    }
  }
}

double SampledPath::node_derivative(std::size_t k, std::size_t c) const {
  if (has_derivatives()) return derivatives_[k * dimension_ + c];
  if (xs_.size() < 2) return 0.0;
  const std::size_t lo = k + 1 < xs_.size() ? k : k - 1;
  return (node_value(lo + 1, c) - node_value(lo, c)) / (xs_[lo + 1] - xs_[lo]);
}

SampledPath::Bracket SampledPath::locate(double x) const {
  const std::size_t n = xs_.size();
  if (n == 1) {
    if (x != xs_[0]) throw DomainError(DomainKind::kOutOfRange, x);
    return {0, 0.0};
  }
  const bool increasing = xs_[1] > xs_[0];
  const double lo = increasing ? xs_.front() : xs_.back();
  const double hi = increasing ? xs_.back() : xs_.front();
  const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  if (x < lo - slack || x > hi + slack) throw DomainError(DomainKind::kOutOfRange, x);
  x = std::clamp(x, lo, hi);
  std::size_t k;
  if (increasing) {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    k = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
  } else {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x, std::greater<>());
    k = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
  }
  k = std::min(k, n - 2);
  const double t = (x - xs_[k]) / (xs_[k + 1] - xs_[k]);
  return {k, t};
}

double SampledPath::value(std::size_t c, double x) const {
  const auto [k, t] = locate(x);
  if (xs_.size() == 1) return node_value(0, c);
  return (1.0 - t) * node_value(k, c) + t * node_value(k + 1, c);
}

std::vector<double> SampledPath::value(double x) const {
  std::vector<double> out(dimension_);
  for (std::size_t c = 0; c < dimension_; ++c) out[c] = value(c, x);
  return out;
}

double SampledPath::derivative(std::size_t c, double x) const {
  const auto [k, t] = locate(x);
  if (xs_.size() == 1) return has_derivatives() ? derivatives_[c] : 0.0;
  if (has_derivatives()) return (1.0 - t) * node_derivative(k, c) + t * node_derivative(k + 1, c);
  return (node_value(k + 1, c) - node_value(k, c)) / (xs_[k + 1] - xs_[k]);
}

SampledPath SampledPath::component(std::size_t c) const {
  std::vector<double> v(xs_.size());
  std::vector<double> d;
  for (std::size_t k = 0; k < xs_.size(); ++k) v[k] = node_value(k, c);
  if (has_derivatives()) {
    d.resize(xs_.size());
    for (std::size_t k = 0; k < xs_.size(); ++k) d[k] = derivatives_[k * dimension_ + c];
  }
  return SampledPath(xs_, 1, std::move(v), std::move(d));
}

SampledPath integrate_linear(const LinearSystem& system, double x0, std::span<const double> y0, double x1,
                             const IntegratorConfig& cfg) {
  const std::size_t n = system.dimension;
  if (n == 0 || y0.size() != n) throw ValidationError("linear.dimension", "initial data size mismatch");
  std::vector<double> matrix(n * n);
  std::vector<double> forcing(n);
  auto rhs = [&](double x, std::span<const double> y, std::span<double> dy) {
    system.coefficients(x, matrix, forcing);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = forcing[i];
      for (std::size_t j = 0; j < n; ++j) acc += matrix[i * n + j] * y[j];
      dy[i] = acc;
    }
  };
  const Solution sol = integrate(rhs, x0, y0, x1, cfg);
  if (sol.status != Status::kCompleted) {
    throw NumericalError("linear integration ended with status " + std::string(to_string(sol.status)),
                         sol.stop_x);
  }
  std::vector<double> derivs(sol.states.size());
  for (std::size_t k = 0; k < sol.xs.size(); ++k) {
    rhs(sol.xs[k], sol.state(k), std::span<double>(derivs.data() + k * n, n));
  }
  return SampledPath(sol.xs, n, sol.states, std::move(derivs));
}

std::vector<double> cumulative_integral(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (ys.size() != n) throw ValidationError("quadrature.shape", "xs and ys differ in length");
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  // three-point Gauss-Legendre, exact for the cubic interpolant
  static constexpr std::array<double, 3> kNodes{-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr std::array<double, 3> kWeights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const std::size_t width = std::min<std::size_t>(4, n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    // stencil of `width` nodes containing [k, k+1], centred where possible
    std::size_t first = k > 0 ? k - 1 : 0;
    if (first + width > n) first = n - width;
    const auto sx = xs.subspan(first, width);
    const auto sy = ys.subspan(first, width);
    const double mid = 0.5 * (xs[k] + xs[k + 1]);
    const double half = 0.5 * (xs[k + 1] - xs[k]);
    double panel = 0.0;
    for (std::size_t q = 0; q < 3; ++q) panel += kWeights[q] * lagrange(sx, sy, mid + half * kNodes[q]);
    out[k + 1] = out[k] + half * panel;
  }
  return out;
}

SampledPath antiderivative(const expr::Expr& f, double x0, double x1, std::size_t intervals) {
  if (intervals == 0) throw ValidationError("quadrature.intervals>0", "need at least one panel");
  const double h = (x1 - x0) / static_cast<double>(intervals);
  std::vector<double> xs(intervals + 1);
  std::vector<double> values(intervals + 1, 0.0);
  std::vector<double> derivs(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) xs[k] = x0 + h * static_cast<double>(k);
  xs.back() = x1;
  derivs[0] = f(xs[0]);
  for (std::size_t k = 0; k < intervals; ++k) {
    derivs[k + 1] = f(xs[k + 1]);
    const double mid = f(0.5 * (xs[k] + xs[k + 1]));
    values[k + 1] = values[k] + (xs[k + 1] - xs[k]) / 6.0 * (derivs[k] + 4.0 * mid + derivs[k + 1]);
  }
  return SampledPath(std::move(xs), 1, std::move(values), std::move(derivs));
}

SampledPath antiderivative(const SampledPath& f, std::size_t component) {
  std::vector<double> ys(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) ys[k] = f.node_value(k, component);
  std::vector<double> xs(f.nodes().begin(), f.nodes().end());
  std::vector<double> values = cumulative_integral(xs, ys);
  return SampledPath(std::move(xs), 1, std::move(values), std::move(ys));
}

std::vector<double> differentiate_samples(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (ys.size() != n) throw ValidationError("quadrature.shape", "xs and ys differ in length");
  if (n < 2) throw ValidationError("quadrature.nodes", "need at least two nodes to differentiate");
  const std::size_t width = std::min<std::size_t>(5, n);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t first = k >= width / 2 ? k - width / 2 : 0;
    if (first + width > n) first = n - width;
    const std::vector<double> w = fd_weights(xs.subspan(first, width), xs[k]);
    double sum = 0.0;
    for (std::size_t i = 0; i < width; ++i) sum += w[i] * ys[first + i];
    out[k] = sum;
  }
  return out;
}

// ---------------------------------------------------------------------------

Profile::Profile(expr::Expr e) : impl_(Closed{e, expr::differentiate(e)}) {}

Profile::Profile(std::shared_ptr<const SampledPath> path, std::size_t component)
    : impl_(Sampled{std::move(path), component}) {
  const auto& s = std::get<Sampled>(impl_);
  if (!s.path || component >= s.path->dimension()) {
    throw ValidationError("profile.component", "component outside path dimension");
  }
}

double Profile::value(double x) const {
  if (const auto* c = std::get_if<Closed>(&impl_)) return c->f(x);
  const auto& s = std::get<Sampled>(impl_);
  return s.path->value(s.component, x);
}

double Profile::derivative(double x) const {
  if (const auto* c = std::get_if<Closed>(&impl_)) return c->df(x);
  const auto& s = std::get<Sampled>(impl_);
  return s.path->derivative(s.component, x);
}

}  // namespace ckrlie::ode
