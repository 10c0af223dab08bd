/**
 * @file ode.hpp
 * @brief Explicit Runge-Kutta integration of the CKR flow and of auxiliary
 *        linear systems, sampled paths and cumulative quadrature.
 */
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "ckrlie/expr.hpp"
#include "ckrlie/model.hpp"
#include "ckrlie/phase.hpp"

namespace ckrlie::ode {

enum class Method {
  kRk4,   ///< classical fixed-step fourth order
  kRk45,  ///< Dormand-Prince 5(4) with embedded error control
};

struct IntegratorConfig {
  Method method = Method::kRk4;
  /// Fixed step for kRk4, initial step for kRk45.
  double step = 1e-3;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  /// Any state component beyond this magnitude terminates the run with Status::kBlowUp.
  double blowup_threshold = 1e8;
  std::size_t max_steps = 10'000'000;
  /// When positive, samples are recorded exactly at x0 + k * output_step (and x1);
  /// otherwise after every accepted step.
  double output_step = 0.0;

  void validate() const;
};

enum class Status { kCompleted, kBlowUp, kStepLimit };

[[nodiscard]] std::string_view to_string(Status s) noexcept;
[[nodiscard]] std::string_view to_string(Method m) noexcept;

using Rhs = std::function<void(double x, std::span<const double> y, std::span<double> dydx)>;

/** @brief Raw output of the integration engine. States are stored row-major. */
struct Solution {
  std::size_t dimension = 0;
  std::vector<double> xs;
  std::vector<double> states;
  Status status = Status::kCompleted;
  /// Last x reached; for kBlowUp, the abscissa where the threshold was crossed.
  double stop_x = 0.0;

  [[nodiscard]] std::span<const double> state(std::size_t k) const {
    return {states.data() + k * dimension, dimension};
  }
};

/// Integrates y' = rhs(x, y) from x0 to x1 (either direction). Domain errors raised
/// by `rhs` propagate unchanged.
[[nodiscard]] Solution integrate(const Rhs& rhs, double x0, std::span<const double> y0, double x1,
                                 const IntegratorConfig& cfg);

struct TrajectorySample {
  double x;
  double p1;
  double p2;
};

/** @brief Sampled solution of a CKR flow; every stored value is finite. */
struct Trajectory {
  std::vector<TrajectorySample> samples;
  Status status = Status::kCompleted;
  double stop_x = 0.0;
};

/// p1' = a2 p1 + 2 a3 p1 p2,  p2' = a1 + a2 p2 + a3 (p2^2 - p1^2).
[[nodiscard]] Trajectory integrate_ckr(const model::CkrCoefficients& c, double x0, PhasePoint p0,
                                       double x1, const IntegratorConfig& cfg);

/**
 * @brief Vector-valued samples on strictly monotone nodes.
 *
 * Queries between nodes interpolate linearly. When derivative samples are
 * present, derivative() interpolates them; otherwise it returns the slope of
 * the linear interpolant.
 */
class SampledPath {
 public:
  SampledPath() = default;
  /// `values` and `derivatives` are row-major, `dimension` entries per node.
  SampledPath(std::vector<double> xs, std::size_t dimension, std::vector<double> values,
              std::vector<double> derivatives = {});

  [[nodiscard]] std::size_t size() const noexcept { return xs_.size(); }
  [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
  [[nodiscard]] std::span<const double> nodes() const noexcept { return xs_; }
  [[nodiscard]] bool has_derivatives() const noexcept { return !derivatives_.empty(); }

  [[nodiscard]] double node_value(std::size_t k, std::size_t component) const {
    return values_[k * dimension_ + component];
  }
  [[nodiscard]] double node_derivative(std::size_t k, std::size_t component) const;

  [[nodiscard]] double value(std::size_t component, double x) const;
  [[nodiscard]] std::vector<double> value(double x) const;
  [[nodiscard]] double derivative(std::size_t component, double x) const;

  /// Column `component` as a one-dimensional path on the same nodes.
  [[nodiscard]] SampledPath component(std::size_t component) const;

 private:
  struct Bracket {
    std::size_t k;
    double t;
  };
  [[nodiscard]] Bracket locate(double x) const;

  std::vector<double> xs_;
  std::size_t dimension_ = 0;
  std::vector<double> values_;
  std::vector<double> derivatives_;
};

/** @brief y' = A(x) y + b(x) with A row-major n x n. */
struct LinearSystem {
  std::size_t dimension = 0;
  std::function<void(double x, std::span<double> matrix, std::span<double> forcing)> coefficients;
};

/// Integrates a linear system; derivative samples are stored. Throws NumericalError
/// if the run does not complete.
[[nodiscard]] SampledPath integrate_linear(const LinearSystem& system, double x0,
                                           std::span<const double> y0, double x1,
                                           const IntegratorConfig& cfg);

/// Cumulative integral of samples (xs, ys) from xs[0], using the local cubic
/// interpolant on each interval (fourth-order on smooth data, any node spacing).
[[nodiscard]] std::vector<double> cumulative_integral(std::span<const double> xs,
                                                      std::span<const double> ys);

/// First derivative at every node from the interpolating polynomial through the
/// five nearest nodes (one-sided near the ends).
[[nodiscard]] std::vector<double> differentiate_samples(std::span<const double> xs,
                                                        std::span<const double> ys);

/// F(x) = int_{x0}^{x} f on `intervals` equal panels (Simpson per panel). F(x0) = 0,
/// derivative samples hold f.
[[nodiscard]] SampledPath antiderivative(const expr::Expr& f, double x0, double x1,
                                         std::size_t intervals);
/// Cumulative integral of one component of `f` on its own nodes.
[[nodiscard]] SampledPath antiderivative(const SampledPath& f, std::size_t component = 0);

/**
 * @brief A scalar function of x with a derivative: either a closed-form Expr
 *        (exact derivative) or one component of a SampledPath.
 */
class Profile {
 public:
  Profile() : Profile(expr::Expr(0.0)) {}
  Profile(expr::Expr e);  // NOLINT(google-explicit-constructor)
  Profile(std::shared_ptr<const SampledPath> path, std::size_t component);

  [[nodiscard]] double value(double x) const;
  [[nodiscard]] double derivative(double x) const;
  [[nodiscard]] double operator()(double x) const { return value(x); }

  [[nodiscard]] bool is_closed_form() const noexcept { return std::holds_alternative<Closed>(impl_); }

 private:
  struct Closed {
    expr::Expr f;
    expr::Expr df;
  };
  struct Sampled {
    std::shared_ptr<const SampledPath> path;
    std::size_t component;
  };
  std::variant<Closed, Sampled> impl_;
};

}  // namespace ckrlie::ode
