// Loading of ckr-lie run configurations (INI text, see docs/config.md).
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ckrlie/expr.hpp"
#include "ckrlie/model.hpp"
#include "ckrlie/ode.hpp"
#include "ckrlie/phase.hpp"

namespace ckrlie::cli {

enum class CaseKind { kI, kII, kIII };

struct SymmetryBlock {
  expr::Expr lambda0 = expr::parse("exp(x)");
  std::array<double, 3> initial{0.0, 0.0, 0.0};
  std::size_t phase_points = 16;
};

struct LieBlock {
  bool closed_form = true;
  double minus = 1.0;
  double plus = 1.0;
  /// Euler-mode initial data (U1, U2, U3) at x0.
  std::array<double, 3> initial{1.0, 0.0, 1.0};
};

struct ConstraintsBlock {
  std::optional<double> c0;
  double sigma0 = 0.0;
  bool small_sigma = false;
  double damping = 0.5;
  std::size_t max_iterations = 200;
  double tolerance = 1e-10;
  double b0 = 1.0;
  int branch = 1;
  double mass_start = 1.0;
};

struct OracleBlock {
  std::complex<double> psi0{1.0, 0.0};
  std::complex<double> dpsi0{0.0, 1.0};
};

struct RunConfig {
  CaseKind kind = CaseKind::kI;

  double mass = 1.0;
  expr::Expr potential = 0.0;
  double energy = 0.0;
  expr::Expr mass_profile = 1.0;
  std::array<double, 3> ordering{0.0, -1.0, 0.0};
  std::array<double, 5> nu{1.0, 0.0, 0.0, 0.0, 0.0};
  expr::Expr alpha1 = 1.0;
  expr::Expr alpha2 = 0.0;

  model::GaugeTriple gauge;
  ode::IntegratorConfig integrator;
  model::Grid range{0.0, 1.0, 101};
  PhasePoint start{0.0, 0.0};

  SymmetryBlock symmetry;
  LieBlock lie;
  ConstraintsBlock constraints;
  OracleBlock oracle;

  std::string out_dir = ".";
};

/// Reads INI text. `origin` names the source in error messages. Each override is
/// `section.key=value` and replaces (or adds) that key before interpretation.
/// Throws ValidationError with invariant "config.<section>.<key>" (or "config.syntax")
/// and a message carrying the line number.
[[nodiscard]] RunConfig parse_config(std::istream& in, const std::string& origin,
                                     const std::vector<std::string>& overrides = {});

[[nodiscard]] RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Configuration with defaults only, after applying overrides.
[[nodiscard]] RunConfig default_config(const std::vector<std::string>& overrides = {});

}  // namespace ckrlie::cli
