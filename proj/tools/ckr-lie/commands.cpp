#include "commands.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <json.hpp>
#include <ostream>
#include <random>
#include <thread>

#include "ckrlie/conserved.hpp"
#include "ckrlie/errors.hpp"
#include "ckrlie/geometry.hpp"
#include "ckrlie/model.hpp"
#include "ckrlie/oracle.hpp"
#include "ckrlie/symmetry.hpp"

namespace ckrlie::cli {
namespace {

namespace fs = std::filesystem;
using expr::Expr;
using geometry::Generator;
using Json = nlohmann::ordered_json;

// Runs f(0..n-1) on up to `jobs` threads; results must be written by index.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& f) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) f(i);
      } catch (...) {
        const std::lock_guard lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

class Csv {
 public:
  Csv(const fs::path& path, std::string_view header) : path_(path) {
    fmt::format_to(std::back_inserter(buf_), "{}\n", header);
  }

  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) buf_.push_back(',');
      fmt::format_to(std::back_inserter(buf_), "{:.17g}", v);
      first = false;
    }
    buf_.push_back('\n');
  }

  void save() const {
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    if (!out) throw ValidationError("output.writable", "cannot write '" + path_.string() + "'");
  }

 private:
  fs::path path_;
  fmt::memory_buffer buf_;
};

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) throw ValidationError("output.writable", "cannot write '" + path.string() + "'");
}

std::vector<PhasePoint> random_points(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> magnitude(0.1, 10.0), imaginary(-10.0, 10.0);
  std::bernoulli_distribution negative(0.5);
  std::vector<PhasePoint> out(n);
  for (auto& q : out) {
    q.p1 = magnitude(rng) * (negative(rng) ? -1.0 : 1.0);
    q.p2 = imaginary(rng);
  }
  return out;
}

double scaled(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

// ---- case plumbing --------------------------------------------------------

model::SwansonParams swanson(const RunConfig& c) { return {c.nu, c.alpha1, c.alpha2}; }

model::CkrCoefficients coefficients(const RunConfig& c) {
  switch (c.kind) {
    case CaseKind::kI:
      return model::build_case1({c.mass, c.potential, c.energy, {}}, c.gauge, c.range);
    case CaseKind::kII:
      return model::build_case2(c.potential, c.energy, {c.mass_profile},
                                model::MassOrdering(c.ordering[0], c.ordering[1], c.ordering[2]), c.range);
    case CaseKind::kIII:
      return model::build_case3(swanson(c), c.energy, c.range);
  }
  throw ValidationError("problem.case", "unknown case");
}

model::GaugeTriple gauge(const RunConfig& c) {
  return c.kind == CaseKind::kI ? c.gauge : model::GaugeTriple::identity();
}

oracle::LinearEquation linear_equation(const RunConfig& c) {
  switch (c.kind) {
    case CaseKind::kI:
      return oracle::case1_equation({c.mass, c.potential, c.energy, {}});
    case CaseKind::kII:
      return oracle::case2_equation(c.potential, c.energy, {c.mass_profile},
                                    model::MassOrdering(c.ordering[0], c.ordering[1], c.ordering[2]));
    case CaseKind::kIII:
      return oracle::case3_equation(swanson(c), c.energy);
  }
  throw ValidationError("problem.case", "unknown case");
}

struct Context {
  const Invocation& inv;
  RunConfig cfg;
  fs::path dir;
  std::ostream& out;
};

double grid_spacing(const model::Grid& g) { return (g.x1 - g.x0) / static_cast<double>(g.points - 1); }

// ---- subcommands ----------------------------------------------------------

void cmd_coeffs(Context& ctx) {
  const model::CkrCoefficients c = coefficients(ctx.cfg);
  const std::vector<double> xs = ctx.cfg.range.nodes();
  Csv csv(ctx.dir / "coeffs.csv", "x,a1,a2,a3");
  for (double x : xs) {
    const auto [a1, a2, a3] = c(x);
    csv.row({x, a1, a2, a3});
  }
  csv.save();
  ctx.out << "coeffs: " << xs.size() << " rows -> " << (ctx.dir / "coeffs.csv").string() << '\n';
}

void cmd_integrate(Context& ctx) {
  const model::CkrCoefficients c = coefficients(ctx.cfg);
  const ode::Trajectory t =
      ode::integrate_ckr(c, ctx.cfg.range.x0, ctx.cfg.start, ctx.cfg.range.x1, ctx.cfg.integrator);
  {
    Csv csv(ctx.dir / "trajectory.csv", "x,p1,p2");
    for (const auto& s : t.samples) csv.row({s.x, s.p1, s.p2});
    csv.save();
  }
  ctx.out << fmt::format("integrate: {} samples, status {}", t.samples.size(), ode::to_string(t.status));
  if (t.status != ode::Status::kCompleted) ctx.out << fmt::format(" at x = {:.17g}", t.stop_x);
  ctx.out << " -> " << (ctx.dir / "trajectory.csv").string() << '\n';
}

struct Identity {
  std::string name;
  double tolerance;
};

void cmd_verify_algebra(Context& ctx) {
  const std::size_t n = ctx.inv.points.value_or(100);
  if (n == 0) throw ValidationError("verify.points>0", "--points must be positive");
  const std::vector<PhasePoint> points = random_points(ctx.inv.seed, n);

  constexpr std::array<Generator, 3> G = geometry::kGenerators;
  constexpr std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {1, 2}, {0, 2}}};
  std::vector<Identity> ids;
  for (const char* name : {"commutator[chi1,chi2]=chi1", "commutator[chi2,chi3]=chi3", "commutator[chi1,chi3]=2chi2"}) {
    ids.push_back({name, 1e-10});
  }
  for (int i = 1; i <= 3; ++i) ids.push_back({fmt::format("dH{0}=i_chi{0}omega", i), 1e-12});
  for (int i = 1; i <= 3; ++i) ids.push_back({fmt::format("dH{0}=i_chi{0}omega[fd]", i), 1e-6});
  for (const char* name : {"omega{H1,H2}=-H1", "omega{H2,H3}=-H3", "omega{H1,H3}=-2H2"}) ids.push_back({name, 1e-12});
  for (const char* name : {"Lambda{H1,H2}=-H1", "Lambda{H2,H3}=-H3", "Lambda{H1,H3}=-2H2"}) {
    ids.push_back({name, 1e-12});
  }
  for (const char* name : {"Lambda{H1,H2}=-H1[fd]", "Lambda{H2,H3}=-H3[fd]", "Lambda{H1,H3}=-2H2[fd]"}) {
    ids.push_back({name, 1e-6});
  }
  for (int i = 1; i <= 3; ++i) ids.push_back({fmt::format("chi{0}=-Lambda(dH{0})", i), 1e-12});

  const std::size_t k = ids.size();
  std::vector<double> errors(n * k, 0.0);
  parallel_for(n, ctx.inv.jobs, [&](std::size_t p) {
    const PhasePoint q = points[p];
    double* e = errors.data() + p * k;
    std::size_t slot = 0;
    std::array<TangentPair, 3> chi{};
    std::array<double, 3> h{};
    std::array<geometry::Covector, 3> dh{};
    std::array<geometry::ScalarField, 3> field;
    for (std::size_t i = 0; i < 3; ++i) {
      chi[i] = geometry::chi(G[i], q);
      h[i] = geometry::hamiltonian(G[i], q);
      dh[i] = geometry::hamiltonian_differential(G[i], q);
      field[i] = [g = G[i]](PhasePoint r) { return geometry::hamiltonian(g, r); };
    }
    // [chi_i, chi_j] against chi1, chi3, 2 chi2
    const std::array<TangentPair, 3> expected{chi[0], chi[2], TangentPair{2 * chi[1].u1, 2 * chi[1].u2}};
    for (std::size_t m = 0; m < 3; ++m) {
      const TangentPair c = geometry::commutator(G[pairs[m].first], G[pairs[m].second], q);
      e[slot++] = std::max(scaled(c.u1, expected[m].u1), scaled(c.u2, expected[m].u2));
    }
    // (i_chi omega)(e_k) = omega(chi, e_k)
    auto contraction_error = [&](std::size_t i, geometry::Covector d) {
      const double w1 = geometry::symplectic(q, chi[i], {1.0, 0.0});
      const double w2 = geometry::symplectic(q, chi[i], {0.0, 1.0});
      return std::max(scaled(d.d1, w1), scaled(d.d2, w2));
    };
    for (std::size_t i = 0; i < 3; ++i) e[slot++] = contraction_error(i, dh[i]);
    for (std::size_t i = 0; i < 3; ++i) e[slot++] = contraction_error(i, geometry::differential_fd(field[i], q));
    const std::array<double, 3> bracket{-h[0], -h[2], -2.0 * h[1]};
    for (std::size_t m = 0; m < 3; ++m) {
      e[slot++] = scaled(geometry::bracket_omega(G[pairs[m].first], G[pairs[m].second], q), bracket[m]);
    }
    for (std::size_t m = 0; m < 3; ++m) {
      e[slot++] = scaled(geometry::bracket_lambda(dh[pairs[m].first], dh[pairs[m].second], q), bracket[m]);
    }
    for (std::size_t m = 0; m < 3; ++m) {
      e[slot++] = scaled(geometry::bracket_lambda(field[pairs[m].first], field[pairs[m].second], q), bracket[m]);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      const TangentPair b = geometry::bivector_field(G[i], q);
      e[slot++] = std::max(scaled(b.u1, chi[i].u1), scaled(b.u2, chi[i].u2));
    }
  });

  Json report = Json::object();
  std::size_t failed = 0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t p = 0; p < n; ++p) worst = std::max(worst, errors[p * k + i]);
    const bool pass = worst <= ids[i].tolerance;
    failed += pass ? 0 : 1;
    report[ids[i].name] = {{"pass", pass}, {"max_error", worst}, {"points", n}, {"tolerance", ids[i].tolerance}};
  }
  write_json(ctx.dir / "algebra.json", report);
  ctx.out << fmt::format("verify-algebra: {}/{} identities pass at {} points (seed {}) -> {}\n", k - failed, k, n,
                         ctx.inv.seed, (ctx.dir / "algebra.json").string());
  if (failed != 0) throw NumericalError(fmt::format("{} algebra identities failed", failed), 0.0);
}

void cmd_symmetry(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const model::CkrCoefficients c = coefficients(cfg);
  ode::IntegratorConfig run = cfg.integrator;
  // lambda samples on the grid nodes keep the residual free of interpolation error
  if (run.output_step <= 0.0) run.output_step = std::abs(grid_spacing(cfg.range));
  const symmetry::SymmetryCoefficients s =
      symmetry::solve_lambda(c, cfg.symmetry.lambda0, cfg.symmetry.initial, cfg.range.x0, cfg.range.x1, run);
  {
    Csv csv(ctx.dir / "lambda.csv", "x,lambda1,lambda2,lambda3");
    for (std::size_t k = 0; k < s.path->size(); ++k) {
      csv.row({s.path->nodes()[k], s.path->node_value(k, 0), s.path->node_value(k, 1), s.path->node_value(k, 2)});
    }
    csv.save();
  }
  const std::vector<double> xs = cfg.range.nodes();
  const std::vector<PhasePoint> points = random_points(ctx.inv.seed, std::max<std::size_t>(cfg.symmetry.phase_points, 1));
  std::vector<double> residual(xs.size());
  parallel_for(xs.size(), ctx.inv.jobs, [&](std::size_t i) {
    residual[i] = symmetry::residual_grid(c, s, std::span(xs).subspan(i, 1), points).front();
  });
  {
    Csv csv(ctx.dir / "residual.csv", "x,residual");
    for (std::size_t i = 0; i < xs.size(); ++i) csv.row({xs[i], residual[i]});
    csv.save();
  }
  const double worst = *std::max_element(residual.begin(), residual.end());
  ctx.out << fmt::format("symmetry: max |[Y,X~] - lambda X~| = {:.3e} over {} x {} points -> {}\n", worst, xs.size(),
                         points.size(), ctx.dir.string());
}

void cmd_lie_integral(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const model::CkrCoefficients c = coefficients(cfg);
  conserved::UpsilonTriple u;
  if (cfg.lie.closed_form) {
    conserved::LieIntegralSpec spec{conserved::LieCase::kI, cfg.lie.minus, cfg.lie.plus};
    conserved::CaseData data;
    switch (cfg.kind) {
      case CaseKind::kI: {
        if (!cfg.gauge.alpha.is_literal(1.0) || !cfg.gauge.delta.is_literal(1.0)) {
          throw ValidationError("lie.gauge", "the case I closed form needs alpha = delta = 1");
        }
        const std::size_t panels = std::max<std::size_t>(1000, cfg.range.points - 1);
        data = conserved::ConstantMassData{cfg.gauge.sigma, cfg.range.x0, cfg.range.x1, panels};
        break;
      }
      case CaseKind::kII:
        spec.kind = conserved::LieCase::kII;
        data = conserved::VariableMassData{cfg.mass_profile};
        break;
      case CaseKind::kIII:
        spec.kind = conserved::LieCase::kIII;
        data = conserved::SwansonData{swanson(cfg)};
        break;
    }
    u = conserved::closed_form_upsilon(spec, data);
  } else {
    u = conserved::solve_euler(c, cfg.lie.initial, cfg.range.x0, cfg.range.x1, cfg.integrator);
  }

  const ode::Trajectory t = ode::integrate_ckr(c, cfg.range.x0, cfg.start, cfg.range.x1, cfg.integrator);
  const conserved::DriftReport drift = conserved::conservation_check(u, t);
  {
    Csv csv(ctx.dir / "upsilon.csv", "x,upsilon");
    for (std::size_t k = 0; k < t.samples.size(); ++k) csv.row({t.samples[k].x, drift.values[k]});
    csv.save();
  }
  double branch = 0.0;
  for (double x : cfg.range.nodes()) branch = std::max(branch, std::abs(conserved::branch_constraint(c, u, x)));
  Json summary = {{"mode", cfg.lie.closed_form ? "closed" : "euler"},
                  {"status", ode::to_string(t.status)},
                  {"samples", drift.samples},
                  {"reference", drift.reference},
                  {"max_abs_drift", drift.max_abs_drift},
                  {"relative_drift", drift.relative_drift},
                  {"branch_constraint", branch}};
  write_json(ctx.dir / "lie.json", summary);
  ctx.out << fmt::format("lie-integral: Upsilon = {:.17g}, relative drift {:.3e} over {} samples, "
                         "max |a3 U1 - a1 U3| = {:.3e} -> {}\n",
                         drift.reference, drift.relative_drift, drift.samples, branch, ctx.dir.string());
}

void write_residual(const fs::path& path, const ode::SampledPath& p, std::size_t component, double& worst) {
  Csv csv(path, "x,residual");
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double r = p.node_value(k, component);
    worst = std::max(worst, std::abs(r));
    csv.row({p.nodes()[k], r});
  }
  csv.save();
}

void cmd_constraints(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const ConstraintsBlock& k = cfg.constraints;
  Json summary;
  double worst = 0.0;
  switch (cfg.kind) {
    case CaseKind::kI: {
      conserved::SigmaProblem p;
      p.potential = cfg.potential;
      p.mass = cfg.mass;
      p.energy = cfg.energy;
      p.c0 = k.c0;
      p.sigma0 = k.sigma0;
      p.grid = cfg.range;
      p.small_sigma = k.small_sigma;
      p.damping = k.damping;
      p.max_iterations = k.max_iterations;
      p.tolerance = k.tolerance;
      const conserved::SigmaResult r = conserved::sigma_constraint(p);
      {
        Csv csv(ctx.dir / "sigma.csv", "x,sigma");
        for (std::size_t i = 0; i < r.sigma.size(); ++i) csv.row({r.sigma.nodes()[i], r.sigma.node_value(i, 0)});
        csv.save();
      }
      write_residual(ctx.dir / "residual.csv", r.residual, 0, worst);
      summary = {{"kind", "sigma"},     {"c0", r.c0},
                 {"converged", r.converged}, {"iterations", r.iterations},
                 {"last_update", r.last_update}, {"max_residual", worst}};
      write_json(ctx.dir / "constraints.json", summary);
      if (!r.converged) throw NumericalError("sigma iteration did not converge", cfg.range.x1);
      break;
    }
    case CaseKind::kII: {
      conserved::MassProblem p{cfg.potential, cfg.energy, k.b0, cfg.ordering[0], k.branch, k.mass_start, cfg.range};
      const ode::SampledPath m = conserved::mass_constraint(p, cfg.integrator);
      const double a = cfg.ordering[0];
      Csv mass(ctx.dir / "mass.csv", "x,mass");
      Csv res(ctx.dir / "residual.csv", "x,residual");
      for (std::size_t i = 0; i < m.size(); ++i) {
        const double x = m.nodes()[i], M = m.node_value(i, 0);
        const double dM = m.has_derivatives() ? m.node_derivative(i, 0) : 0.0;
        const double r = k.b0 * M - (cfg.energy - cfg.potential(x)) + a * a * dM * dM / (M * M * M);
        worst = std::max(worst, std::abs(r));
        mass.row({x, M});
        res.row({x, r});
      }
      mass.save();
      res.save();
      summary = {{"kind", "mass"}, {"max_residual", worst}};
      write_json(ctx.dir / "constraints.json", summary);
      break;
    }
    case CaseKind::kIII: {
      const ode::SampledPath r = conserved::swanson_condition(swanson(cfg), cfg.energy, cfg.range);
      double energy_gap = 0.0;
      write_residual(ctx.dir / "residual.csv", r, 0, worst);
      write_residual(ctx.dir / "energy_residual.csv", r, 1, energy_gap);
      summary = {{"kind", "swanson"}, {"max_residual", worst}, {"max_energy_residual", energy_gap}};
      write_json(ctx.dir / "constraints.json", summary);
      break;
    }
  }
  ctx.out << fmt::format("constraints: {} max residual {:.3e} -> {}\n", summary["kind"].get<std::string>(), worst,
                         ctx.dir.string());
}

void cmd_oracle_compare(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const model::CkrCoefficients c = coefficients(cfg);
  const oracle::WavePath w = oracle::integrate_schrodinger(linear_equation(cfg), cfg.oracle.psi0, cfg.oracle.dpsi0,
                                                           cfg.range.x0, cfg.range.x1, cfg.integrator);
  const ode::Trajectory reference = oracle::qmf(w, gauge(cfg), cfg.integrator.blowup_threshold);
  if (reference.samples.empty()) throw NumericalError("psi vanishes at the initial point", cfg.range.x0);
  const auto& first = reference.samples.front();
  const ode::Trajectory candidate =
      ode::integrate_ckr(c, first.x, {first.p1, first.p2}, cfg.range.x1, cfg.integrator);
  const oracle::Comparison cmp = oracle::compare(reference, candidate);
  {
    Csv csv(ctx.dir / "oracle.csv", "x,p1_ref,p2_ref,p1,p2,distance");
    for (const auto& s : cmp.samples) {
      csv.row({s.x, s.p1_reference, s.p2_reference, s.p1_candidate, s.p2_candidate, s.distance});
    }
    csv.save();
  }
  Json summary = {{"sup_distance", cmp.sup_distance},
                  {"x_end", cmp.x_end},
                  {"samples", cmp.samples.size()},
                  {"reference_status", ode::to_string(reference.status)},
                  {"candidate_status", ode::to_string(candidate.status)}};
  write_json(ctx.dir / "oracle.json", summary);
  ctx.out << fmt::format("oracle-compare: sup distance {:.3e} on [{:.17g}, {:.17g}] -> {}\n", cmp.sup_distance,
                         first.x, cmp.x_end, ctx.dir.string());
}

using Handler = void (*)(Context&);

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h{
      {"coeffs", cmd_coeffs},
      {"integrate", cmd_integrate},
      {"verify-algebra", cmd_verify_algebra},
      {"symmetry", cmd_symmetry},
      {"lie-integral", cmd_lie_integral},
      {"constraints", cmd_constraints},
      {"oracle-compare", cmd_oracle_compare},
  };
  return h;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, h] : handlers()) n.push_back(name);
    return n;
  }();
  return names;
}

int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
  try {
    const auto it = std::find_if(handlers().begin(), handlers().end(),
                                 [&](const auto& h) { return h.first == inv.command; });
    if (it == handlers().end()) throw ValidationError("command", "unknown subcommand '" + inv.command + "'");
    const bool needs_config = inv.command != "verify-algebra";
    if (needs_config && !inv.config_path) throw ValidationError("config.required", inv.command + " needs -c/--config");

    RunConfig cfg = inv.config_path ? load_config(*inv.config_path, inv.overrides) : default_config(inv.overrides);
    if (needs_config && inv.points) {
      cfg.range.points = *inv.points;
      cfg.range.validate();
    }
    if (inv.validate_only) {
      if (needs_config) static_cast<void>(coefficients(cfg));
      out << inv.command << ": configuration valid\n";
      return kExitOk;
    }
    Context ctx{inv, cfg, fs::path(inv.out_dir.value_or(cfg.out_dir)), out};
    std::error_code ec;
    fs::create_directories(ctx.dir, ec);
    if (ec) throw ValidationError("output.writable", "cannot create '" + ctx.dir.string() + "': " + ec.message());
    it->second(ctx);
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "ckr-lie: invalid input [" << e.invariant() << "]: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ParseError& e) {
    err << "ckr-lie: invalid expression: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const NumericalError& e) {
    err << "ckr-lie: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DomainError& e) {
    err << "ckr-lie: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "ckr-lie: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ckrlie::cli
