#include <gtest/gtest.h>

#include <cmath>

#include "ckrlie/errors.hpp"
#include "ckrlie/model.hpp"
#include "fixtures.hpp"

namespace {

using namespace ckrlie;
using expr::Expr;
using expr::parse;

std::string invariant_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.invariant();
  }
  return "";
}

TEST(BuildCase1, Oscillator) {
  support::Oscillator osc;
  const auto c = model::build_case1(osc.problem, osc.gauge, support::unit_grid());
  EXPECT_NEAR(c.a1(2.0), -3.0, 1e-15);
  EXPECT_EQ(c.a2(0.3), 0.0);
  EXPECT_EQ(c.a3(0.3), 1.0);
}

TEST(BuildCase1, FreeAndConstantSigma) {
  const model::ProblemSpec free{1.0, Expr(0.7), 0.7, {}};
  auto c = model::build_case1(free, {}, support::unit_grid());
  EXPECT_EQ(c.a1(0.4), 0.0);
  EXPECT_EQ(c.a2(0.4), 0.0);
  EXPECT_EQ(c.a3(0.4), 1.0);
  c = model::build_case1(free, {1.0, 1.0, 0.3}, support::unit_grid());
  EXPECT_NEAR(c.a1(0.4), 0.09, 1e-15);
  EXPECT_NEAR(c.a2(0.4), -0.6, 1e-15);
}

TEST(BuildCase1, GaugeFormulasAgainstHandExpansion) {
  support::GaugedConstantMass g;
  const auto c = model::build_case1(g.problem, g.gauge, support::unit_grid());
  for (double x : {0.0, 0.4, 1.0}) {
    const double al = 1 + 0.25 * x * x, dal = 0.5 * x;
    const double de = 1 + 0.1 * x, dde = 0.1;
    const double si = 0.3 * std::sin(x), dsi = 0.3 * std::cos(x);
    const double f = 2.0 * (x * x / 2 - 0.7);
    EXPECT_NEAR(c.a1(x), (dsi * al - si * dal) / (al * de) - al * f / de + si * si / (al * de), 1e-14);
    EXPECT_NEAR(c.a2(x), -(2 * si / al + (dde * al - de * dal) / (de * al)), 1e-14);
    EXPECT_NEAR(c.a3(x), de / al, 1e-15);
  }
}

TEST(BuildCase1, Validation) {
  support::Oscillator osc;
  EXPECT_EQ(invariant_of([&] { (void)model::build_case1(osc.problem, {0.0, 1.0, 0.0}, support::unit_grid()); }),
            "gauge.alpha!=0");
  EXPECT_EQ(invariant_of([&] { (void)model::build_case1(osc.problem, {parse("x - 0.5"), 1.0, 0.0}, support::unit_grid()); }),
            "gauge.alpha!=0");
  EXPECT_EQ(invariant_of([&] { (void)model::build_case1(osc.problem, {1.0, parse("x"), 0.0}, support::unit_grid()); }),
            "gauge.delta!=0");
  auto bad = osc.problem;
  bad.mass = 0.0;
  EXPECT_EQ(invariant_of([&] { (void)model::build_case1(bad, {}, support::unit_grid()); }), "problem.m>0");
  bad = osc.problem;
  bad.imaginary_potential = parse("x");
  EXPECT_EQ(invariant_of([&] { (void)model::build_case1(bad, {}, support::unit_grid()); }), "problem.V.real");
  bad.imaginary_potential = Expr(0.0);
  EXPECT_NO_THROW((void)model::build_case1(bad, {}, support::unit_grid()));
}

TEST(MassOrdering, Constraint) {
  EXPECT_NO_THROW(model::MassOrdering(-0.25, -0.5, -0.25));
  EXPECT_EQ(invariant_of([] { model::MassOrdering(0.0, 0.0, 0.0); }), "ordering.a+b+c=-1");
}

TEST(EffectivePotential, Examples) {
  const Expr v = parse("x^2");
  EXPECT_EQ(model::effective_potential({1.0}, {0.0, -1.0, 0.0}, v)(0.7), v(0.7));
  const double a = 0.6;
  const Expr veff = model::effective_potential({parse("exp(x)")}, {a, -1.0, -a}, v);
  for (double x : {-1.0, 0.0, 0.5}) EXPECT_NEAR(veff(x), x * x - a * a * std::exp(-x), 1e-14);
  const Expr any = model::effective_potential({parse("1 + x^2")}, {0.0, -1.0, 0.0}, v);
  EXPECT_NEAR(any(0.3), v(0.3), 1e-15);
}

TEST(EffectivePotential, LinearInPotential) {
  const model::MassProfile m{parse("2 + sin(x)")};
  const model::MassOrdering o{-0.3, -0.4, -0.3};
  const Expr v1 = parse("x^2"), v2 = parse("cos(3*x)");
  const Expr combo = model::effective_potential(m, o, v1 + v2) - model::effective_potential(m, o, v1) -
                     model::effective_potential(m, o, v2) + model::effective_potential(m, o, 0.0);
  for (double x = -1.0; x <= 1.0; x += 0.125) EXPECT_NEAR(combo(x), 0.0, 1e-13);
}

TEST(BuildCase2, Examples) {
  auto c = model::build_case2(parse("x^2"), 2.0, {1.0}, {0.0, -1.0, 0.0}, support::unit_grid());
  EXPECT_NEAR(c.a1(0.5), 1.75, 1e-15);
  EXPECT_EQ(c.a2(0.5), 0.0);
  EXPECT_EQ(c.a3(0.5), 1.0);
  const double b0 = 0.7, e = 3.0;
  c = model::build_case2(Expr(e) - parse("exp(x)") * Expr(b0), e, {parse("exp(x)")}, {0.0, -1.0, 0.0},
                         support::unit_grid());
  for (double x : {0.0, 0.5, 1.0}) {
    EXPECT_NEAR(c.a1(x), b0 * std::exp(2 * x), 1e-13);
    EXPECT_NEAR(c.a2(x), 1.0, 1e-15);
  }
  c = model::build_case2(0.0, 1.0, {parse("1 + x^2")}, {0.0, -1.0, 0.0}, support::unit_grid());
  EXPECT_NEAR(c.a1(1.0), 2.0, 1e-15);
  EXPECT_NEAR(c.a2(1.0), 1.0, 1e-15);
}

TEST(BuildCase2, MassSingularityReported) {
  EXPECT_EQ(invariant_of([] {
              (void)model::build_case2(0.0, 1.0, {parse("x - 0.5")}, {0.0, -1.0, 0.0}, support::unit_grid());
            }),
            "mass.M!=0");
}

TEST(SwansonReduce, Examples) {
  model::SwansonParams s{{1, 0, 0, 0, 0}, 1.0, parse("x")};
  auto r = model::swanson_reduce(s);
  EXPECT_EQ(r.nu_tilde, 1.0);
  EXPECT_EQ(r.k1(0.3), 0.0);
  EXPECT_NEAR(r.k2(0.3), 0.09 - 0.5, 1e-15);

  s = {{1.3, 0.4, 0.4, 0.2, 0.2}, parse("exp(x)"), parse("sin(x)")};
  r = model::swanson_reduce(s);
  for (double x : {-0.5, 0.0, 0.9}) EXPECT_EQ(r.k1(x), 0.0);

  s = {{2.5, 0, 0, 0, 0}, 1.0, 0.0};
  r = model::swanson_reduce(s);
  EXPECT_EQ(r.k1(0.1), 0.0);
  EXPECT_EQ(r.k2(0.1), 1.25);

  s = {{1.0, 0.5, 0.5, 0, 0}, 1.0, 0.0};
  EXPECT_EQ(invariant_of([&] { (void)model::swanson_reduce(s); }), "swanson.nu~!=0");
}

// -nu~ (a1^2 psi')' + k1 psi' + k2 psi must equal the normal-ordered ladder form
// nu0 (A+A- + 1/2) + nu1 A-^2 + nu2 A+^2 + nu3 A- + nu4 A+ with
// A- = a1 d/dx + a2, A+ = -a1 d/dx + a2 - a1' (the adjoint), acting on a test function.
TEST(SwansonReduce, MatchesLadderOperatorHamiltonian) {
  const std::array<double, 5> nu{1.1, 0.3, 0.2, 0.4, -0.15};
  const Expr a1 = parse("1 + 0.3*x^2"), a2 = parse("sin(x) + x");
  const model::SwansonParams s{nu, a1, a2};
  const auto r = model::swanson_reduce(s);
  const Expr psi = parse("exp(-x^2/2) * (1 + x)");
  auto lower = [&](const Expr& f) { return a1 * expr::differentiate(f) + a2 * f; };
  auto raise = [&](const Expr& f) {
    return -(a1 * expr::differentiate(f)) + (a2 - expr::differentiate(a1)) * f;
  };
  const Expr ladder = Expr(nu[0]) * (raise(lower(psi)) + Expr(0.5) * psi) + Expr(nu[1]) * lower(lower(psi)) +
                      Expr(nu[2]) * raise(raise(psi)) + Expr(nu[3]) * lower(psi) + Expr(nu[4]) * raise(psi);
  const Expr reduced = -(Expr(r.nu_tilde) * expr::differentiate(a1 * a1 * expr::differentiate(psi))) +
                       r.k1 * expr::differentiate(psi) + r.k2 * psi;
  for (double x = -1.0; x <= 1.0; x += 0.25) EXPECT_NEAR(reduced(x), ladder(x), 1e-12) << x;
}

TEST(BuildCase3, Examples) {
  model::SwansonParams s{{1, 0, 0, 0, 0}, 1.0, parse("x")};
  auto c = model::build_case3(s, 0.5, support::unit_grid());
  for (double x : {0.0, 0.5, 2.0}) EXPECT_NEAR(c.a1(x), 1 - x * x, 1e-15);
  EXPECT_EQ(c.a2(0.3), 0.0);
  EXPECT_EQ(c.a3(0.3), 1.0);

  s = {{1.3, 0.2, 0.2, 0.1, 0.1}, parse("exp(x)"), parse("x")};
  c = model::build_case3(s, 0.5, support::unit_grid());
  for (double x : {0.0, 0.5, 1.0}) EXPECT_NEAR(c.a2(x), -2.0, 1e-14);

  s = {{2.0, 0, 0, 0, 0}, 1.0, 0.0};
  c = model::build_case3(s, 3.0, support::unit_grid());
  EXPECT_NEAR(c.a1(0.7), (3.0 - 1.0) / 2.0, 1e-15);

  s = {{1, 0, 0, 0, 0}, parse("x - 0.5"), 0.0};
  EXPECT_EQ(invariant_of([&] { (void)model::build_case3(s, 1.0, support::unit_grid()); }), "swanson.alpha1!=0");
}

TEST(ModelProperties, CaseIAndCaseIIIOscillatorsAgree) {
  support::Oscillator osc;
  const auto c1 = model::build_case1(osc.problem, osc.gauge, support::unit_grid());
  const auto c3 = model::build_case3({{1, 0, 0, 0, 0}, 1.0, parse("x")}, 0.5, support::unit_grid());
  for (double x = -2.0; x <= 2.0; x += 0.05) {
    EXPECT_NEAR(c1.a1(x), c3.a1(x), 1e-12);
    EXPECT_NEAR(c1.a2(x), c3.a2(x), 1e-12);
    EXPECT_NEAR(c1.a3(x), c3.a3(x), 1e-12);
  }
}

TEST(ModelProperties, BuiltTriplesFiniteOnGrid) {
  const auto grid = support::unit_grid(201);
  support::GaugedConstantMass g;
  support::VariableMass v;
  support::Swanson s;
  const std::array<model::CkrCoefficients, 3> all{
      model::build_case1(g.problem, g.gauge, grid),
      model::build_case2(v.potential, v.energy, v.mass, v.ordering, grid),
      model::build_case3(s.params, s.energy, grid)};
  for (const auto& c : all) {
    EXPECT_NO_THROW(model::check_real_finite(c, grid));
    for (double x : grid.nodes()) {
      for (double a : c(x)) EXPECT_TRUE(std::isfinite(a));
    }
  }
}

TEST(Grid, Validation) {
  EXPECT_EQ(invariant_of([] { model::Grid{1.0, 1.0, 10}.validate(); }), "grid.range");
  EXPECT_EQ(invariant_of([] { model::Grid{0.0, 1.0, 1}.validate(); }), "grid.points");
  const auto nodes = model::Grid{0.0, 1.0, 5}.nodes();
  ASSERT_EQ(nodes.size(), 5u);
  EXPECT_EQ(nodes.back(), 1.0);
  EXPECT_EQ(nodes[2], 0.5);
}

}  // namespace
