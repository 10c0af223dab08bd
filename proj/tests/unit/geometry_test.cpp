#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ckrlie/errors.hpp"
#include "ckrlie/geometry.hpp"

namespace {

using namespace ckrlie;
using namespace ckrlie::geometry;

constexpr Generator G1 = Generator::k1, G2 = Generator::k2, G3 = Generator::k3;

std::vector<PhasePoint> random_points(std::uint64_t seed, int n = 100) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.1, 10.0), q(-10.0, 10.0);
  std::bernoulli_distribution neg(0.5);
  std::vector<PhasePoint> out;
  for (int i = 0; i < n; ++i) {
    const double p1 = mag(rng) * (neg(rng) ? -1.0 : 1.0);
    out.push_back({p1, q(rng)});
  }
  return out;
}

double scaled(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

TEST(Chi, Examples) {
  EXPECT_EQ(chi(G1, {4.0, -2.0}).u1, 0.0);
  EXPECT_EQ(chi(G1, {4.0, -2.0}).u2, 1.0);
  EXPECT_EQ(chi(G2, {1.0, 2.0}).u2, 2.0);
  EXPECT_EQ(chi(G3, {1.0, 1.0}).u1, 2.0);
  EXPECT_EQ(chi(G3, {1.0, 1.0}).u2, 0.0);
  EXPECT_THROW((void)generator(4), std::invalid_argument);
}

TEST(Commutator, Examples) {
  auto c = commutator(G1, G2, {3.0, -1.0});
  EXPECT_EQ(c.u1, 0.0);
  EXPECT_EQ(c.u2, 1.0);
  c = commutator(G1, G3, {1.0, 1.0});
  EXPECT_EQ(c.u1, 2.0);
  EXPECT_EQ(c.u2, 2.0);
  c = commutator(G2, G2, {0.3, 7.0});
  EXPECT_EQ(c.u1, 0.0);
  EXPECT_EQ(c.u2, 0.0);
}

TEST(Commutator, StructureConstantsAtRandomPoints) {
  for (const auto& q : random_points(1)) {
    const auto c12 = commutator(G1, G2, q), c23 = commutator(G2, G3, q), c13 = commutator(G1, G3, q);
    const auto x1 = chi(G1, q), x2 = chi(G2, q), x3 = chi(G3, q);
    EXPECT_LE(std::abs(c12.u1 - x1.u1) + std::abs(c12.u2 - x1.u2), 1e-10);
    EXPECT_LE(std::abs(c23.u1 - x3.u1), 1e-10);
    EXPECT_LE(std::abs(c23.u2 - x3.u2), 1e-10);
    EXPECT_LE(std::abs(c13.u1 - 2 * x2.u1), 1e-10);
    EXPECT_LE(std::abs(c13.u2 - 2 * x2.u2), 1e-10);
  }
}

TEST(Hamiltonian, Examples) {
  EXPECT_EQ(hamiltonian(G1, {1.0, 0.0}), -1.0);
  EXPECT_EQ(hamiltonian(G2, {1.0, 0.0}), 0.0);
  EXPECT_EQ(hamiltonian(G3, {1.0, 0.0}), -1.0);
  EXPECT_EQ(hamiltonian(G1, {1.0, 2.0}), -1.0);
  EXPECT_EQ(hamiltonian(G2, {1.0, 2.0}), -2.0);
  EXPECT_EQ(hamiltonian(G3, {1.0, 2.0}), -5.0);
  EXPECT_EQ(hamiltonian(G2, {-3.0, 0.0}), 0.0);
}

TEST(Hamiltonian, ChartAxisRefused) {
  try {
    (void)hamiltonian(G1, {1e-12, 1.0});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.kind(), DomainKind::kChartAxis);
  }
  EXPECT_THROW((void)symplectic({0.0, 1.0}, {1, 0}, {0, 1}), DomainError);
  EXPECT_THROW((void)bivector_field(G2, {0.0, 1.0}), DomainError);
}

TEST(Symplectic, Examples) {
  EXPECT_EQ(symplectic({2.0, 1.0}, {0.3, 0.7}, {0.3, 0.7}), 0.0);
  EXPECT_EQ(symplectic({1.0, 2.0}, chi(G1, {1.0, 2.0}), chi(G2, {1.0, 2.0})), 1.0);
  EXPECT_EQ(symplectic({1.0, 1.0}, chi(G1, {1.0, 1.0}), chi(G3, {1.0, 1.0})), 2.0);
}

TEST(Symplectic, HamiltonianFunctionIdentity) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> t(-1.0, 1.0);
  for (const auto& q : random_points(3)) {
    const TangentPair v{t(rng), t(rng)};
    for (Generator g : kGenerators) {
      const double rhs = symplectic(q, chi(g, q), v);
      const Covector exact = hamiltonian_differential(g, q);
      const Covector fd = differential_fd([g](PhasePoint p) { return hamiltonian(g, p); }, q);
      EXPECT_LE(scaled(exact.d1 * v.u1 + exact.d2 * v.u2, rhs), 1e-12);
      EXPECT_LE(scaled(fd.d1 * v.u1 + fd.d2 * v.u2, rhs), 1e-6);
    }
  }
}

TEST(Brackets, Examples) {
  EXPECT_EQ(bracket_omega(G2, G3, {1.0, 2.0}), 5.0);
  const ScalarField h1 = [](PhasePoint p) { return hamiltonian(G1, p); };
  const ScalarField h3 = [](PhasePoint p) { return hamiltonian(G3, p); };
  EXPECT_EQ(bracket_lambda(h1, h1, {0.7, -2.0}), 0.0);
  EXPECT_NEAR(bracket_lambda(h1, h3, {2.0, 1.0}), 1.0, 1e-6);
}

TEST(Brackets, TablesInBothRealizations) {
  auto h = [](Generator g) { return ScalarField([g](PhasePoint p) { return hamiltonian(g, p); }); };
  for (const auto& q : random_points(4)) {
    const double H1 = hamiltonian(G1, q), H2 = hamiltonian(G2, q), H3 = hamiltonian(G3, q);
    EXPECT_LE(scaled(bracket_omega(G1, G2, q), -H1), 1e-12);
    EXPECT_LE(scaled(bracket_omega(G2, G3, q), -H3), 1e-12);
    EXPECT_LE(scaled(bracket_omega(G1, G3, q), -2 * H2), 1e-12);
    const auto d1 = hamiltonian_differential(G1, q), d2 = hamiltonian_differential(G2, q),
               d3 = hamiltonian_differential(G3, q);
    EXPECT_LE(scaled(bracket_lambda(d1, d2, q), -H1), 1e-12);
    EXPECT_LE(scaled(bracket_lambda(d2, d3, q), -H3), 1e-12);
    EXPECT_LE(scaled(bracket_lambda(d1, d3, q), -2 * H2), 1e-12);
    EXPECT_LE(scaled(bracket_lambda(h(G1), h(G2), q), -H1), 1e-6);
    EXPECT_LE(scaled(bracket_lambda(h(G2), h(G3), q), -H3), 1e-6);
    EXPECT_LE(scaled(bracket_lambda(h(G1), h(G3), q), -2 * H2), 1e-6);
  }
}

TEST(Brackets, JacobiIdentity) {
  auto h = [](Generator g) { return ScalarField([g](PhasePoint p) { return hamiltonian(g, p); }); };
  // inner brackets from exact differentials, outer by finite differences
  auto inner = [](Generator a, Generator b) {
    return ScalarField([a, b](PhasePoint p) {
      return bracket_lambda(hamiltonian_differential(a, p), hamiltonian_differential(b, p), p);
    });
  };
  for (const auto& q : random_points(5)) {
    const double j = bracket_lambda(h(G1), inner(G2, G3), q) + bracket_lambda(h(G2), inner(G3, G1), q) +
                     bracket_lambda(h(G3), inner(G1, G2), q);
    const double scale = 1.0 + std::abs(hamiltonian(G1, q)) + std::abs(hamiltonian(G2, q)) +
                         std::abs(hamiltonian(G3, q));
    EXPECT_LE(std::abs(j) / scale, 1e-5);
  }
}

TEST(Bivector, ReproducesVectorFields) {
  auto v = bivector_field(G1, {1.0, 5.0});
  EXPECT_EQ(v.u1, 0.0);
  EXPECT_EQ(v.u2, 1.0);
  v = bivector_field(G2, {1.0, 2.0});
  EXPECT_EQ(v.u1, 1.0);
  EXPECT_EQ(v.u2, 2.0);
  v = bivector_field(G3, {1.0, 0.0});
  EXPECT_EQ(v.u1, 0.0);
  EXPECT_EQ(v.u2, -1.0);
  for (const auto& q : random_points(6)) {
    for (Generator g : kGenerators) {
      const auto b = bivector_field(g, q), c = chi(g, q);
      EXPECT_LE(scaled(b.u1, c.u1), 1e-12);
      EXPECT_LE(scaled(b.u2, c.u2), 1e-12);
    }
  }
}

}  // namespace
