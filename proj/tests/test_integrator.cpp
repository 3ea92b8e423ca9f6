#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "hilbert/integrator.hpp"
#include "hilbert/oracles.hpp"

using namespace hilbert;

namespace {

constexpr double kPi = std::numbers::pi;

const InvariantIntegrand& builtin(const std::string& name) { return IntegrandRegistry::builtin().find(name); }

SamplerConfig sampler(std::uint64_t samples, std::uint64_t seed = 20240607, unsigned threads = 1) {
  SamplerConfig c;
  c.samples = samples;
  c.seed = seed;
  c.threads = threads;
  return c;
}

DomainOptions quadrature(int nodes = 8) {
  DomainOptions o;
  o.scheme = Scheme::kQuadrature;
  o.nodes = nodes;
  return o;
}

DomainOptions monte_carlo(std::uint64_t samples, std::uint64_t seed = 20240607) {
  DomainOptions o;
  o.scheme = Scheme::kMonteCarlo;
  o.sampler = sampler(samples, seed);
  return o;
}

void expect_within(const IntegralEstimate& e, double exact, double z) {
  ASSERT_GT(e.std_error, 0.0);
  EXPECT_LE(std::abs(e.value - exact), z * e.std_error) << "value " << e.value << " exact " << exact;
}

}  // namespace

TEST(Jacobian, Examples) {
  EXPECT_EQ(jacobian_w_to_u(TriangularFactor(3, 3, {1, 0, 1, 0, 0, 1})), 8.0);
  const TriangularFactor w(2, 2, {3.0, 2.0 / 3.0, 4.0 * std::sqrt(2.0) / 3.0});
  EXPECT_NEAR(jacobian_w_to_u(w), 48 * std::sqrt(2.0), 1e-12);
}

TEST(Jacobian, BoundaryPoint) {
  EXPECT_EQ(gen::code_of([] { jacobian_w_to_u(TriangularFactor(2, 2, {1, 0.5, 0})); }), ErrorCode::kBoundaryPoint);
}

TEST(Jacobian, MatchesFiniteDifferencesAndMinors) {
  gen::Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    const int k = gen::uniform_int(rng, 1, 4);
    const TriangularFactor w = gen::interior_factor(rng, k, k);
    const double j = jacobian_w_to_u(w);
    EXPECT_LE(gen::rel_err(j, oracle::finite_difference_jacobian(w)), 1e-6);
    const auto d = leading_minors(gram(w));
    double root = 1.0;
    for (int i = 1; i <= k; ++i) root *= d[static_cast<std::size_t>(i)];
    EXPECT_LE(gen::rel_err(j, std::ldexp(std::sqrt(root), k)), 1e-12);
  }
}

TEST(DiagFromMinors, Examples) {
  const auto a = diag_from_minors(GramMatrix(3, {1, 0, 1, 0, 0, 1}));
  for (double x : a) EXPECT_EQ(x, 1.0);
  const auto b = diag_from_minors(GramMatrix(2, {9, 2, 4}));
  EXPECT_DOUBLE_EQ(b[0], 3.0);
  EXPECT_NEAR(b[1], 4 * std::sqrt(2.0) / 3, 1e-15);
  const auto c = diag_from_minors(GramMatrix(2, {4, 0, 9}));
  EXPECT_DOUBLE_EQ(c[0], 2.0);
  EXPECT_DOUBLE_EQ(c[1], 3.0);
}

TEST(DiagFromMinors, BoundaryPoint) {
  EXPECT_EQ(gen::code_of([] { diag_from_minors(GramMatrix(2, {1, 1, 1})); }), ErrorCode::kBoundaryPoint);
  EXPECT_EQ(gen::code_of([] { diag_from_minors(GramMatrix(2, {0, 0, 1})); }), ErrorCode::kBoundaryPoint);
}

TEST(DiagFromMinors, RecoversTheDiagonal) {
  gen::Rng rng(62);
  for (int t = 0; t < 1000; ++t) {
    const int k = gen::uniform_int(rng, 1, 5);
    const TriangularFactor w = gen::interior_factor(rng, k, k);
    const auto d = diag_from_minors(gram(w));
    for (int i = 0; i < k; ++i) EXPECT_LE(gen::rel_err(d[static_cast<std::size_t>(i)], w(i, i)), 1e-12);
  }
}

TEST(DomainWeight, TelescopingProduct) {
  gen::Rng rng(63);
  for (int t = 0; t < 500; ++t) {
    auto [k, m] = gen::shape(rng, 6);
    const TriangularFactor w = gen::interior_factor(rng, k, m);
    double direct = 1.0;
    for (int i = 0; i < k; ++i) direct *= std::pow(w(i, i), m - 1 - i);
    EXPECT_LE(gen::rel_err(domain_weight(w), direct), 1e-13);
    EXPECT_LE(gen::rel_err(domain_weight_from_minors(gram(w), m), direct), 1e-10) << "k=" << k << " m=" << m;
  }
}

TEST(AmbientMc, GaussianOneVector) {
  const IntegralEstimate e = integrate_ambient_mc(builtin("gaussian"), 1, 3, sampler(1'000'000));
  EXPECT_EQ(e.method, Method::kAmbientMc);
  EXPECT_EQ(e.samples_or_nodes, 1'000'000u);
  EXPECT_FALSE(e.deterministic);
  expect_within(e, std::pow(kPi, 1.5), 3.0);
}

TEST(AmbientMc, GaussianTwoVectors) {
  expect_within(integrate_ambient_mc(builtin("gaussian"), 2, 3, sampler(1'000'000)), kPi * kPi * kPi, 3.0);
}

TEST(AmbientMc, UnitDisc) {
  expect_within(integrate_ambient_mc(builtin("ball"), 1, 2, sampler(1'000'000)), kPi, 3.0);
}

TEST(AmbientMc, DeterministicAcrossThreadCounts) {
  const IntegralEstimate one = integrate_ambient_mc(builtin("gaussian"), 2, 3, sampler(100'000, 5, 1));
  for (unsigned threads : {2u, 3u, 8u}) {
    const IntegralEstimate many = integrate_ambient_mc(builtin("gaussian"), 2, 3, sampler(100'000, 5, threads));
    EXPECT_EQ(one.value, many.value);
    EXPECT_EQ(one.std_error, many.std_error);
  }
}

TEST(AmbientMc, SeedChangesEstimate) {
  const double a = integrate_ambient_mc(builtin("gaussian"), 1, 2, sampler(10'000, 1)).value;
  const double b = integrate_ambient_mc(builtin("gaussian"), 1, 2, sampler(10'000, 2)).value;
  EXPECT_NE(a, b);
}

TEST(AmbientMc, PartialLastChunk) {
  SamplerConfig c = sampler(1000 + 7);
  c.chunk_size = 100;
  const IntegralEstimate e = integrate_ambient_mc(builtin("gaussian"), 1, 1, c);
  EXPECT_EQ(e.samples_or_nodes, 1007u);
  expect_within(e, std::sqrt(kPi), 4.0);
}

TEST(DomainW, QuadratureExamples) {
  const IntegralEstimate a = integrate_domain_w(builtin("gaussian"), 1, 3, quadrature());
  EXPECT_TRUE(a.deterministic);
  EXPECT_EQ(a.std_error, 0.0);
  EXPECT_LE(gen::rel_err(a.value, std::pow(kPi, 1.5)), 1e-12);
  EXPECT_LE(gen::rel_err(integrate_domain_w(builtin("gaussian"), 2, 2, quadrature()).value, kPi * kPi), 1e-12);
}

TEST(DomainW, QuadratureExactness) {
  for (const char* name : {"gaussian", "trace-gaussian", "det-gaussian"}) {
    const InvariantIntegrand& g = builtin(name);
    for (int k = 1; k <= 3; ++k) {
      for (int m = k; m <= 5; ++m) {
        const double exact = *g.exact(k, m);
        EXPECT_LE(gen::rel_err(integrate_domain_w(g, k, m, quadrature()).value, exact), 1e-10)
            << name << " k=" << k << " m=" << m;
      }
    }
  }
}

TEST(DomainW, UnitDiscThroughTheFactorization) {
  const IntegralEstimate e = integrate_domain_w(builtin("ball"), 1, 2, monte_carlo(1'000'000));
  EXPECT_FALSE(e.deterministic);
  expect_within(e, kPi, 4.0);
}

TEST(DomainW, CompactIntegrandHasNoQuadrature) {
  EXPECT_EQ(gen::code_of([] { integrate_domain_w(builtin("ball"), 1, 2, quadrature()); }),
            ErrorCode::kQuadratureUnavailable);
}

TEST(DomainW, AutomaticSwitchesToMonteCarloForLargeK) {
  DomainOptions o;
  o.sampler = sampler(200'000);
  const IntegralEstimate small = integrate_domain_w(builtin("gaussian"), 3, 3, o);
  EXPECT_TRUE(small.deterministic);
  const IntegralEstimate large = integrate_domain_w(builtin("gaussian"), 4, 4, o);
  EXPECT_FALSE(large.deterministic);
  expect_within(large, std::pow(kPi, 8.0), 4.0);
}

TEST(DomainW, NotCoregular) {
  EXPECT_EQ(gen::code_of([] { integrate_domain_w(builtin("gaussian"), 3, 2, quadrature()); }),
            ErrorCode::kNotCoregular);
  EXPECT_EQ(gen::code_of([] { integrate_orbit_u(builtin("gaussian"), 3, 2, quadrature()); }),
            ErrorCode::kNotCoregular);
}

TEST(OrbitU, Examples) {
  EXPECT_LE(gen::rel_err(integrate_orbit_u(builtin("gaussian"), 2, 3, quadrature()).value, kPi * kPi * kPi), 1e-10);
  EXPECT_LE(gen::rel_err(integrate_orbit_u(builtin("gaussian"), 2, 2, quadrature()).value, kPi * kPi), 1e-10);
  EXPECT_LE(gen::rel_err(integrate_orbit_u(builtin("gaussian"), 1, 3, quadrature()).value, std::pow(kPi, 1.5)),
            1e-10);
}

TEST(OrbitU, SingularSquareCaseByMonteCarlo) {
  for (int m = 2; m <= 4; ++m) {
    const IntegralEstimate e = integrate_orbit_u(builtin("gaussian"), m, m, monte_carlo(200'000));
    expect_within(e, std::pow(kPi, 0.5 * m * m), 4.0);
  }
}

TEST(OrbitU, FaultBreaksTheConstant) {
  DomainOptions o = quadrature();
  o.fault = Fault::kFlipTwoPower;
  const double value = integrate_orbit_u(builtin("gaussian"), 2, 3, o).value;
  EXPECT_LE(gen::rel_err(value, 16 * kPi * kPi * kPi), 1e-10);
}

TEST(OrbitU, DeterministicAcrossThreadCounts) {
  DomainOptions a = monte_carlo(50'000, 9);
  DomainOptions b = a;
  b.sampler.threads = 4;
  EXPECT_EQ(integrate_orbit_u(builtin("gaussian"), 3, 4, a).value, integrate_orbit_u(builtin("gaussian"), 3, 4, b).value);
}

TEST(CompareMethods, GaussianFamilyAgrees) {
  MethodBudgets budgets;
  budgets.sampler = sampler(100'000);
  for (int m = 1; m <= 4; ++m) {
    for (int k = 1; k <= m; ++k) {
      const ConsistencyReport r = compare_methods(builtin("gaussian"), k, m, budgets);
      EXPECT_TRUE(r.pass) << "k=" << k << " m=" << m;
      ASSERT_TRUE(r.exact.has_value());
      EXPECT_EQ(r.rows.size(), 3u);
      for (const auto& row : r.rows) EXPECT_LT(row.z_max, kZThreshold);
    }
  }
}

TEST(CompareMethods, UnitBall) {
  MethodBudgets budgets;
  budgets.sampler = sampler(400'000);
  const ConsistencyReport r = compare_methods(builtin("ball"), 1, 3, budgets);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(*r.exact, 4 * kPi / 3, 1e-14);
  for (const auto& row : r.rows) EXPECT_FALSE(row.estimate.deterministic);
}

TEST(CompareMethods, FaultIsDetected) {
  MethodBudgets budgets;
  budgets.sampler = sampler(100'000);
  budgets.fault = Fault::kFlipTwoPower;
  EXPECT_FALSE(compare_methods(builtin("gaussian"), 2, 3, budgets).pass);
}

TEST(CompareMethods, MismatchedIntegrandSurfacesError) {
  InvariantIntegrand bad = builtin("gaussian");
  bad.name = "bad";
  bad.invariant = [](const GramMatrix& u) { return std::exp(-2.0 * u.trace()); };
  EXPECT_EQ(gen::code_of([&] { compare_methods(bad, 1, 2, MethodBudgets{}); }), ErrorCode::kRegistrationError);
}
