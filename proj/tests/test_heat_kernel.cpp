#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "semirecon/errors.hpp"
#include "semirecon/forward_solver.hpp"
#include "semirecon/heat_kernel.hpp"

using namespace semirecon;
using std::numbers::pi;

namespace {

const DomainSpec unit = DomainSpec::interval(1.0);

BoundaryTrace constant_trace(const BoundaryNodeSet& nodes, double horizon, int steps, double value) {
  return BoundaryTrace::sample(nodes, TimeGrid(horizon, steps),
                               [value](const BoundaryNode&, double) { return value; });
}

}  // namespace

TEST(Kernel, MatchesIndependentImageSum) {
  const KernelEvaluator ev(unit);
  for (double tau : {1e-4, 1e-3, 0.01, 0.2, 1.0}) {
    for (auto [x, y] : {std::pair{0.5, 0.5}, std::pair{0.0, 0.0}, std::pair{0.3, 0.8}, std::pair{1.0, 0.1}}) {
      const double expected = oracle::interval_kernel(x, y, tau);
      EXPECT_NEAR(kernel_value(ev, {x, 0}, {y, 0}, tau), expected, 1e-10 * std::max(1.0, expected));
    }
  }
  // frozen high-precision values
  EXPECT_NEAR(kernel_value(ev, {0.5, 0}, {0.5, 0}, 0.01), 2.82094791781713573803, 1e-12);
  EXPECT_NEAR(kernel_value(ev, {0.3, 0}, {0.8, 0}, 0.2), 0.86781653831082888289, 1e-12);
}

TEST(Kernel, LongTimeLimitIsOne) {
  const KernelEvaluator ev(unit);
  for (double x : {0.0, 0.4, 1.0}) EXPECT_NEAR(kernel_value(ev, {x, 0}, {0.7, 0}, 50.0), 1.0, 1e-14);
  const KernelEvaluator r(DomainSpec::rectangle(2.0, 0.5));
  EXPECT_NEAR(kernel_value(r, {0.1, 0.1}, {1.9, 0.4}, 50.0), 1.0, 1e-14);
}

TEST(Kernel, SymmetricAndPositive) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> pos(0.0, 1.0);
  std::uniform_real_distribution<double> log_tau(-4.0, 1.0);
  const KernelEvaluator ev(unit);
  const KernelEvaluator r(DomainSpec::rectangle(1.0, 0.5));
  for (int i = 0; i < 200; ++i) {
    const double tau = std::pow(10.0, log_tau(rng));
    const Point x{pos(rng), 0.0};
    const Point y{pos(rng), 0.0};
    EXPECT_DOUBLE_EQ(kernel_value(ev, x, y, tau), kernel_value(ev, y, x, tau));
    if (oracle::interval_kernel(x.x, y.x, tau) > 1e-300) EXPECT_GT(kernel_value(ev, x, y, tau), 0.0);
    EXPECT_GE(kernel_value(ev, x, y, tau), 0.0);
    const Point a{pos(rng), 0.5 * pos(rng)};
    const Point b{pos(rng), 0.5 * pos(rng)};
    EXPECT_NEAR(kernel_value(r, a, b, tau), kernel_value(r, b, a, tau), 1e-12 * kernel_value(r, a, b, tau));
    EXPECT_GE(kernel_value(r, a, b, tau), 0.0);
  }
}

TEST(Kernel, BranchesAgreeAtSmallGap) {
  const KernelEvaluator ev(unit);
  EXPECT_NEAR(ev.spectral({0.5, 0}, {0.5, 0}, 0.01), ev.images({0.5, 0}, {0.5, 0}, 0.01), 1e-10);
}

TEST(Kernel, BranchesAgreeInOverlapBand) {
  const KernelEvaluator ev(unit);
  const double eps = ev.crossover();
  EXPECT_GT(eps, 0.0);
  for (double tau : {eps / 2, eps, 1.5 * eps, 2 * eps}) {
    for (auto [x, y] : {std::pair{0.0, 0.0}, std::pair{0.5, 0.51}, std::pair{1.0, 0.0}}) {
      const double s = ev.spectral({x, 0}, {y, 0}, tau);
      const double m = ev.images({x, 0}, {y, 0}, tau);
      EXPECT_LT(std::abs(s - m) / std::max(1.0, m), 1e-8) << tau << " " << x << " " << y;
    }
  }
}

TEST(Kernel, RejectsCrossoverBelowTailBound) {
  KernelConfig cfg;
  cfg.crossover = 1e-7;  // exp(-lambda_max * 1e-7) is nowhere near 1e-12
  EXPECT_THROW(KernelEvaluator(unit, cfg), ConfigError);
  EXPECT_THROW(kernel_value(KernelEvaluator(unit), {0, 0}, {0, 0}, 0.0), InputError);
}

TEST(Mass, ConservedAcrossBranches) {
  const KernelEvaluator ev(unit);
  const SpatialGrid grid = build_grid(unit, 1024);
  for (double x : {0.0, 0.37, 1.0}) {
    EXPECT_NEAR(mass(ev, {x, 0}, 0.5, grid), 1.0, 1e-8);
    EXPECT_NEAR(mass(ev, {x, 0}, 1e-3, grid), 1.0, 1e-6);
    EXPECT_NEAR(mass(ev, {x, 0}, 1e3, grid), 1.0, 1e-14);
  }
}

TEST(Mass, RectangleBothBranches) {
  const auto d = DomainSpec::rectangle(1.0, 2.0);
  const KernelEvaluator ev(d);
  const SpatialGrid grid = build_grid(d, 64, 128);
  for (double tau : {1e-3, 0.05, 3.0}) {
    EXPECT_NEAR(mass(ev, {0.0, 2.0}, tau, grid), 1.0, 1e-6) << tau;
    EXPECT_NEAR(mass(ev, {0.5, 0.3}, tau, grid), 1.0, 1e-6) << tau;
  }
}

TEST(BoundaryPropagate, ZeroSourceGivesZero) {
  const KernelEvaluator ev(unit);
  const auto g = constant_trace(boundary_nodes(unit, 2), 1.0, 32, 0.0);
  for (double x : {0.0, 0.5, 1.0}) EXPECT_EQ(boundary_propagate(ev, g, {x, 0}, 0.7), 0.0);
}

TEST(BoundaryPropagate, UnitFluxMatchesQuadratureOracle) {
  const KernelEvaluator ev(unit);
  const auto g = constant_trace(boundary_nodes(unit, 2), 1.0, 64, 1.0);
  for (auto [x, t] : {std::pair{0.3, 0.5}, std::pair{0.0, 0.5}, std::pair{1.0, 0.25}}) {
    const double expected =
        oracle::time_integrated_kernel(x, 0.0, t) + oracle::time_integrated_kernel(x, 1.0, t);
    EXPECT_NEAR(boundary_propagate(ev, g, {x, 0}, t), expected, 1e-6) << x << " " << t;
  }
  // frozen extended-precision values
  EXPECT_NEAR(boundary_propagate(ev, g, {0.3, 0}, 0.5), 0.956666666750429872, 1e-6);
  EXPECT_NEAR(boundary_propagate(ev, g, {0.0, 0}, 0.5), 1.166666666395603321, 1e-6);
  EXPECT_NEAR(boundary_propagate(ev, g, {1.0, 0}, 0.25), 0.666661426012218743, 1e-6);
}

TEST(BoundaryPropagate, ReproducesDirichletDataFromFlux) {
  const DirichletData phi{[](Point p, double t) { return t * p.x; }, 1.0, "t*x"};
  const SolutionField v = solve_linear_heat(build_grid(unit, 512), phi, 2048);
  const BoundaryTrace flux = neumann_trace(v);
  const KernelEvaluator ev(unit);
  double err = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double t = i / 20.0;
    err = std::max(err, std::abs(boundary_propagate(ev, flux, {1.0, 0}, t) - t));
  }
  EXPECT_LT(err, 0.02);
}

TEST(DomainPropagate, ZeroAndUnitSources) {
  const KernelEvaluator ev(unit);
  const SpatialGrid grid = build_grid(unit, 64);
  const TimeGrid time(1.0, 50);
  const auto zero = SpaceTimeField::sample(grid, time, [](Point, double) { return 0.0; });
  const auto one = SpaceTimeField::sample(grid, time, [](Point, double) { return 1.0; });
  for (double x : {0.0, 0.5, 1.0}) {
    EXPECT_EQ(domain_propagate(ev, zero, {x, 0}, 0.8), 0.0);
    for (double t : {0.1, 0.55, 1.0}) EXPECT_NEAR(domain_propagate(ev, one, {x, 0}, t), t, 1e-6);
  }
}

TEST(DomainPropagate, SingleModeFilter) {
  for (const auto& d : {unit, DomainSpec::rectangle(1.0, 0.5)}) {
    const KernelEvaluator ev(d);
    const SpatialGrid grid = d.dimension() == 1 ? build_grid(d, 128) : build_grid(d, 64, 32);
    const TimeGrid time(1.0, 40);
    for (std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{4}}) {
      const Mode& m = ev.basis().mode(k);
      const auto h = SpaceTimeField::sample(grid, time, [&](Point p, double) { return ev.basis().value(k, p); });
      for (Point x : {Point{0.0, 0.0}, Point{0.3, 0.2}}) {
        for (double t : {0.25, 1.0}) {
          const double filter = m.lambda == 0.0 ? t : -std::expm1(-m.lambda * t) / m.lambda;
          EXPECT_NEAR(domain_propagate(ev, h, x, t), ev.basis().value(k, x) * filter, 1e-6);
        }
      }
    }
  }
}
