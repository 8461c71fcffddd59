#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "pco/pco.hpp"

using namespace pco;

TEST_CASE("basin radius and time bound formulas") {
  CHECK(rho0(0.5, 0.5, 0.1) == Catch::Approx(0.4));
  CHECK(rho0(0.6, 0.9, 0.1) == Catch::Approx(0.2));
  CHECK(t_star(0.4, 2, 0.1, 0.1) == Catch::Approx(8.0));
  CHECK(t_star(0.4, 2, 0.1, 0.3) == Catch::Approx(8.0));  // min(tau, kappa) binds
  CHECK(t_star(0.0, 1, 0.1, 0.1) == 0.0);
  CHECK_THROWS_AS(t_star(0.4, 0, 0.1, 0.1), PreconditionViolated);
  CHECK_THROWS_AS(t_star(-0.1, 1, 0.1, 0.1), PreconditionViolated);
}

TEST_CASE("basin radius agrees with the symmetric basin bound") {
  for (double x : {0.3, 0.5, 0.7}) CHECK(rho0(x, x, 0.1) == basin_bound(x, x, 0.1));
}

TEST_CASE("convergence detection on synthetic traces") {
  Trace tr;
  tr.window_ranges = {{0.0, 0.3}, {1.1, 1e-10}, {2.2, 1e-10}, {3.3, 1e-10}};
  CHECK(detect_convergence(tr, 1e-9, 0.1) == 1.1);

  Trace dip;  // drops below and comes back: not converged there
  dip.window_ranges = {{0.0, 0.3}, {1.1, 1e-10}, {2.2, 0.2}, {3.3, 0.1}};
  CHECK_FALSE(detect_convergence(dip, 1e-9, 0.1).has_value());

  Trace late;  // the dip recovers, a later boundary holds
  late.window_ranges = {{0.0, 1e-10}, {1.1, 0.2}, {2.2, 1e-10}, {3.3, 1e-10}};
  CHECK(detect_convergence(late, 1e-9, 0.1) == 2.2);

  // interior samples above tolerance veto the boundary
  Trace veto;
  veto.window_ranges = {{0.0, 1e-10}, {1.1, 1e-10}};
  veto.range_series = {{0.5, 0.05}, {1.5, 0.05}};
  CHECK_FALSE(detect_convergence(veto, 1e-9, 0.1).has_value());
}

TEST_CASE("report combines trace and curve parameters") {
  Trace tr;
  tr.window_ranges = {{0.0, 0.3}, {1.1, 0.0}};
  tr.converged_at = 1.1;
  tr.windows_used = 2;
  S2Params s2{0.1, 0.6, 0.6, 0.1};
  ConvergenceReport r = make_report(tr, s2, 2);
  CHECK(r.converged);
  CHECK(r.basin_ok);  // 0.3 < 0.5
  CHECK(r.t_star == Catch::Approx(6.0));
  Trace far = tr;
  far.window_ranges[0].second = 0.6;
  CHECK_FALSE(make_report(far, s2, 2).basin_ok);
}

TEST_CASE("seed derivation separates streams") {
  CHECK(derive_seed(0, 0) != derive_seed(0, 1));
  CHECK(derive_seed(0, 0) != derive_seed(1, 0));
  CHECK(derive_seed(42, 7) == derive_seed(42, 7));
}

TEST_CASE("phase samplers respect their supports") {
  auto u = sample_init_phases({InitSampler::Mode::Uniform, 0}, 1000, 5);
  for (double p : u) {
    CHECK(p >= 0.0);
    CHECK(p < 1.0);
  }
  auto w = sample_init_phases({InitSampler::Mode::Window, 0.2}, 200, 6);
  CHECK(circular_range(w) <= 0.2);
}

TEST_CASE("confidence half-width") {
  CHECK(normal_ci95_halfwidth(0, 100) == Catch::Approx(0.005));
  CHECK(normal_ci95_halfwidth(50, 100) == Catch::Approx(1.96 * 0.05 + 0.005));
}

TEST_CASE("monte carlo estimates are independent of thread count") {
  SimConfig cfg;
  cfg.prc = s2_default(0.1);
  cfg.graphs = GraphSequence(gen_complete(4));
  cfg.tau = 0.1;
  cfg.horizon = 30;
  InitSampler sampler{InitSampler::Mode::Uniform, 0};
  BasinEstimate a = basin_monte_carlo(cfg, sampler, 24, 99, 1);
  BasinEstimate b = basin_monte_carlo(cfg, sampler, 24, 99, 4);
  CHECK(a.converged_count == b.converged_count);
  CHECK(a.error_count == b.error_count);
  CHECK(a.fraction == b.fraction);
  CHECK(a.converged_count > 0);
}

TEST_CASE("sleep schedule steps the thresholds by tau") {
  auto steps = sleep_schedule(0.1, 3);
  REQUIRE(steps.size() == 5);
  int expect_w[] = {0, 6, 12, 18, 24};
  double expect_b0[] = {0.6, 0.5, 0.4, 0.3, 0.2};
  double expect_b1[] = {0.6, 0.7, 0.8, 0.9, 1.0 - 1e-6};
  for (int i = 0; i < 5; ++i) {
    CHECK(steps[i].window_index == expect_w[i]);
    CHECK(steps[i].b0 == Catch::Approx(expect_b0[i]));
    CHECK(steps[i].b1 == Catch::Approx(expect_b1[i]));
  }
  CHECK_THROWS_AS(sleep_schedule(0.5, 3), PreconditionViolated);
  CHECK_THROWS_AS(sleep_schedule(0.1, 0), PreconditionViolated);
}

TEST_CASE("indegree sweep rows are complete and deterministic") {
  SimConfig cfg;
  cfg.prc = s2_default(0.1);
  cfg.tau = 0.1;
  cfg.horizon = 30;
  auto rows = indegree_convergence_sweep(8, {1, 3}, 10, cfg, 2024, 2);
  auto again = indegree_convergence_sweep(8, {1, 3}, 10, cfg, 2024, 1);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].k == 1);
  CHECK(rows[1].k == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].trials == 10);
    CHECK(rows[i].converged == again[i].converged);
  }
}
