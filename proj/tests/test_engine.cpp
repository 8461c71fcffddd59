#include <algorithm>
#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "pco/pco.hpp"

using namespace pco;

namespace {

SimConfig base_config(DirectedGraph g, double tau = 0.1) {
  SimConfig cfg;
  cfg.prc = PrcSpec{StrongReset{0.5}};
  cfg.graphs = GraphSequence(std::move(g));
  cfg.tau = tau;
  cfg.stop_on_convergence = false;
  return cfg;
}

}  // namespace

TEST_CASE("single oscillator fires once per unit time") {
  SimConfig cfg = base_config(DirectedGraph(1));
  cfg.init_phases = {0.3};
  cfg.horizon = 3.05;
  Trace tr = simulate(cfg);
  REQUIRE(tr.firings.size() == 3);
  CHECK(tr.firings[0].first == Catch::Approx(0.7));
  CHECK(tr.firings[1].first == Catch::Approx(1.7));
  CHECK(tr.firings[2].first == Catch::Approx(2.7));
  CHECK(tr.converged_at == 0.0);  // one node is synchronized by definition
}

TEST_CASE("two coupled resetting nodes, exact event times") {
  DirectedGraph g(2);
  g.add_undirected(0, 1);
  SimConfig cfg = base_config(std::move(g));
  cfg.init_phases = {0.99, 0.95};
  cfg.horizon = 2.5;
  Trace tr = simulate(cfg);
  // 0 fires at 0.01, 1 at 0.05; each is reset by the other's pulse
  // (at 0.15 and 0.11) and fires one unit later, then the pattern repeats
  // with the order swapped.
  REQUIRE(tr.firings.size() >= 6);
  CHECK(tr.firings[0].first == Catch::Approx(0.01).margin(1e-12));
  CHECK(tr.firings[0].second == 0);
  CHECK(tr.firings[1].first == Catch::Approx(0.05).margin(1e-12));
  CHECK(tr.firings[1].second == 1);
  CHECK(tr.firings[2].first == Catch::Approx(1.11).margin(1e-12));
  CHECK(tr.firings[2].second == 1);
  CHECK(tr.firings[3].first == Catch::Approx(1.15).margin(1e-12));
  CHECK(tr.firings[3].second == 0);
  CHECK(tr.firings[4].first == Catch::Approx(2.21).margin(1e-12));
  CHECK(tr.firings[4].second == 0);
  CHECK(tr.firings[5].first == Catch::Approx(2.25).margin(1e-12));
  CHECK(tr.firings[5].second == 1);
}

TEST_CASE("forced firing cascade matches the next-fire solution") {
  DirectedGraph g = gen_path(3, false);
  std::vector<double> phases = {0.95, 0.9, 0.85};
  SimConfig cfg = base_config(g, 0.05);
  cfg.prc = PrcSpec{StrongFire{0.5}};
  cfg.init_phases = phases;
  cfg.horizon = 1.0;
  Trace tr = simulate(cfg);
  auto lam = sf_next_fire_times(phases, g, 0.05);
  std::vector<double> first(3, 1e9);
  for (const auto& [t, node] : tr.firings) first[node] = std::min(first[node], t);
  for (int i = 0; i < 3; ++i) CHECK(first[i] == Catch::Approx(lam[i]).margin(1e-12));
}

TEST_CASE("identical seeds give identical traces") {
  SimConfig cfg = base_config(gen_complete(5));
  cfg.prc = s2_default(0.1);
  cfg.seed = 1234;
  cfg.init_phases = sample_init_phases({InitSampler::Mode::Uniform, 0}, 5, 77);
  cfg.horizon = 20;
  cfg.freq_error = 0.01;
  cfg.delay_jitter = 0.01;
  Trace a = simulate(cfg);
  Trace b = simulate(cfg);
  REQUIRE(a.firings.size() == b.firings.size());
  for (std::size_t i = 0; i < a.firings.size(); ++i) {
    CHECK(a.firings[i].first == b.firings[i].first);  // bitwise
    CHECK(a.firings[i].second == b.firings[i].second);
  }
  CHECK(a.events_processed == b.events_processed);
  CHECK(a.final_phases == b.final_phases);
}

TEST_CASE("synchrony is absorbing") {
  SimConfig cfg = base_config(gen_complete(6));
  cfg.prc = s2_default(0.1);
  cfg.init_phases.assign(6, 0.4);
  cfg.horizon = 11.0;
  Trace tr = simulate(cfg);
  // boundary snapshots may catch a node one ulp below the wrap point
  for (const auto& [t, rho] : tr.window_ranges) CHECK(rho <= 1e-15);
  CHECK(tr.converged_at == 0.0);
  // all firings happen in simultaneous groups of 6
  REQUIRE(tr.firings.size() % 6 == 0);
  for (std::size_t i = 0; i < tr.firings.size(); i += 6)
    for (std::size_t j = 1; j < 6; ++j)
      CHECK(tr.firings[i + j].first == tr.firings[i].first);
}

TEST_CASE("quiescent period drops closely spaced signals") {
  // two sources feeding one sink; pulses land 0.05 apart
  DirectedGraph g(3);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  auto run = [&](double q) {
    SimConfig cfg = base_config(g);
    cfg.prc = PrcSpec{StrongReset{0.9}};
    cfg.init_phases = {0.99, 0.94, 0.5};
    cfg.quiescent = q;
    cfg.horizon = 1.5;
    Trace tr = simulate(cfg);
    for (const auto& [t, node] : tr.firings)
      if (node == 2) return t;
    return -1.0;
  };
  // q=0: the sink is reset at 0.11 and again at 0.16, fires at 1.16.
  CHECK(run(0.0) == Catch::Approx(1.16).margin(1e-12));
  // q=0.2: the second pulse is ignored.
  CHECK(run(0.2) == Catch::Approx(1.11).margin(1e-12));
}

TEST_CASE("quiescence never blocks intrinsic firing") {
  DirectedGraph g(2);
  g.add_edge(0, 1);
  SimConfig cfg = base_config(std::move(g));
  cfg.prc = limited_reset(0.5);  // inhibition capped, receiver keeps advancing
  cfg.init_phases = {0.5, 0.9};
  cfg.quiescent = 5.0;
  cfg.horizon = 2.0;
  Trace tr = simulate(cfg);
  int fires_1 = 0;
  for (const auto& [t, node] : tr.firings)
    if (node == 1) ++fires_1;
  CHECK(fires_1 >= 1);
}

TEST_CASE("window map equals the closed form at a synchronous state") {
  DirectedGraph g = gen_complete(3);
  WindowMapResult wm = run_window_map({0.25, 0.25, 0.25}, g, PrcSpec{StrongReset{0.5}}, 0.1);
  for (double p : wm.shifted_input) CHECK(p == 1.0);
  for (double p : wm.phases) CHECK(p == Catch::Approx(1.0));
}

TEST_CASE("window map matches the closed form on random cases") {
  OracleResult res = sr_oracle_suite(30, 2718);
  CHECK(res.cases == 30);
  CHECK(res.max_deviation <= 1e-9);
  // corrupting tau must break the agreement
  OracleResult bad = sr_oracle_suite(30, 2718, 0.01);
  CHECK(bad.max_deviation > 1e-4);
}

TEST_CASE("firing times match the next-fire solution on random cases") {
  OracleResult res = sf_oracle_suite(30, 3141);
  CHECK(res.cases == 30);
  CHECK(res.max_deviation <= 1e-9);
  OracleResult bad = sf_oracle_suite(30, 3141, 0.01);
  CHECK(bad.max_deviation > 1e-4);
}

TEST_CASE("dynamic sequences deliver pulses on the emission-time graph") {
  // window 0: 0 -> 1, window 1: no edges.  A pulse emitted just before the
  // switch still lands; with drop_pulses_on_switch it is discarded.
  DirectedGraph g01(2);
  g01.add_edge(0, 1);
  DirectedGraph empty(2);
  GraphSequence seq({g01, empty}, SequencePolicy::Cyclic);
  SimConfig cfg = base_config(DirectedGraph(2));
  cfg.graphs = seq;
  cfg.init_phases = {0.05, 0.2};  // 0 fires at 0.95, pulse lands at 1.05 < 1.1
  cfg.horizon = 1.09;
  Trace tr = simulate(cfg);
  CHECK(tr.final_phases[1] == Catch::Approx(0.04).margin(1e-12));  // reset at 1.05

  cfg.drop_pulses_on_switch = false;
  cfg.init_phases = {0.0, 0.3};  // 0 fires at 1.0, pulse lands at 1.1 in window 1
  cfg.horizon = 1.2;
  Trace tr2 = simulate(cfg);
  CHECK(tr2.final_phases[1] == Catch::Approx(0.1).margin(1e-12));  // reset at 1.1

  cfg.drop_pulses_on_switch = true;
  Trace tr3 = simulate(cfg);
  CHECK(tr3.final_phases[1] == Catch::Approx(0.5).margin(1e-12));  // pulse discarded
}

TEST_CASE("configuration validation") {
  SimConfig cfg = base_config(gen_complete(2));
  cfg.init_phases = {0.1, 0.2};
  cfg.tau = 0.6;
  CHECK_THROWS_AS(simulate(cfg), ConfigError);
  cfg.tau = 0.1;
  cfg.init_phases = {0.1};
  CHECK_THROWS_AS(simulate(cfg), ConfigError);
  cfg.init_phases = {0.1, 1.5};
  CHECK_THROWS_AS(simulate(cfg), ConfigError);
}

TEST_CASE("self-loop simulation resets a lone oscillator after each firing") {
  SimConfig cfg = base_config(DirectedGraph(1));
  cfg.self_loop_sim = true;
  cfg.init_phases = {0.0};
  cfg.horizon = 3.5;
  Trace tr = simulate(cfg);
  // fires at 1.0, own pulse arrives 0.1 later and resets: period 1.1
  REQUIRE(tr.firings.size() >= 3);
  CHECK(tr.firings[0].first == Catch::Approx(1.0));
  CHECK(tr.firings[1].first == Catch::Approx(2.1));
  CHECK(tr.firings[2].first == Catch::Approx(3.2));
}
