#include <cmath>
#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "pco/pco.hpp"

using namespace pco;

namespace {

// Independent check for the concave-map PRC: solve V(phi + f) = V(phi) + eps
// by bisection instead of using the closed-form inverse.
double ms_prc_bisect(double phi, double b, double eps) {
  double target = ms_detail::V(phi, b) + eps;
  double lo = phi, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (ms_detail::V(mid, b) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi) - phi;
}

}  // namespace

TEST_CASE("strong reset evaluation") {
  PrcSpec sr{StrongReset{0.5}};
  CHECK(eval_prc(sr, 0.3) == -0.3);
  CHECK(eval_prc(sr, 0.5) == -0.5);  // boundary is inside the reset zone
  CHECK(eval_prc(sr, 0.6) == 0.0);
  CHECK(eval_prc(sr, 0.0) == 0.0);
}

TEST_CASE("strong fire evaluation") {
  PrcSpec sf{StrongFire{0.5}};
  CHECK(eval_prc(sf, 0.3) == -0.3);
  CHECK(eval_prc(sf, 0.6) == Catch::Approx(0.4));
  CHECK(apply_prc(0.6, sf).fired);
  CHECK(apply_prc(0.6, sf).new_phi == 0.0);
  CHECK_FALSE(apply_prc(0.3, sf).fired);
  CHECK(apply_prc(0.3, sf).new_phi == 0.0);
}

TEST_CASE("limited reset evaluation") {
  PrcSpec lr = limited_reset(0.5);
  CHECK(eval_prc(lr, 0.05) == Catch::Approx(-0.05));
  CHECK(eval_prc(lr, 0.3) == Catch::Approx(-0.1));
  CHECK(eval_prc(lr, 0.7) == 0.0);
}

TEST_CASE("concave-map PRC matches bisection of the potential") {
  MirolloStrogatz ms{3.0, 0.05};
  PrcSpec prc{ms};
  for (double phi = 0.01; phi < 0.95; phi += 0.007) {
    double expected = ms_prc_bisect(phi, ms.b, ms.eps);
    CHECK(eval_prc(prc, phi) == Catch::Approx(expected).margin(1e-10));
  }
  // concave V flattens with phase, so the same potential step needs a
  // larger phase jump
  CHECK(eval_prc(prc, 0.1) < eval_prc(prc, 0.8));
}

TEST_CASE("piecewise linear curves are left-inclusive at jumps") {
  auto c = PiecewiseLinearCurve::from_vertices(
      {{0.0, 0.0}, {0.5, -0.5}, {0.5, 0.0}, {1.0, 0.0}});
  CHECK(c.eval(0.5) == Catch::Approx(-0.5));
  CHECK(c.eval(0.5 + 1e-9) == Catch::Approx(0.0).margin(1e-8));
  CHECK_THROWS_AS(PiecewiseLinearCurve::from_vertices({{0.1, 0.0}, {1.0, 0.0}}),
                  ValidationError);
  CHECK_THROWS_AS(PiecewiseLinearCurve::from_vertices({{0.0, 0.0}, {0.5, 0.0}}),
                  ValidationError);
}

TEST_CASE("type II validation extracts the declared parameters") {
  // reset to 0.3, plateau at -0.3 to 0.5, dead zone, then rising tail
  auto c = PiecewiseLinearCurve::from_vertices({{0.0, 0.0},
                                                {0.3, -0.3},
                                                {0.5, -0.3},
                                                {0.5, 0.0},
                                                {0.7, 0.0},
                                                {1.0, 0.1}});
  S2Params p = validate_s2(PrcSpec{PiecewiseLinear{c}}, 0.1);
  CHECK(p.kappa == Catch::Approx(0.2));
  CHECK(p.b0 == Catch::Approx(0.5));
  CHECK(p.b1 == Catch::Approx(0.7));
  CHECK(basin_bound(p.b0, p.b1, 0.1) == Catch::Approx(0.4));
}

TEST_CASE("type II validation of the presets") {
  S2Params d = validate_s2(s2_default(0.1), 0.1);
  CHECK(d.kappa == Catch::Approx(0.1));
  CHECK(d.b0 == Catch::Approx(0.6));
  CHECK(d.b1 == Catch::Approx(0.6));
  CHECK(basin_bound(d.b0, d.b1, 0.1) == Catch::Approx(0.5));

  // strong reset satisfies the clauses with a large kappa
  S2Params sr = validate_s2(PrcSpec{StrongReset{0.5}}, 0.1);
  CHECK(sr.kappa == Catch::Approx(0.4));
  CHECK(sr.b0 == Catch::Approx(0.5));
  CHECK(sr.b1 == Catch::Approx(0.5));

  // limited reset: reset zone ends at 0.1, so it only validates for tau < 0.1
  S2Params lr = validate_s2(limited_reset(0.5), 0.05);
  CHECK(lr.kappa == Catch::Approx(0.05));
  CHECK(lr.b0 == Catch::Approx(0.5));
  CHECK_THROWS_AS(validate_s2(limited_reset(0.5), 0.2), NotS2);
}

TEST_CASE("type II validation rejections carry the failing clause") {
  auto zero = PiecewiseLinearCurve::from_vertices({{0.0, 0.0}, {1.0, 0.0}});
  try {
    validate_s2(PrcSpec{PiecewiseLinear{zero}}, 0.1);
    FAIL("expected NotS2");
  } catch (const NotS2& e) {
    CHECK(e.clause == 'a');
  }
  // negative all the way to phase 1
  auto neg = PiecewiseLinearCurve::from_vertices({{0.0, 0.0}, {1.0, -1.0}});
  try {
    validate_s2(PrcSpec{PiecewiseLinear{neg}}, 0.1);
    FAIL("expected NotS2");
  } catch (const NotS2& e) {
    CHECK(e.clause == 'c');
  }
}

TEST_CASE("accepted type II curves satisfy the clauses pointwise") {
  const std::pair<PrcSpec, double> cases[] = {{s2_default(0.1), 0.1},
                                              {PrcSpec{StrongReset{0.5}}, 0.1},
                                              {limited_reset(0.8), 0.05}};
  for (const auto& [prc, tau] : cases) {
    S2Params p = validate_s2(prc, tau);
    double band = tau + p.kappa;
    for (int i = 0; i <= 1000; ++i) {
      double phi = i / 1000.0;
      double f = eval_prc(prc, phi);
      if (phi <= band + kPhaseTol) {
        CHECK(f == Catch::Approx(-phi).margin(1e-9));
      } else if (phi <= p.b0 + kPhaseTol) {
        CHECK(f <= -band + 1e-9);
      }
      if (phi > p.b1 + 1e-9) CHECK(f >= -1e-9);
    }
  }
}

TEST_CASE("basin bound preconditions") {
  CHECK(basin_bound(0.6, 0.6, 0.1) == Catch::Approx(0.5));
  CHECK(basin_bound(0.4, 0.8, 0.1) == Catch::Approx(0.3));
  CHECK_THROWS_AS(basin_bound(0.1, 0.5, 0.1), PreconditionViolated);
  CHECK_THROWS_AS(basin_bound(0.6, 0.5, 0.1), PreconditionViolated);
  CHECK_THROWS_AS(basin_bound(0.6, 1.0, 0.1), PreconditionViolated);
}

TEST_CASE("weighted wrap limits inhibition to the edge weight") {
  PrcSpec w = make_weighted(PrcSpec{StrongReset{0.5}}, 0.2);
  CHECK(eval_prc(w, 0.1) == Catch::Approx(-0.1));   // full reset below w
  CHECK(eval_prc(w, 0.2) == Catch::Approx(-0.2));
  CHECK(eval_prc(w, 0.4) == Catch::Approx(-0.2));   // clipped at -w
  CHECK(eval_prc(w, 0.7) == 0.0);                   // inner PRC untouched past B0
  CHECK_THROWS_AS(make_weighted(PrcSpec{StrongReset{0.5}}, 0.6), ValidationError);
  CHECK_THROWS_AS(make_weighted(PrcSpec{StrongReset{0.5}}, 0.0), ValidationError);
}

TEST_CASE("apply_prc keeps phases in range") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const PrcSpec prcs[] = {PrcSpec{StrongReset{0.5}}, PrcSpec{StrongFire{0.5}},
                          PrcSpec{MirolloStrogatz{3.0, 0.05}}, s2_default(0.1),
                          limited_reset(0.5), make_weighted(PrcSpec{StrongReset{0.5}}, 0.3)};
  for (const auto& prc : prcs) {
    for (int i = 0; i < 2000; ++i) {
      double phi = unif(rng);
      PrcEffect e = apply_prc(phi, prc);
      CHECK(e.new_phi >= 0.0);
      CHECK(e.new_phi < 1.0);
      if (e.fired) CHECK(e.new_phi == 0.0);
    }
  }
}

TEST_CASE("preset lookup") {
  CHECK(std::holds_alternative<StrongReset>(prc_preset("sr", 0.1).v));
  CHECK(std::holds_alternative<StrongFire>(prc_preset("sf", 0.1).v));
  CHECK(std::holds_alternative<MirolloStrogatz>(prc_preset("ms", 0.1).v));
  CHECK_THROWS_AS(prc_preset("nope", 0.1), ParseError);
  CHECK_THROWS_AS(s2_default(0.5), ValidationError);
}
