#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pco/errors.hpp"
#include "pco/phase.hpp"

namespace pco {

// ---------------------------------------------------------------------------
// Piecewise-linear curves.
//
// A curve is a contiguous list of linear segments covering [0,1].  Segment
// boundaries may carry jump discontinuities; evaluation at a shared boundary
// takes the left segment's value (band definitions are left-inclusive,
// 0 <= phi <= B0).
// ---------------------------------------------------------------------------

struct Segment {
  double x0, x1;  // phase interval, x0 < x1
  double y0, y1;  // values at x0 and x1, linear in between

  double at(double x) const {
    if (x1 == x0) return y0;
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
  }
  double slope() const { return (y1 - y0) / (x1 - x0); }
};

class PiecewiseLinearCurve {
 public:
  PiecewiseLinearCurve() = default;

  explicit PiecewiseLinearCurve(std::vector<Segment> segs) : segs_(std::move(segs)) {
    check();
  }

  // Vertices (phase, value) with nondecreasing phases; a repeated phase
  // encodes a jump.  First vertex must be at phase 0, last at phase 1.
  static PiecewiseLinearCurve from_vertices(const std::vector<std::pair<double, double>>& v) {
    if (v.size() < 2) throw ValidationError("piecewise-linear curve needs at least 2 vertices");
    std::vector<Segment> segs;
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i].first < v[i - 1].first)
        throw ValidationError("piecewise-linear vertices must have nondecreasing phases");
      if (v[i].first == v[i - 1].first) continue;  // jump
      segs.push_back({v[i - 1].first, v[i].first, v[i - 1].second, v[i].second});
    }
    return PiecewiseLinearCurve(std::move(segs));
  }

  double eval(double phi) const {
    // Left-inclusive: at a shared boundary prefer the earlier segment.
    for (const auto& s : segs_) {
      if (phi >= s.x0 - kPhaseTol && phi <= s.x1 + kPhaseTol) return s.at(std::clamp(phi, s.x0, s.x1));
    }
    return segs_.back().at(segs_.back().x1);
  }

  const std::vector<Segment>& segments() const { return segs_; }

 private:
  void check() const {
    if (segs_.empty()) throw ValidationError("empty piecewise-linear curve");
    if (std::abs(segs_.front().x0) > kPhaseTol)
      throw ValidationError("piecewise-linear curve must start at phase 0");
    if (std::abs(segs_.back().x1 - 1.0) > kPhaseTol)
      throw ValidationError("piecewise-linear curve must end at phase 1");
    for (std::size_t i = 0; i < segs_.size(); ++i) {
      if (segs_[i].x1 <= segs_[i].x0)
        throw ValidationError("piecewise-linear breakpoints must be strictly increasing");
      if (i > 0 && std::abs(segs_[i].x0 - segs_[i - 1].x1) > kPhaseTol)
        throw ValidationError("piecewise-linear segments must be contiguous");
    }
  }

  std::vector<Segment> segs_;
};

// ---------------------------------------------------------------------------
// PRC specifications.
// ---------------------------------------------------------------------------

struct PrcSpec;

// f = -phi on [0,B0], 0 elsewhere.
struct StrongReset {
  double b0;
};

// f = -phi on [0,B0], 1-phi elsewhere (forced firing).
struct StrongFire {
  double b0;
};

// Curve with reset zone, tau-inhibitory band and excitatory tail; carries the
// parameters it was declared/validated with.
struct StrongTypeII {
  PiecewiseLinearCurve curve;
  double kappa = 0;
  double b0 = 0;
  double b1 = 0;
};

// f = V^-1(eps + V(phi)) - phi with V(phi) = ln(1+(e^b-1)phi)/b.
struct MirolloStrogatz {
  double b;
  double eps;
};

struct PiecewiseLinear {
  PiecewiseLinearCurve curve;
};

// Per-edge weighted wrap of an inner PRC: full reset only up to w.
struct Weighted {
  std::shared_ptr<const PrcSpec> inner;
  double w;
};

struct PrcSpec {
  std::variant<StrongReset, StrongFire, StrongTypeII, MirolloStrogatz, PiecewiseLinear, Weighted> v;
};

inline std::optional<double> inhibitory_end(const PrcSpec& prc);

inline PrcSpec make_weighted(PrcSpec inner, double w) {
  if (w <= 0.0) throw ValidationError("weighted PRC requires w > 0");
  if (auto b0 = inhibitory_end(inner); b0 && w > *b0 + kPhaseTol)
    throw ValidationError("weighted PRC requires w <= B0 of the inner curve");
  return PrcSpec{Weighted{std::make_shared<const PrcSpec>(std::move(inner)), w}};
}

namespace ms_detail {
inline double V(double phi, double b) { return std::log1p((std::exp(b) - 1.0) * phi) / b; }
inline double Vinv(double y, double b) { return std::expm1(b * y) / (std::exp(b) - 1.0); }
}  // namespace ms_detail

// End of the inhibitory band, where the curve form makes it explicit.
inline std::optional<double> inhibitory_end(const PrcSpec& prc) {
  if (const auto* sr = std::get_if<StrongReset>(&prc.v)) return sr->b0;
  if (const auto* sf = std::get_if<StrongFire>(&prc.v)) return sf->b0;
  if (const auto* s2 = std::get_if<StrongTypeII>(&prc.v)) return s2->b0;
  return std::nullopt;
}

inline double eval_prc(const PrcSpec& prc, double phi);

namespace prc_detail {
struct Eval {
  double phi;

  double operator()(const StrongReset& p) const { return phi <= p.b0 + kPhaseTol ? -phi : 0.0; }
  double operator()(const StrongFire& p) const { return phi <= p.b0 + kPhaseTol ? -phi : 1.0 - phi; }
  double operator()(const StrongTypeII& p) const { return p.curve.eval(phi); }
  double operator()(const MirolloStrogatz& p) const {
    return ms_detail::Vinv(p.eps + ms_detail::V(phi, p.b), p.b) - phi;
  }
  double operator()(const PiecewiseLinear& p) const { return p.curve.eval(phi); }
  double operator()(const Weighted& p) const {
    if (phi <= p.w + kPhaseTol) return -phi;
    double inner = eval_prc(*p.inner, phi);
    auto b0 = inhibitory_end(*p.inner);
    if (b0 && phi <= *b0 + kPhaseTol) return std::max(inner, -p.w);
    return inner;
  }
};
}  // namespace prc_detail

inline double eval_prc(const PrcSpec& prc, double phi) {
  return std::visit(prc_detail::Eval{phi}, prc.v);
}

struct PrcEffect {
  Phase new_phi;
  bool fired;
};

// phi + f(phi), clamped to [0,1]; reaching 1 fires (phase resets to 0).
inline PrcEffect apply_prc(Phase phi, const PrcSpec& prc) {
  double candidate = phi + eval_prc(prc, phi);
  if (candidate >= 1.0 - kPhaseTol) return {0.0, true};
  return {std::max(candidate, 0.0), false};
}

// ---------------------------------------------------------------------------
// S2 validation.
// ---------------------------------------------------------------------------

struct S2Params {
  double kappa;
  double b0;
  double b1;
  double tau_ref;
};

namespace s2_detail {

// Exact piecewise-linear view of a spec; non-linear forms are densely sampled.
inline PiecewiseLinearCurve to_curve(const PrcSpec& prc, int samples) {
  if (const auto* pl = std::get_if<PiecewiseLinear>(&prc.v)) return pl->curve;
  if (const auto* s2 = std::get_if<StrongTypeII>(&prc.v)) return s2->curve;
  if (const auto* sr = std::get_if<StrongReset>(&prc.v))
    return PiecewiseLinearCurve({{0.0, sr->b0, 0.0, -sr->b0}, {sr->b0, 1.0, 0.0, 0.0}});
  if (const auto* sf = std::get_if<StrongFire>(&prc.v))
    return PiecewiseLinearCurve({{0.0, sf->b0, 0.0, -sf->b0}, {sf->b0, 1.0, 1.0 - sf->b0, 0.0}});
  std::vector<Segment> segs;
  segs.reserve(samples);
  double prev_x = 0.0, prev_y = eval_prc(prc, 0.0);
  for (int i = 1; i <= samples; ++i) {
    double x = static_cast<double>(i) / samples;
    double y = eval_prc(prc, std::min(x, 1.0 - kPhaseTol));
    segs.push_back({prev_x, x, prev_y, y});
    prev_x = x;
    prev_y = y;
  }
  return PiecewiseLinearCurve(std::move(segs));
}

inline std::string fail_msg(char clause, double phi, const std::string& detail) {
  std::ostringstream os;
  os << "not an S2 curve: clause (" << clause << ") fails at phi=" << phi << ": " << detail;
  return os.str();
}

}  // namespace s2_detail

// Verifies the S2 clauses against a curve and returns the largest kappa and
// tightest (B0 maximal, B1 minimal) parameters consistent with it:
//   (a) f(phi) = -phi on [0, tau+kappa] for some kappa > 0,
//   (b) f(phi) <= -tau-kappa on [tau+kappa, B0]   (checked from tau+kappa;
//       on the overlap [tau, tau+kappa) clause (a) already pins f = -phi),
//   (c) f(phi) >= 0 on (B1, 1), with B1 < 1.
// Exact on piecewise-linear curves; dense sampling otherwise.
inline S2Params validate_s2(const PrcSpec& prc, double tau, int samples = 10000) {
  if (!(tau > 0.0 && tau < 0.5)) throw PreconditionViolated("validate_s2: tau must be in (0, 0.5)");
  const PiecewiseLinearCurve curve = s2_detail::to_curve(prc, samples);
  const auto& segs = curve.segments();

  // (a) longest prefix on which f = -phi.
  double reset_end = 0.0;
  for (const auto& s : segs) {
    if (std::abs(s.y0 + s.x0) <= kPhaseTol && std::abs(s.y1 + s.x1) <= kPhaseTol)
      reset_end = s.x1;
    else
      break;
  }
  if (reset_end <= tau + kPhaseTol) {
    double bad = segs.empty() ? 0.0 : std::max(reset_end, kPhaseTol);
    throw NotS2('a', bad, s2_detail::fail_msg('a', bad, "reset zone f(phi) = -phi does not extend past tau"));
  }
  const double kappa = reset_end - tau;  // the band maximum can only loosen this

  // (b) B0 = largest b such that f <= -(tau+kappa) on [tau+kappa, b].
  const double start = tau + kappa;
  const double bound = -(tau + kappa);
  double b0 = start;
  for (const auto& s : segs) {
    if (s.x1 <= start + kPhaseTol) continue;
    double lo = std::max(s.x0, start);
    double v_lo = s.at(lo);
    if (v_lo > bound + kPhaseTol) break;
    if (s.y1 <= bound + kPhaseTol) {
      b0 = s.x1;
      continue;
    }
    // Crosses the bound inside the segment; stop at the crossing.
    double t = (bound - s.y0) / (s.y1 - s.y0);
    b0 = std::max(b0, s.x0 + t * (s.x1 - s.x0));
    break;
  }
  if (b0 <= start + kPhaseTol) {
    // Left-inclusive value at the reset-zone end must still satisfy the band.
    if (curve.eval(start) > bound + kPhaseTol)
      throw NotS2('b', start,
                  s2_detail::fail_msg('b', start, "f exceeds -tau-kappa just past the reset zone"));
    b0 = start;
  }

  // (c) B1: where the curve turns strictly positive for good; failing that,
  // where it stops being negative.  sup of {x: f(x) <= bound} per segment:
  // right endpoint when it qualifies, else the upward crossing.
  double last_nonpos = 0.0;  // sup{phi: f(phi) <= 0}
  double last_neg = 0.0;     // sup{phi: f(phi) < 0}
  for (const auto& s : segs) {
    auto track = [&](double bnd, double& out) {
      if (s.y1 <= bnd + kPhaseTol) {
        out = std::max(out, s.x1);
      } else if (s.y0 <= bnd + kPhaseTol) {
        double t = (bnd - s.y0) / (s.y1 - s.y0);
        out = std::max(out, s.x0 + t * (s.x1 - s.x0));
      }
    };
    track(0.0, last_nonpos);
    track(-2 * kPhaseTol, last_neg);
  }
  double b1;
  if (last_nonpos < 1.0 - kPhaseTol) {
    b1 = last_nonpos;  // strictly positive tail on (b1, 1)
  } else if (last_neg < 1.0 - kPhaseTol) {
    b1 = last_neg;     // f >= 0 (possibly = 0) on (b1, 1)
  } else {
    throw NotS2('c', last_neg, s2_detail::fail_msg('c', last_neg, "f is negative arbitrarily close to phase 1"));
  }
  b1 = std::max(b1, b0);
  if (b1 >= 1.0 - kPhaseTol)
    throw NotS2('c', b1, s2_detail::fail_msg('c', b1, "no excitatory region before phase 1"));

  return S2Params{kappa, b0, b1, tau};
}

// min(B0 - tau, 1 - B1 + tau): radius of the proven basin of synchrony.
inline double basin_bound(double b0, double b1, double tau) {
  if (!(tau < b0 && b0 <= b1 && b1 < 1.0))
    throw PreconditionViolated("basin_bound requires tau < B0 <= B1 < 1");
  return std::min(b0 - tau, 1.0 - b1 + tau);
}

// ---------------------------------------------------------------------------
// Presets.
// ---------------------------------------------------------------------------

// Reset zone [0,2tau] (kappa = tau), inhibitory plateau to B0 = B1 = 0.5+tau,
// then forced firing.  Basin radius 0.5, the maximum for this tau.
inline PrcSpec s2_default(double tau) {
  if (!(tau > 0.0 && tau < 0.5)) throw ValidationError("s2-default requires tau in (0, 0.5)");
  double b = 0.5 + tau;
  PiecewiseLinearCurve c({{0.0, 2 * tau, 0.0, -2 * tau},
                          {2 * tau, b, -2 * tau, -2 * tau},
                          {b, 1.0, 1.0 - b, 0.0}});
  StrongTypeII s2{std::move(c), tau, b, b};
  return PrcSpec{std::move(s2)};
}

// Inhibition clipped at -0.1: f = max(-phi, -0.1) for phi <= B0, else 0.
inline PrcSpec limited_reset(double b0 = 0.5) {
  PiecewiseLinearCurve c({{0.0, 0.1, 0.0, -0.1},
                          {0.1, b0, -0.1, -0.1},
                          {b0, 1.0, 0.0, 0.0}});
  return PrcSpec{PiecewiseLinear{std::move(c)}};
}

// Presets addressable by name; tau parameterizes "s2-default".
inline PrcSpec prc_preset(const std::string& name, double tau, double b0 = 0.5) {
  if (name == "sr") return PrcSpec{StrongReset{b0}};
  if (name == "sf") return PrcSpec{StrongFire{b0}};
  if (name == "s2-default") return s2_default(tau);
  if (name == "ms") return PrcSpec{MirolloStrogatz{3.0, 0.05}};
  if (name == "limited-reset") return limited_reset(b0);
  throw ParseError("unknown prc preset '" + name +
                   "'; available: sr, sf, s2-default, ms, limited-reset");
}

}  // namespace pco
