#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <vector>

#include "pco/errors.hpp"
#include "pco/graph.hpp"
#include "pco/phase.hpp"
#include "pco/prc.hpp"

namespace pco {

// Event-time ties are detected at this absolute tolerance and the tied batch
// is processed sequentially in random order.
inline constexpr double kTieTol = 1e-12;

struct SimConfig {
  PrcSpec prc;
  GraphSequence graphs;
  double tau = 0.1;
  std::vector<Phase> init_phases;
  std::uint64_t seed = 0;
  double horizon = 100.0;
  double freq_error = 0.0;    // per-oscillator frequency uniform in [1-e, 1+e]
  double delay_jitter = 0.0;  // per-pulse delay factor uniform in [1-j, 1+j]
  double quiescent = 0.0;     // ignore signals for q after receiving one
  bool self_loop_sim = false; // deliver own pulse to self tau after firing
  bool weighted_prc = false;  // wrap the PRC per edge with the edge weight
  bool drop_pulses_on_switch = false;
  double sample_interval = 0.0;  // 0 -> one sample per 1+tau window
  double conv_tolerance = 1e-9;
  bool stop_on_convergence = true;
};

struct Trace {
  std::vector<std::pair<double, int>> firings;            // (time, node)
  std::vector<std::pair<double, double>> range_series;    // (time, rho), sample cadence
  std::vector<std::pair<double, double>> window_ranges;   // (time, rho) at window boundaries
  std::optional<double> converged_at;
  std::size_t events_processed = 0;
  std::vector<Phase> final_phases;       // mod 1
  std::vector<double> final_phases_raw;  // in [0,1], 1 = about to fire
  double end_time = 0.0;
  int windows_used = 0;
};

namespace engine_detail {

struct OscState {
  double ref_time = 0.0;
  double ref_phase = 0.0;  // phase at ref_time
  double freq = 1.0;
  double quiescent_until = -std::numeric_limits<double>::infinity();
  double last_fire_instant = -std::numeric_limits<double>::infinity();
  std::uint64_t gen = 0;  // bumped on every phase discontinuity

  double phase_at(double t) const { return ref_phase + (t - ref_time) * freq; }
};

enum class EvKind { Fire, Arrival };

struct Ev {
  double t;
  EvKind kind;
  int node;            // firing node / arrival target
  int source = -1;     // arrival source
  double emit = 0.0;   // arrival emission time
  double weight = 1.0; // edge weight of the pulse
  std::uint64_t gen = 0;
  std::uint64_t seq = 0;
};

struct EvLater {
  bool operator()(const Ev& a, const Ev& b) const {
    if (a.t != b.t) return a.t > b.t;
    return a.seq > b.seq;
  }
};

class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    validate();
    n_ = cfg_.graphs.node_count();
    window_ = 1.0 + cfg_.tau;
    if (cfg_.weighted_prc) inner_b0_ = inhibitory_end(cfg_.prc);
    osc_.resize(n_);
    std::uniform_real_distribution<double> freq_dist(1.0 - cfg_.freq_error, 1.0 + cfg_.freq_error);
    for (int i = 0; i < n_; ++i) {
      osc_[i].freq = cfg_.freq_error > 0 ? freq_dist(rng_) : 1.0;
      osc_[i].ref_phase = cfg_.init_phases[i];
      push_intrinsic_fire(i, 0.0);
    }
  }

  Trace run() {
    const double sample_dt = cfg_.sample_interval > 0 ? cfg_.sample_interval : window_;
    double next_sample = 0.0;
    double next_boundary = 0.0;
    double end_time = cfg_.horizon;
    bool stopped_early = false;

    const double inf = std::numeric_limits<double>::infinity();
    while (true) {
      double t_ev = peek_event_time();
      // Boundaries and samples are observations at T^-: they take precedence
      // over events tied at the same timestamp.  Events at or past the
      // horizon are never processed.
      double tb = next_boundary <= cfg_.horizon + kTieTol ? next_boundary : inf;
      double ts = next_sample <= cfg_.horizon + kTieTol ? next_sample : inf;
      double te = t_ev < cfg_.horizon - kTieTol ? t_ev : inf;
      if (tb == inf && ts == inf && te == inf) break;

      if (tb <= ts + kTieTol && tb <= te + kTieTol) {
        double rho = current_range(next_boundary);
        trace_.window_ranges.emplace_back(next_boundary, rho);
        if (handle_convergence_at_boundary(next_boundary, rho)) {
          end_time = next_boundary;
          stopped_early = true;
          break;
        }
        next_boundary += window_;
      } else if (ts <= te + kTieTol) {
        trace_.range_series.emplace_back(next_sample, current_range(next_sample));
        next_sample += sample_dt;
      } else {
        process_batch(te);
      }
    }

    finalize(end_time, stopped_early);
    return std::move(trace_);
  }

 private:
  void validate() const {
    if (!(cfg_.tau > 0.0 && cfg_.tau < 0.5)) throw ConfigError("tau must be in (0, 0.5)");
    if (!(cfg_.horizon > 0.0)) throw ConfigError("horizon must be > 0");
    if (!(cfg_.conv_tolerance > 0.0)) throw ConfigError("conv_tolerance must be > 0");
    if (cfg_.freq_error < 0 || cfg_.freq_error >= 1) throw ConfigError("freq_error must be in [0, 1)");
    if (cfg_.delay_jitter < 0 || cfg_.delay_jitter >= 1) throw ConfigError("delay_jitter must be in [0, 1)");
    if (cfg_.quiescent < 0) throw ConfigError("quiescent must be >= 0");
    if (cfg_.graphs.node_count() < 1) throw ConfigError("graph must have at least one node");
    if (static_cast<int>(cfg_.init_phases.size()) != cfg_.graphs.node_count())
      throw ConfigError("init_phases length must equal the node count");
    for (double p : cfg_.init_phases)
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("initial phases must lie in [0, 1]");
  }

  std::size_t window_of(double t) const {
    double w = std::floor(t / window_ + kTieTol);
    return w <= 0 ? 0 : static_cast<std::size_t>(w);
  }

  void push_intrinsic_fire(int i, double now) {
    double t_fire = now + (1.0 - osc_[i].ref_phase) / osc_[i].freq;
    heap_.push(Ev{t_fire, EvKind::Fire, i, -1, 0.0, 1.0, osc_[i].gen, seq_++});
  }

  double peek_event_time() {
    while (!heap_.empty()) {
      const Ev& e = heap_.top();
      if (e.kind == EvKind::Fire && e.gen != osc_[e.node].gen) {
        heap_.pop();
        continue;
      }
      return e.t;
    }
    return std::numeric_limits<double>::infinity();
  }

  double current_range(double t) const {
    std::vector<double> ph(n_);
    for (int i = 0; i < n_; ++i) ph[i] = mod1(std::min(osc_[i].phase_at(t), 1.0));
    return circular_range(std::move(ph));
  }

  // Returns true when convergence is confirmed and the run should stop.
  bool handle_convergence_at_boundary(double t, double rho) {
    if (trace_.converged_at) return false;
    if (candidate_) {
      if (rho >= cfg_.conv_tolerance) {
        candidate_.reset();
      } else if (t >= *candidate_ + window_ - kTieTol) {
        trace_.converged_at = *candidate_;
        return cfg_.stop_on_convergence;
      }
      return false;
    }
    if (rho < cfg_.conv_tolerance) candidate_ = t;
    return false;
  }

  void process_batch(double t) {
    std::vector<Ev> pending;
    while (!heap_.empty() && heap_.top().t <= t + kTieTol) {
      pending.push_back(heap_.top());
      heap_.pop();
    }
    const std::size_t guard = static_cast<std::size_t>(n_) * n_ + 2 * n_ + 16;
    std::size_t processed = 0;
    while (!pending.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, pending.size() - 1);
      std::size_t k = pick(rng_);
      Ev ev = pending[k];
      pending[k] = pending.back();
      pending.pop_back();
      if (ev.kind == EvKind::Fire) {
        if (ev.gen != kForcedGen && ev.gen != osc_[ev.node].gen) continue;  // stale
        do_fire(ev.node, t);
      } else {
        do_arrival(ev, t, pending);
      }
      ++trace_.events_processed;
      if (++processed > guard)
        throw ZenoGuard("more than n^2 same-instant events at t=" + std::to_string(t));
    }
    if (candidate_ && !trace_.converged_at && current_range(t) >= cfg_.conv_tolerance)
      candidate_.reset();
  }

  void do_fire(int i, double t) {
    OscState& st = osc_[i];
    if (st.last_fire_instant == t) return;  // at most one fire per timestamp
    st.ref_time = t;
    st.ref_phase = 0.0;
    st.last_fire_instant = t;
    ++st.gen;
    trace_.firings.emplace_back(t, i);
    const DirectedGraph& g = cfg_.graphs.at_window(window_of(t));
    for (auto idx : g.out_edges(i)) {
      const Edge& e = g.edge(idx);
      schedule_arrival(i, e.to, t, e.delay_scale, e.weight);
    }
    if (cfg_.self_loop_sim && !g.has_edge(i, i)) schedule_arrival(i, i, t, 1.0, 1.0);
    push_intrinsic_fire(i, t);
  }

  void schedule_arrival(int from, int to, double t, double delay_scale, double weight) {
    double jitter = 1.0;
    if (cfg_.delay_jitter > 0) {
      std::uniform_real_distribution<double> jd(1.0 - cfg_.delay_jitter, 1.0 + cfg_.delay_jitter);
      jitter = jd(rng_);
    }
    double delay = cfg_.tau * delay_scale * jitter;
    heap_.push(Ev{t + delay, EvKind::Arrival, to, from, t, weight, 0, seq_++});
  }

  void do_arrival(const Ev& ev, double t, std::vector<Ev>& pending) {
    if (cfg_.drop_pulses_on_switch && window_of(ev.emit) != window_of(t)) return;
    OscState& st = osc_[ev.node];
    if (st.quiescent_until > t) return;  // signal ignored
    double phi = std::min(st.phase_at(t), std::nextafter(1.0, 0.0));
    double f = effective_prc(phi, ev.weight);
    double candidate = phi + f;
    if (cfg_.quiescent > 0) st.quiescent_until = t + cfg_.quiescent;
    if (candidate >= 1.0 - kPhaseTol) {
      // Forced fire: joins the random sequential ordering at this timestamp.
      st.ref_time = t;
      st.ref_phase = 1.0;
      ++st.gen;
      pending.push_back(Ev{t, EvKind::Fire, ev.node, -1, 0.0, 1.0, kForcedGen, seq_++});
      return;
    }
    st.ref_time = t;
    st.ref_phase = std::max(candidate, 0.0);
    ++st.gen;
    push_intrinsic_fire(ev.node, t);
  }

  double effective_prc(double phi, double w) const {
    if (!cfg_.weighted_prc) return eval_prc(cfg_.prc, phi);
    if (phi <= w + kPhaseTol) return -phi;
    double inner = eval_prc(cfg_.prc, phi);
    if (inner_b0_ && phi <= *inner_b0_ + kPhaseTol) return std::max(inner, -w);
    return inner;
  }

  void finalize(double end_time, bool stopped_early) {
    (void)stopped_early;
    trace_.end_time = end_time;
    trace_.windows_used = static_cast<int>(std::floor(end_time / window_ + kTieTol));
    trace_.final_phases_raw.resize(n_);
    trace_.final_phases.resize(n_);
    for (int i = 0; i < n_; ++i) {
      double p = std::min(osc_[i].phase_at(end_time), 1.0);
      trace_.final_phases_raw[i] = p;
      trace_.final_phases[i] = mod1(p);
    }
    // A single oscillator is synchronized by convention.
    if (n_ == 1 && !trace_.converged_at) trace_.converged_at = 0.0;
  }

  static constexpr std::uint64_t kForcedGen = ~std::uint64_t{0};

  SimConfig cfg_;
  std::mt19937_64 rng_;
  int n_ = 0;
  double window_ = 0.0;
  std::vector<OscState> osc_;
  std::priority_queue<Ev, std::vector<Ev>, EvLater> heap_;
  std::uint64_t seq_ = 0;
  Trace trace_;
  std::optional<double> candidate_;
  std::optional<double> inner_b0_;
};

}  // namespace engine_detail

inline Trace simulate(const SimConfig& config) {
  return engine_detail::Simulation(config).run();
}

struct WindowMapResult {
  std::vector<double> shifted_input;  // window frame, max phase = 1
  std::vector<double> phases;         // phases after exactly 1+tau
};

// Runs exactly one 1+tau window from the given phases with no signals in
// flight, after rotating time so the largest phase is about to fire.
inline WindowMapResult run_window_map(const std::vector<Phase>& phases, const DirectedGraph& g,
                                      const PrcSpec& prc, double tau, std::uint64_t seed = 0) {
  if (phases.empty()) throw ConfigError("run_window_map: empty phase vector");
  double shift = 1.0 - *std::max_element(phases.begin(), phases.end());
  WindowMapResult res;
  res.shifted_input.reserve(phases.size());
  for (double p : phases) res.shifted_input.push_back(p + shift);

  SimConfig cfg;
  cfg.prc = prc;
  cfg.graphs = GraphSequence(g);
  cfg.tau = tau;
  cfg.init_phases = res.shifted_input;
  cfg.seed = seed;
  cfg.horizon = 1.0 + tau;
  cfg.sample_interval = 2.0 * (1.0 + tau);  // no interior samples
  cfg.stop_on_convergence = false;
  Trace tr = simulate(cfg);
  res.phases = tr.final_phases_raw;
  return res;
}

}  // namespace pco
