#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pco/errors.hpp"

namespace pco {

struct Edge {
  int from;
  int to;
  double weight = 1.0;
  double delay_scale = 1.0;
};

class DirectedGraph {
 public:
  DirectedGraph() = default;
  explicit DirectedGraph(int n) : n_(n), succ_(n), pred_(n) {}

  int node_count() const { return n_; }

  void add_edge(Edge e) {
    if (e.from < 0 || e.from >= n_ || e.to < 0 || e.to >= n_)
      throw ValidationError("edge endpoint out of range");
    if (e.weight <= 0.0) throw ValidationError("edge weights must be > 0");
    for (const auto& idx : succ_[e.from])
      if (edges_[idx].to == e.to) throw ValidationError("duplicate edge");
    succ_[e.from].push_back(edges_.size());
    pred_[e.to].push_back(edges_.size());
    edges_.push_back(e);
  }

  void add_edge(int from, int to, double weight = 1.0, double delay_scale = 1.0) {
    add_edge(Edge{from, to, weight, delay_scale});
  }

  void add_undirected(int a, int b, double weight = 1.0, double delay_scale = 1.0) {
    add_edge(a, b, weight, delay_scale);
    add_edge(b, a, weight, delay_scale);
  }

  bool has_edge(int from, int to) const {
    for (auto idx : succ_[from])
      if (edges_[idx].to == to) return true;
    return false;
  }

  const std::vector<Edge>& edges() const { return edges_; }

  // Out-edges of i, by index into edges().
  const std::vector<std::size_t>& out_edges(int i) const { return succ_[i]; }
  const std::vector<std::size_t>& in_edges(int i) const { return pred_[i]; }
  const Edge& edge(std::size_t idx) const { return edges_[idx]; }

  std::vector<int> successors(int i) const {
    std::vector<int> s;
    for (auto idx : succ_[i]) s.push_back(edges_[idx].to);
    return s;
  }
  std::vector<int> predecessors(int i) const {
    std::vector<int> p;
    for (auto idx : pred_[i]) p.push_back(edges_[idx].from);
    return p;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::vector<std::size_t>> pred_;
};

struct GraphStats {
  int min_indegree = 0;
  int max_indegree = 0;
  bool has_isolated = false;
  bool strongly_connected = false;
};

namespace graph_detail {

inline bool reachable_all(const DirectedGraph& g, int start, bool reversed) {
  int n = g.node_count();
  std::vector<char> seen(n, 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  int count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : reversed ? g.predecessors(u) : g.successors(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n;
}

}  // namespace graph_detail

inline bool strongly_connected(const DirectedGraph& g) {
  if (g.node_count() == 0) return false;
  if (g.node_count() == 1) return true;
  return graph_detail::reachable_all(g, 0, false) && graph_detail::reachable_all(g, 0, true);
}

inline GraphStats graph_stats(const DirectedGraph& g) {
  GraphStats st;
  int n = g.node_count();
  st.min_indegree = n == 0 ? 0 : std::numeric_limits<int>::max();
  for (int i = 0; i < n; ++i) {
    int in = static_cast<int>(g.in_edges(i).size());
    int out = static_cast<int>(g.out_edges(i).size());
    st.min_indegree = std::min(st.min_indegree, in);
    st.max_indegree = std::max(st.max_indegree, in);
    if (in == 0 && out == 0) st.has_isolated = true;
  }
  st.strongly_connected = strongly_connected(g);
  return st;
}

// Period of a strongly connected digraph: gcd over edges (u,v) of
// level[u] + 1 - level[v] for any BFS level assignment.  Aperiodic iff 1.
inline bool is_aperiodic(const DirectedGraph& g) {
  if (!strongly_connected(g)) throw NotStronglyConnected("is_aperiodic requires a strongly connected graph");
  int n = g.node_count();
  if (n == 1) return !g.successors(0).empty();  // lone node: aperiodic iff self-loop
  std::vector<int> level(n, -1);
  std::queue<int> q;
  level[0] = 0;
  q.push(0);
  long long period = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : g.successors(u)) {
      if (level[v] == -1) {
        level[v] = level[u] + 1;
        q.push(v);
      } else {
        period = std::gcd(period, static_cast<long long>(level[u] + 1 - level[v]));
      }
    }
  }
  return period == 1;
}

// ---------------------------------------------------------------------------
// Time-varying sequences: one graph per window of length 1+tau.
// ---------------------------------------------------------------------------

enum class SequencePolicy { Static, Cyclic };

class GraphSequence {
 public:
  GraphSequence() = default;
  explicit GraphSequence(DirectedGraph g)
      : graphs_{std::move(g)}, policy_(SequencePolicy::Static) {}
  GraphSequence(std::vector<DirectedGraph> graphs, SequencePolicy policy)
      : graphs_(std::move(graphs)), policy_(policy) {
    if (graphs_.empty()) throw ValidationError("graph sequence must be nonempty");
    for (const auto& g : graphs_)
      if (g.node_count() != graphs_.front().node_count())
        throw ValidationError("all graphs in a sequence must share the node count");
  }

  int node_count() const { return graphs_.empty() ? 0 : graphs_.front().node_count(); }
  std::size_t size() const { return graphs_.size(); }
  SequencePolicy policy() const { return policy_; }
  bool is_static() const { return policy_ == SequencePolicy::Static || graphs_.size() == 1; }

  const DirectedGraph& at_window(std::size_t window) const {
    if (is_static()) return graphs_.front();
    return graphs_[window % graphs_.size()];
  }
  const std::vector<DirectedGraph>& graphs() const { return graphs_; }

 private:
  std::vector<DirectedGraph> graphs_;
  SequencePolicy policy_ = SequencePolicy::Static;
};

// Smallest d <= d_max such that spreading successor sets through windows
// start_index, start_index+1, ... covers V from every start node.
inline std::optional<int> coverage_depth(const GraphSequence& seq, std::size_t start_index,
                                         int d_max) {
  if (d_max < 1) throw PreconditionViolated("coverage_depth requires d_max >= 1");
  int n = seq.node_count();
  // sets[v] = iterated successor set of {v}
  std::vector<std::vector<char>> sets(n, std::vector<char>(n, 0));
  for (int v = 0; v < n; ++v) sets[v][v] = 1;
  for (int d = 1; d <= d_max; ++d) {
    const DirectedGraph& g = seq.at_window(start_index + d - 1);
    bool all_full = true;
    for (int v = 0; v < n; ++v) {
      std::vector<char> next(n, 0);
      for (int u = 0; u < n; ++u)
        if (sets[v][u])
          for (int w : g.successors(u)) next[w] = 1;
      sets[v] = std::move(next);
      if (std::count(sets[v].begin(), sets[v].end(), char(1)) != n) all_full = false;
    }
    if (all_full) return d;
  }
  return std::nullopt;
}

// Sufficient condition for the weighted extension: per-node in-weights sum
// above tau.
inline bool weighted_condition(const DirectedGraph& g, double tau) {
  for (int i = 0; i < g.node_count(); ++i) {
    if (g.in_edges(i).empty()) continue;
    double sum = 0;
    for (auto idx : g.in_edges(i)) sum += g.edge(idx).weight;
    if (sum <= tau) return false;
  }
  return true;
}

inline DirectedGraph add_self_loops(const DirectedGraph& g) {
  DirectedGraph out = g;
  for (int i = 0; i < g.node_count(); ++i)
    if (!out.has_edge(i, i)) out.add_edge(i, i, 1.0, 1.0);
  return out;
}

// ---------------------------------------------------------------------------
// Generators.  All are deterministic functions of their seed.
// ---------------------------------------------------------------------------

inline DirectedGraph gen_complete(int n) {
  DirectedGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) g.add_edge(i, j);
  return g;
}

inline DirectedGraph gen_cycle(int n, bool directed = true) {
  DirectedGraph g(n);
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    if (directed)
      g.add_edge(i, j);
    else
      g.add_undirected(i, j);
  }
  return g;
}

inline DirectedGraph gen_path(int n, bool directed = false) {
  DirectedGraph g(n);
  for (int i = 0; i + 1 < n; ++i) {
    if (directed)
      g.add_edge(i, i + 1);
    else
      g.add_undirected(i, i + 1);
  }
  return g;
}

// Points uniform in the unit square; both directions of an edge when within
// `radius`.  Redraws until connected.
inline DirectedGraph gen_random_geometric(int n, double radius, std::uint64_t seed,
                                          int max_retries = 200) {
  if (n < 1) throw ValidationError("gen_random_geometric requires n >= 1");
  if (!(radius > 0.0 && radius <= std::sqrt(2.0) + 1e-15))
    throw ValidationError("gen_random_geometric requires radius in (0, sqrt(2)]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::vector<std::pair<double, double>> pts(n);
    for (auto& p : pts) {
      p.first = unif(rng);
      p.second = unif(rng);
    }
    DirectedGraph g(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double dx = pts[i].first - pts[j].first, dy = pts[i].second - pts[j].second;
        if (dx * dx + dy * dy <= radius * radius) g.add_undirected(i, j);
      }
    if (n == 1 || strongly_connected(g)) return g;
  }
  throw Unconnectable("gen_random_geometric: retry budget exhausted without a connected draw");
}

// Complete binary tree with `depth` levels below the root, bidirectional
// edges, plus a chord between the two children of the root's left child
// (between the two leaves when depth == 1), forming the single triangle.
inline DirectedGraph gen_binary_tree_triangle(int depth) {
  if (depth < 1) throw ValidationError("gen_binary_tree_triangle requires depth >= 1");
  int n = (1 << (depth + 1)) - 1;
  DirectedGraph g(n);
  for (int i = 1; i < n; ++i) g.add_undirected((i - 1) / 2, i);
  if (depth == 1)
    g.add_undirected(1, 2);
  else
    g.add_undirected(3, 4);
  return g;
}

// 4-neighbor grid with `fail_per_window` undirected edges removed per window;
// draws that would isolate a node are rejected.
inline GraphSequence gen_grid_with_failures(int w, int h, int fail_per_window,
                                            std::uint64_t seed, int windows) {
  if (w * h < 2) throw ValidationError("grid needs at least 2 nodes");
  if (windows < 1) throw ValidationError("gen_grid_with_failures requires windows >= 1");
  auto node = [w](int x, int y) { return y * w + x; };
  std::vector<std::pair<int, int>> undirected;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (x + 1 < w) undirected.emplace_back(node(x, y), node(x + 1, y));
      if (y + 1 < h) undirected.emplace_back(node(x, y), node(x, y + 1));
    }
  if (fail_per_window >= static_cast<int>(undirected.size()))
    throw ValidationError("fail_per_window must leave some edges");
  std::mt19937_64 rng(seed);
  std::vector<DirectedGraph> graphs;
  for (int k = 0; k < windows; ++k) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > 1000) throw Unconnectable("gen_grid_with_failures: cannot avoid isolating a node");
      std::vector<int> idx(undirected.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::set<int> removed;
      for (int f = 0; f < fail_per_window; ++f) {
        std::uniform_int_distribution<int> pick(0, static_cast<int>(undirected.size()) - 1);
        int e;
        do {
          e = pick(rng);
        } while (removed.count(e));
        removed.insert(e);
      }
      DirectedGraph g(w * h);
      for (std::size_t e = 0; e < undirected.size(); ++e)
        if (!removed.count(static_cast<int>(e)))
          g.add_undirected(undirected[e].first, undirected[e].second);
      bool isolated = false;
      for (int i = 0; i < w * h; ++i)
        if (g.out_edges(i).empty() && g.in_edges(i).empty()) isolated = true;
      if (!isolated) {
        graphs.push_back(std::move(g));
        break;
      }
    }
  }
  return GraphSequence(std::move(graphs), SequencePolicy::Cyclic);
}

// Each node draws k distinct random in-neighbors.
inline DirectedGraph gen_random_k_in(int n, int k, std::uint64_t seed) {
  if (k < 1 || k > n - 1) throw ValidationError("gen_random_k_in requires 1 <= k <= n-1");
  std::mt19937_64 rng(seed);
  DirectedGraph g(n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> pool;
    for (int j = 0; j < n; ++j)
      if (j != i) pool.push_back(j);
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int c = 0; c < k; ++c) g.add_edge(pool[c], i);
  }
  return g;
}

}  // namespace pco
