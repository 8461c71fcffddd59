#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pco/analysis.hpp"
#include "pco/engine.hpp"
#include "pco/errors.hpp"
#include "pco/graph.hpp"
#include "pco/graph_io.hpp"
#include "pco/prc.hpp"

namespace pco {

// A fully resolved experiment description.  Everything a command emits is a
// pure function of (spec, master_seed).
struct ExperimentSpec {
  std::string name = "experiment";
  SimConfig sim;                 // prc, graphs, tau, noise, variant, sampling
  InitSampler init;              // used unless explicit phases are given
  std::optional<std::vector<Phase>> init_phases;
  std::uint64_t master_seed = 0;
  int trials = 100;
  int threads = 1;
  std::filesystem::path output_dir = "out";
  nlohmann::json resolved;       // config echo for manifests
};

namespace config_detail {

template <typename T>
T get_or(const nlohmann::json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError("field '" + key + "' has the wrong type");
  }
}

inline PrcSpec parse_prc(const nlohmann::json& j, double tau) {
  if (j.contains("vertices")) {
    std::vector<std::pair<double, double>> verts;
    for (const auto& v : j.at("vertices")) {
      if (!v.is_array() || v.size() != 2) throw ParseError("prc.vertices entries must be [phase, f] pairs");
      verts.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    return PrcSpec{PiecewiseLinear{PiecewiseLinearCurve::from_vertices(verts)}};
  }
  std::string name = get_or<std::string>(j, "name", "");
  if (name.empty()) throw ParseError("prc requires either 'name' or 'vertices'");
  double b0 = get_or<double>(j, "b0", 0.5);
  PrcSpec prc = prc_preset(name, tau, b0);
  if (j.contains("ms_b") || j.contains("ms_eps")) {
    if (name != "ms") throw ParseError("ms_b/ms_eps only apply to prc.name == 'ms'");
    prc = PrcSpec{MirolloStrogatz{get_or<double>(j, "ms_b", 3.0), get_or<double>(j, "ms_eps", 0.05)}};
  }
  return prc;
}

inline GraphSequence parse_graph(const nlohmann::json& j, std::uint64_t master_seed) {
  if (j.contains("file")) return GraphSequence(read_graph_file(j.at("file").get<std::string>()));
  if (j.contains("sequence_dir")) return read_sequence_dir(j.at("sequence_dir").get<std::string>());
  std::string gen = get_or<std::string>(j, "generator", "");
  if (gen.empty()) throw ParseError("graph requires 'generator', 'file' or 'sequence_dir'");
  nlohmann::json p = j.value("params", nlohmann::json::object());
  std::uint64_t seed = get_or<std::uint64_t>(p, "seed", derive_seed(master_seed, 0x67726170));
  if (gen == "complete") return GraphSequence(gen_complete(get_or<int>(p, "n", 3)));
  if (gen == "cycle")
    return GraphSequence(gen_cycle(get_or<int>(p, "n", 4), get_or<bool>(p, "directed", true)));
  if (gen == "path")
    return GraphSequence(gen_path(get_or<int>(p, "n", 3), get_or<bool>(p, "directed", false)));
  if (gen == "rgg")
    return GraphSequence(
        gen_random_geometric(get_or<int>(p, "n", 100), get_or<double>(p, "radius", 0.2), seed));
  if (gen == "binary-tree-triangle")
    return GraphSequence(gen_binary_tree_triangle(get_or<int>(p, "depth", 3)));
  if (gen == "grid-failures")
    return gen_grid_with_failures(get_or<int>(p, "w", 3), get_or<int>(p, "h", 3),
                                  get_or<int>(p, "fail", 1), seed,
                                  get_or<int>(p, "windows", 64));
  if (gen == "random-k-in")
    return GraphSequence(gen_random_k_in(get_or<int>(p, "n", 10), get_or<int>(p, "k", 2), seed));
  throw ParseError("unknown graph generator '" + gen +
                   "'; available: complete, cycle, path, rgg, binary-tree-triangle, "
                   "grid-failures, random-k-in");
}

}  // namespace config_detail

inline ExperimentSpec parse_config(const nlohmann::json& doc) {
  using config_detail::get_or;
  ExperimentSpec spec;
  spec.name = get_or<std::string>(doc, "name", "experiment");
  spec.master_seed = get_or<std::uint64_t>(doc, "seed", 0);
  spec.trials = get_or<int>(doc, "trials", 100);
  spec.threads = get_or<int>(doc, "threads", 1);
  spec.output_dir = get_or<std::string>(doc, "output_dir", "out");

  SimConfig& sim = spec.sim;
  sim.tau = get_or<double>(doc, "tau", 0.1);
  if (!(sim.tau > 0.0 && sim.tau < 0.5)) throw ValidationError("tau must satisfy 0 < tau < 0.5");
  sim.horizon = get_or<double>(doc, "horizon", 100.0);
  if (!(sim.horizon > 0)) throw ValidationError("horizon must be > 0");
  sim.seed = spec.master_seed;
  sim.conv_tolerance = get_or<double>(doc, "tolerance", 1e-9);
  if (!(sim.conv_tolerance > 0)) throw ValidationError("tolerance must be > 0");

  sim.prc = config_detail::parse_prc(doc.value("prc", nlohmann::json{{"name", "s2-default"}}), sim.tau);
  if (auto b0 = inhibitory_end(sim.prc); b0 && *b0 <= sim.tau)
    throw ValidationError("prc.b0 must exceed tau");
  sim.graphs = config_detail::parse_graph(doc.value("graph", nlohmann::json{{"generator", "complete"}}),
                                          spec.master_seed);

  nlohmann::json noise = doc.value("noise", nlohmann::json::object());
  sim.freq_error = get_or<double>(noise, "freq_error", 0.0);
  sim.delay_jitter = get_or<double>(noise, "delay_jitter", 0.0);
  if (sim.freq_error < 0 || sim.freq_error >= 1) throw ValidationError("noise.freq_error must be in [0, 1)");
  if (sim.delay_jitter < 0 || sim.delay_jitter >= 1) throw ValidationError("noise.delay_jitter must be in [0, 1)");

  nlohmann::json variant = doc.value("variant", nlohmann::json::object());
  sim.quiescent = get_or<double>(variant, "quiescent", 0.0);
  if (sim.quiescent < 0) throw ValidationError("variant.quiescent must be >= 0");
  sim.self_loop_sim = get_or<bool>(variant, "self_loop", false);
  sim.weighted_prc = get_or<bool>(variant, "weighted", false);
  sim.drop_pulses_on_switch = get_or<bool>(variant, "drop_on_switch", false);

  nlohmann::json sampling = doc.value("sampling", nlohmann::json::object());
  sim.sample_interval = get_or<double>(sampling, "interval", 0.0);
  if (sim.sample_interval < 0) throw ValidationError("sampling.interval must be >= 0");

  nlohmann::json init = doc.value("init", nlohmann::json::object());
  std::string mode = get_or<std::string>(init, "mode", "uniform");
  if (mode == "uniform") {
    spec.init.mode = InitSampler::Mode::Uniform;
  } else if (mode == "window") {
    spec.init.mode = InitSampler::Mode::Window;
    spec.init.width = get_or<double>(init, "width", 0.3);
    if (!(spec.init.width > 0 && spec.init.width < 1)) throw ValidationError("init.width must be in (0, 1)");
  } else if (mode == "list") {
    std::vector<Phase> phases;
    for (const auto& p : init.at("phases")) phases.push_back(p.get<double>());
    if (static_cast<int>(phases.size()) != sim.graphs.node_count())
      throw ValidationError("init.phases length must equal the node count");
    for (double p : phases)
      if (!(p >= 0 && p < 1)) throw ValidationError("init.phases entries must lie in [0, 1)");
    spec.init_phases = std::move(phases);
  } else {
    throw ValidationError("init.mode must be 'uniform', 'window' or 'list'");
  }

  spec.resolved = doc;
  spec.resolved["name"] = spec.name;
  spec.resolved["seed"] = spec.master_seed;
  spec.resolved["tau"] = sim.tau;
  spec.resolved["horizon"] = sim.horizon;
  spec.resolved["tolerance"] = sim.conv_tolerance;
  spec.resolved["trials"] = spec.trials;
  spec.resolved["threads"] = spec.threads;
  return spec;
}

inline ExperimentSpec parse_config_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

inline ExperimentSpec parse_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

}  // namespace pco
