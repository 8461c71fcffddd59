#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "pco/graph.hpp"

namespace pco {

// Edge-list exchange format:
//   pco-graph v1 n=<nodes>
//   <from> <to> <weight> <delay_scale>

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_graph(std::ostream& os, const DirectedGraph& g) {
  os << "pco-graph v1 n=" << g.node_count() << "\n";
  for (const auto& e : g.edges())
    os << e.from << " " << e.to << " " << format_double(e.weight) << " "
       << format_double(e.delay_scale) << "\n";
}

inline void write_graph_file(const std::filesystem::path& path, const DirectedGraph& g) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open graph file for writing: " + path.string());
  write_graph(os, g);
}

inline DirectedGraph read_graph(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw ParseError("empty graph file");
  int n = -1;
  if (std::sscanf(header.c_str(), "pco-graph v1 n=%d", &n) != 1 || n < 0)
    throw ParseError("bad graph header, expected 'pco-graph v1 n=<nodes>': " + header);
  DirectedGraph g(n);
  std::string line;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    Edge e;
    if (!(ls >> e.from >> e.to)) throw ParseError("bad edge at line " + std::to_string(lineno));
    if (!(ls >> e.weight)) e.weight = 1.0;
    if (!(ls >> e.delay_scale)) e.delay_scale = 1.0;
    g.add_edge(e);
  }
  return g;
}

inline DirectedGraph read_graph_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open graph file: " + path.string());
  return read_graph(is);
}

// A sequence is a directory of numbered edge-list files plus manifest.json.
inline void write_sequence_dir(const std::filesystem::path& dir, const GraphSequence& seq) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["format"] = "pco-graph-sequence v1";
  manifest["n"] = seq.node_count();
  manifest["policy"] = seq.policy() == SequencePolicy::Static ? "static" : "cyclic";
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "graph_%04zu.txt", i);
    write_graph_file(dir / name, seq.graphs()[i]);
    files.push_back(name);
  }
  manifest["files"] = files;
  std::ofstream os(dir / "manifest.json");
  os << manifest.dump(2) << "\n";
}

inline GraphSequence read_sequence_dir(const std::filesystem::path& dir) {
  std::ifstream is(dir / "manifest.json");
  if (!is) throw ConfigError("cannot open sequence manifest: " + (dir / "manifest.json").string());
  nlohmann::json manifest = nlohmann::json::parse(is);
  std::vector<DirectedGraph> graphs;
  for (const auto& f : manifest.at("files"))
    graphs.push_back(read_graph_file(dir / f.get<std::string>()));
  SequencePolicy policy = manifest.value("policy", "static") == std::string("cyclic")
                              ? SequencePolicy::Cyclic
                              : SequencePolicy::Static;
  return GraphSequence(std::move(graphs), policy);
}

}  // namespace pco
