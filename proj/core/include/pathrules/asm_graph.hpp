#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pathrules/dataset.hpp"
#include "pathrules/fsa.hpp"

namespace pathrules {

using NodeId = std::uint32_t;

/// Abstract state machine of a program: a labeled directed multigraph whose
/// start-to-end walks spell path strings. Node ids are dense 0..n-1.
struct AsmGraph {
  struct Edge {
    NodeId from;
    NodeId to;
    char symbol;
  };

  std::size_t node_count = 0;
  std::vector<Edge> edges;
  NodeId start = 0;
  NodeId end = 0;

  /// Throws InvalidArgument when start/end or an edge endpoint is undeclared.
  void validate() const;
};

/// One enumerated start->end walk.
struct AsmPath {
  std::vector<std::size_t> edges;  // indices into AsmGraph::edges
  std::string word;
};

/// Up to k shortest start->end walks ordered by edge count, ties broken by
/// the word in alphabet order, then by edge indices. A walk may use each
/// edge at most `max_edge_uses` times; empty walks are skipped.
/// Throws InfeasibleRequest when `end` is unreachable.
std::vector<AsmPath> k_shortest_paths(const AsmGraph& asm_graph, std::size_t k, const Alphabet& order,
                                      std::size_t max_edge_uses = 2);

/// Enumerates k shortest walks, labels each word with `labeler` and drops
/// duplicate words (first occurrence wins).
Dataset trace_asm(const AsmGraph& asm_graph, std::size_t k, const Fsa& labeler);

/// True iff `word` is spelled by some start->end walk of the graph.
bool spells_walk(const AsmGraph& asm_graph, std::string_view word);

// ASM file: "asm v1", "start: n", "end: n", then "from to symbol" lines.
std::string write_asm(const AsmGraph& g);
AsmGraph read_asm(std::string_view text);
AsmGraph load_asm(const std::filesystem::path& path);

}  // namespace pathrules
