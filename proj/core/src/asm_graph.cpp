#include "pathrules/asm_graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>

#include "pathrules/error.hpp"
#include "pathrules/fsa_io.hpp"
#include "pathrules/text.hpp"

namespace pathrules {
namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

// Edge-count distance from every node to `end`, ignoring use limits. This is
// an admissible, consistent heuristic for the best-first search below.
std::vector<std::size_t> distance_to_end(const AsmGraph& g) {
  std::vector<std::vector<NodeId>> incoming(g.node_count);
  for (const auto& e : g.edges) incoming[e.to].push_back(e.from);
  std::vector<std::size_t> dist(g.node_count, kUnreached);
  std::deque<NodeId> queue{g.end};
  dist[g.end] = 0;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId u : incoming[v]) {
      if (dist[u] == kUnreached) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

struct Partial {
  std::size_t bound;                    // length so far + distance to end
  std::vector<SymbolIndex> key;         // word in alphabet order
  std::vector<std::size_t> edges;
  NodeId node;
  bool complete;

  auto order() const { return std::tie(bound, key, complete, edges); }
  bool operator>(const Partial& other) const { return order() > other.order(); }
};

}  // namespace

void AsmGraph::validate() const {
  if (start >= node_count || end >= node_count) throw InvalidArgument("asm: start/end node undeclared");
  for (const auto& e : edges) {
    if (e.from >= node_count || e.to >= node_count) throw InvalidArgument("asm: edge endpoint undeclared");
  }
}

std::vector<AsmPath> k_shortest_paths(const AsmGraph& g, std::size_t k, const Alphabet& order,
                                      std::size_t max_edge_uses) {
  g.validate();
  if (k < 1) throw InvalidArgument("trace: k must be >= 1");
  if (max_edge_uses < 1) throw InvalidArgument("trace: max_edge_uses must be >= 1");
  const auto dist = distance_to_end(g);
  if (dist[g.start] == kUnreached) throw InfeasibleRequest("trace: end node is unreachable from start");

  std::vector<std::vector<std::size_t>> outgoing(g.node_count);
  for (std::size_t i = 0; i < g.edges.size(); ++i) outgoing[g.edges[i].from].push_back(i);
  std::vector<SymbolIndex> edge_symbol(g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) edge_symbol[i] = order.index(g.edges[i].symbol);

  // Best-first search keyed by (bound, word). A complete walk is only
  // reported once it is the minimum of the frontier, so reports come out in
  // (length, word) order.
  std::priority_queue<Partial, std::vector<Partial>, std::greater<>> frontier;
  frontier.push({dist[g.start], {}, {}, g.start, false});
  std::vector<AsmPath> out;
  while (!frontier.empty() && out.size() < k) {
    Partial p = frontier.top();
    frontier.pop();
    if (p.complete) {
      out.push_back({p.edges, order.decode(p.key)});
      continue;
    }
    if (p.node == g.end && !p.edges.empty()) {
      Partial done = p;
      done.complete = true;
      frontier.push(std::move(done));
    }
    for (std::size_t ei : outgoing[p.node]) {
      const auto& e = g.edges[ei];
      if (dist[e.to] == kUnreached) continue;
      if (static_cast<std::size_t>(std::count(p.edges.begin(), p.edges.end(), ei)) >= max_edge_uses) continue;
      Partial child{p.edges.size() + 1 + dist[e.to], p.key, p.edges, e.to, false};
      child.key.push_back(edge_symbol[ei]);
      child.edges.push_back(ei);
      frontier.push(std::move(child));
    }
  }
  return out;
}

Dataset trace_asm(const AsmGraph& g, std::size_t k, const Fsa& labeler) {
  Dataset out{labeler.alphabet(), {}, 0};
  std::set<std::string> seen;
  for (auto& path : k_shortest_paths(g, k, labeler.alphabet())) {
    if (!seen.insert(path.word).second) continue;
    const bool label = labeler.accepts(path.word);
    out.examples.push_back({std::move(path.word), label});
  }
  return out;
}

bool spells_walk(const AsmGraph& g, std::string_view word) {
  std::set<NodeId> current{g.start};
  for (char c : word) {
    std::set<NodeId> next;
    for (const auto& e : g.edges) {
      if (e.symbol == c && current.count(e.from)) next.insert(e.to);
    }
    current.swap(next);
  }
  return current.count(g.end) > 0;
}

std::string write_asm(const AsmGraph& g) {
  std::ostringstream out;
  out << "asm v1\nstart: " << g.start << "\nend: " << g.end << "\n";
  for (const auto& e : g.edges) out << e.from << ' ' << e.to << ' ' << e.symbol << "\n";
  return out.str();
}

AsmGraph read_asm(std::string_view content) {
  auto lines = text::content_lines(content);
  if (lines.empty() || lines.front().text != "asm v1") throw ParseError("asm: missing 'asm v1' header");
  AsmGraph g;
  bool have_start = false;
  bool have_end = false;
  NodeId max_id = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [number, line] = lines[i];
    if (auto v = text::field(line, "start")) {
      g.start = text::parse_uint<NodeId>(*v, number);
      have_start = true;
      max_id = std::max(max_id, g.start);
    } else if (auto v = text::field(line, "end")) {
      g.end = text::parse_uint<NodeId>(*v, number);
      have_end = true;
      max_id = std::max(max_id, g.end);
    } else {
      auto tokens = text::split(line);
      if (tokens.size() != 3 || tokens[2].size() != 1) {
        throw ParseError("asm: line " + std::to_string(number) + ": expected 'from to symbol'");
      }
      AsmGraph::Edge e{text::parse_uint<NodeId>(tokens[0], number), text::parse_uint<NodeId>(tokens[1], number),
                       tokens[2][0]};
      max_id = std::max({max_id, e.from, e.to});
      g.edges.push_back(e);
    }
  }
  if (!have_start || !have_end) throw ParseError("asm: missing start or end line");
  g.node_count = static_cast<std::size_t>(max_id) + 1;
  return g;
}

AsmGraph load_asm(const std::filesystem::path& path) { return read_asm(read_text_file(path)); }

}  // namespace pathrules
