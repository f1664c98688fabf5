#include "pathrules/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace pathrules {
namespace {

std::vector<std::size_t> quantize_all(const TraceSet& traces, const QuantizerTree& q) {
  std::vector<std::size_t> state(traces.points.size());
  for (std::size_t i = 0; i < traces.points.size(); ++i) state[i] = q.quantize(traces.points[i]);
  return state;
}

std::vector<std::size_t> occupied_leaves(const QuantizerTree& q, const std::vector<KeyedPoint>& points) {
  std::set<std::size_t> leaves;
  for (const auto& p : points) leaves.insert(q.leaf_of(p.point));
  return {leaves.begin(), leaves.end()};
}

std::vector<KeyedPoint> victim_points(const TraceSet& traces, const std::vector<std::size_t>& state, const Ssm& ssm,
                                      std::size_t victim, OutcomeKey key) {
  std::vector<KeyedPoint> out;
  // A state whose own output is mixed is split by that output first.
  double cell_max = 0.0;
  for (std::size_t a = 0; a < ssm.input_count(); ++a) {
    cell_max = std::max(cell_max, ssm.cell_entropy(victim, static_cast<SymbolIndex>(a)));
  }
  if (ssm.landing_entropy(victim) > cell_max) {
    for (const auto& st : traces.steps) {
      if (state[st.to] == victim) out.push_back({traces.points[st.to], -1, st.output, 0});
    }
    for (const auto& [point, output] : traces.initial_points) {
      if (state[point] == victim) out.push_back({traces.points[point], -1, output, 0});
    }
    return out;
  }
  int conflict = -1;
  if (key == OutcomeKey::ConflictCell) {
    double best = -1.0;
    for (std::size_t a = 0; a < ssm.input_count(); ++a) {
      const double h = ssm.cell_entropy(victim, static_cast<SymbolIndex>(a));
      if (h > best) {
        best = h;
        conflict = static_cast<int>(a);
      }
    }
  }
  for (const auto& st : traces.steps) {
    if (state[st.from] != victim) continue;
    if (key == OutcomeKey::ConflictCell) {
      if (st.input != conflict) continue;
      out.push_back({traces.points[st.from], -1, st.output, state[st.to]});
    } else {
      out.push_back({traces.points[st.from], st.input, st.output, state[st.to]});
    }
  }
  return out;
}

// Swaps state ids 0 and `s` so that the state of the initial point comes
// first; the lowest-id tie rule of choose_initial_state then favours it.
void move_to_front(ExtractedMachine& m, std::size_t s) {
  if (s == 0) return;
  const std::size_t n = m.ssm.state_count();
  std::vector<std::size_t> perm(n);
  for (std::size_t q = 0; q < n; ++q) perm[q] = q == 0 ? s : q == s ? 0 : q;
  Ssm out(n, m.ssm.input_count());
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t a = 0; a < m.ssm.input_count(); ++a) {
      for (const auto& [o, c] : m.ssm.cell(q, static_cast<SymbolIndex>(a))) {
        out.add(perm[q], static_cast<SymbolIndex>(a), {perm[o.next], o.output}, c);
      }
    }
    for (bool b : {false, true}) {
      if (auto c = m.ssm.landings(q, b)) out.add_landing(perm[q], b, c);
    }
  }
  m.ssm = std::move(out);
  m.quantizer.relabel(perm, n);
}

}  // namespace

QuantizerTree split_quantizer(const QuantizerTree& quantizer, std::size_t victim,
                              const std::vector<KeyedPoint>& points) {
  if (victim >= quantizer.state_count()) throw InvalidArgument("split: victim state does not exist");
  const std::size_t dim = quantizer.dimension();
  std::map<std::tuple<int, bool, std::size_t>, std::pair<std::vector<double>, std::size_t>> groups;
  for (const auto& p : points) {
    auto& [sum, count] = groups[p.key()];
    if (sum.empty()) sum.assign(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) sum[k] += p.point[k];
    ++count;
  }
  std::vector<std::vector<double>> centroids;
  for (auto& [key, group] : groups) {
    auto& [sum, count] = group;
    for (auto& v : sum) v /= static_cast<double>(count);
    if (std::find(centroids.begin(), centroids.end(), sum) == centroids.end()) centroids.push_back(sum);
  }
  if (centroids.size() < 2) {
    throw Unsplittable("split: region of state " + std::to_string(victim) + " has a single outcome group");
  }
  std::vector<std::size_t> ids{victim};
  for (std::size_t i = 1; i < centroids.size(); ++i) ids.push_back(quantizer.state_count() + i - 1);
  QuantizerTree out = quantizer;
  out.split_by_centroids(victim, centroids, ids, occupied_leaves(quantizer, points));
  return out;
}

QuantizerTree split_quantizer_axis(const QuantizerTree& quantizer, std::size_t victim,
                                   const std::vector<KeyedPoint>& points) {
  if (victim >= quantizer.state_count()) throw InvalidArgument("split: victim state does not exist");
  const std::size_t dim = quantizer.dimension();
  if (points.size() < 2) throw Unsplittable("split: fewer than two points");
  std::size_t best_axis = 0;
  double best_var = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    double mean = 0.0;
    for (const auto& p : points) mean += p.point[k];
    mean /= static_cast<double>(points.size());
    double var = 0.0;
    for (const auto& p : points) var += (p.point[k] - mean) * (p.point[k] - mean);
    if (var > best_var) {
      best_var = var;
      best_axis = k;
    }
  }
  if (best_var == 0.0) throw Unsplittable("split: all points of state " + std::to_string(victim) + " coincide");
  std::vector<double> values;
  for (const auto& p : points) values.push_back(p.point[best_axis]);
  std::sort(values.begin(), values.end());
  const double median = values[(values.size() - 1) / 2];
  double threshold;
  if (median < values.back()) {
    const double above = *std::upper_bound(values.begin(), values.end(), median);
    threshold = median + (above - median) / 2.0;
  } else {
    const double below = *(std::lower_bound(values.begin(), values.end(), median) - 1);
    threshold = below + (median - below) / 2.0;
  }
  QuantizerTree out = quantizer;
  out.split_by_axis(victim, best_axis, threshold, victim, quantizer.state_count(), occupied_leaves(quantizer, points));
  return out;
}

ExtractedMachine extract(const TraceSet& traces, const ExtractionConfig& cfg) {
  if (cfg.max_iterations < 1) throw InvalidArgument("extract: max_iterations must be >= 1");
  if (traces.points.empty()) throw InvalidArgument("extract: empty trace set");
  QuantizerTree quantizer(traces.dimension);
  ExtractedMachine m{traces.alphabet, Ssm(1, traces.alphabet.size()), quantizer, 0, false, 0, 0, {}};
  bool stalled = false;
  double previous_entropy = std::numeric_limits<double>::infinity();
  std::size_t previous_states = 0;
  for (;;) {
    MergeResult merged = merge_equivalent(build_ssm(traces, quantizer));
    quantizer.relabel(merged.mapping, merged.ssm.state_count());
    m.ssm = std::move(merged.ssm);
    const double entropy = m.ssm.total_entropy();
    m.entropy_history.push_back(entropy);
    if (m.ssm.deterministic(cfg.entropy_tolerance)) {
      m.deterministic = true;
      break;
    }
    if (m.iterations >= cfg.max_iterations) break;
    stalled = m.iterations > 0 && m.ssm.state_count() == previous_states && entropy >= previous_entropy - 1e-12;
    previous_entropy = entropy;
    previous_states = m.ssm.state_count();

    const auto state = quantize_all(traces, quantizer);
    const std::size_t victim = select_split_state(m.ssm, cfg.entropy_tolerance);
    const auto points = victim_points(traces, state, m.ssm, victim, cfg.key);
    if (stalled) {
      quantizer = split_quantizer_axis(quantizer, victim, points);
      ++m.fallback_splits;
    } else {
      try {
        quantizer = split_quantizer(quantizer, victim, points);
      } catch (const Unsplittable&) {
        quantizer = split_quantizer_axis(quantizer, victim, points);
        ++m.fallback_splits;
      }
    }
    ++m.iterations;
  }
  m.quantizer = quantizer;
  if (!traces.initial_points.empty()) move_to_front(m, quantizer.quantize(traces.points[traces.initial_points.front().first]));
  m.initial_state = 0;
  return m;
}

ExtractedMachine extract(const std::vector<TraceRecord>& traces, const Alphabet& alphabet,
                         const ExtractionConfig& cfg) {
  return extract(TraceSet::from_traces(traces, alphabet, cfg.output_threshold), cfg);
}

Projection project(const ExtractedMachine& m, std::size_t start, bool forced, bool strict_ties) {
  const Ssm& ssm = m.ssm;
  const std::size_t n = ssm.state_count();
  const std::size_t inputs = ssm.input_count();
  if (start >= n) throw InvalidArgument("project: start state out of range");
  if (!forced && !m.deterministic) throw InvalidArgument("project: machine is nondeterministic");
  const auto sink = static_cast<StateId>(n);
  std::vector<StateId> table(n * inputs, sink);
  bool lossy = false;
  bool needs_sink = false;
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t a = 0; a < inputs; ++a) {
      const auto& cell = ssm.cell(q, static_cast<SymbolIndex>(a));
      if (cell.empty()) {
        needs_sink = true;
        continue;
      }
      std::map<std::size_t, std::uint64_t> by_next;
      for (const auto& [o, c] : cell) by_next[o.next] += c;
      if (by_next.size() > 1 || cell.size() > 1) lossy = true;
      std::size_t best = 0;
      std::uint64_t best_c = 0;
      bool tie = false;
      for (const auto& [next, c] : by_next) {
        if (c > best_c) {
          best_c = c;
          best = next;
          tie = false;
        } else if (c == best_c) {
          tie = true;
        }
      }
      if (tie && strict_ties) {
        throw InvalidArgument("project: irreconcilable cell (state " + std::to_string(q) + ", input " +
                              std::string(1, m.alphabet.symbol(a)) + ")");
      }
      table[q * inputs + a] = static_cast<StateId>(best);
    }
  }
  std::vector<bool> accepting(n, false);
  double min_agreement = 1.0;
  for (std::size_t q = 0; q < n; ++q) {
    const auto acc = ssm.landings(q, true);
    const auto rej = ssm.landings(q, false);
    accepting[q] = acc > rej;
    if (acc + rej) {
      min_agreement = std::min(min_agreement, static_cast<double>(std::max(acc, rej)) / static_cast<double>(acc + rej));
    }
  }
  std::size_t states = n;
  if (needs_sink) {
    table.insert(table.end(), inputs, sink);
    accepting.push_back(false);
    ++states;
  } else {
    for (auto& t : table) {
      if (t == sink) t = 0;  // unreachable: every cell is populated
    }
  }
  return {Fsa(m.alphabet, states, static_cast<StateId>(start), std::move(accepting), std::move(table)), min_agreement,
          lossy && forced};
}

std::size_t choose_initial_state(const ExtractedMachine& m, const Dataset& train) {
  std::size_t best = 0;
  std::size_t best_correct = 0;
  for (std::size_t q = 0; q < m.ssm.state_count(); ++q) {
    const Fsa fsa = project(m, q, true, false).fsa;
    std::size_t correct = 0;
    for (const auto& e : train.examples) {
      if (fsa.accepts(e.word) == e.label) ++correct;
    }
    if (q == 0 || correct > best_correct) {
      best_correct = correct;
      best = q;
    }
  }
  return best;
}

Fsa to_fsa(const ExtractedMachine& m, bool forced) { return minimize(project(m, m.initial_state, forced).fsa); }

std::string write_extraction_metadata(const ExtractedMachine& m) {
  std::ostringstream out;
  out << "iterations: " << m.iterations << "\n";
  out << "deterministic: " << (m.deterministic ? "true" : "false") << "\n";
  out << "states: " << m.ssm.state_count() << "\n";
  out << "quantizer_leaves: " << m.quantizer.leaf_count() << "\n";
  out << "initial_state: " << m.initial_state << "\n";
  out << "fallback_splits: " << m.fallback_splits << "\n";
  out << "entropy_history:";
  char buf[32];
  for (double h : m.entropy_history) {
    std::snprintf(buf, sizeof buf, " %.6g", h);
    out << buf;
  }
  out << "\n";
  const auto proj = project(m, m.initial_state, true, false);
  std::snprintf(buf, sizeof buf, "%.6f", proj.min_agreement);
  out << "acceptance_agreement: " << buf << "\n";
  out << "acceptance_consistent: " << (proj.min_agreement >= 0.95 ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace pathrules
