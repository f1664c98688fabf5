#include "pathrules/ssm.hpp"

#include <array>
#include <cmath>
#include <set>

namespace pathrules {

TraceSet TraceSet::from_traces(const std::vector<TraceRecord>& traces, const Alphabet& alphabet,
                               double output_threshold) {
  if (traces.empty()) throw InvalidArgument("extraction: empty trace set");
  TraceSet set;
  set.alphabet = alphabet;
  set.dimension = traces.front().initial_hidden.size();
  if (set.dimension == 0 && !traces.front().steps.empty()) set.dimension = traces.front().steps.front().hidden.size();
  if (set.dimension == 0) throw InvalidArgument("extraction: traces carry no hidden vectors");
  for (const auto& tr : traces) {
    std::vector<double> initial = tr.initial_hidden;
    if (initial.empty()) initial.assign(set.dimension, 0.0);
    if (initial.size() != set.dimension) throw InvalidArgument("extraction: traces disagree on hidden size");
    set.points.push_back(std::move(initial));
    std::size_t prev = set.points.size() - 1;
    set.initial_points.emplace_back(prev, tr.initial_output > output_threshold);
    for (const auto& st : tr.steps) {
      if (st.hidden.size() != set.dimension) throw InvalidArgument("extraction: traces disagree on hidden size");
      set.points.push_back(st.hidden);
      const std::size_t here = set.points.size() - 1;
      set.steps.push_back({prev, here, alphabet.index(st.symbol), st.output > output_threshold});
      prev = here;
    }
  }
  return set;
}

Ssm::Ssm(std::size_t states, std::size_t inputs)
    : states_(states), inputs_(inputs), cells_(states * inputs), landings_(states, {0, 0}) {}

void Ssm::add(std::size_t state, SymbolIndex input, Outcome outcome, std::uint64_t count) {
  if (state >= states_ || input >= inputs_ || outcome.next >= states_) throw InvalidArgument("ssm: index out of range");
  cells_[state * inputs_ + input][outcome] += count;
}

void Ssm::add_landing(std::size_t state, bool output, std::uint64_t count) {
  landings_.at(state)[output ? 1 : 0] += count;
}

std::uint64_t Ssm::cell_total(std::size_t state, SymbolIndex input) const {
  std::uint64_t total = 0;
  for (const auto& [o, c] : cell(state, input)) total += c;
  return total;
}

double Ssm::probability(std::size_t state, SymbolIndex input, Outcome outcome) const {
  const auto& c = cell(state, input);
  const auto it = c.find(outcome);
  if (it == c.end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(cell_total(state, input));
}

double Ssm::cell_entropy(std::size_t state, SymbolIndex input) const {
  const auto total = static_cast<double>(cell_total(state, input));
  double h = 0.0;
  for (const auto& [o, c] : cell(state, input)) {
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

double Ssm::landing_entropy(std::size_t state) const {
  const auto& l = landings_.at(state);
  const double total = static_cast<double>(l[0] + l[1]);
  double h = 0.0;
  for (auto c : l) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

double Ssm::state_entropy(std::size_t state) const {
  double h = landing_entropy(state);
  for (std::size_t a = 0; a < inputs_; ++a) h += cell_entropy(state, static_cast<SymbolIndex>(a));
  return h;
}

double Ssm::total_entropy() const {
  double h = 0.0;
  for (std::size_t q = 0; q < states_; ++q) h += state_entropy(q);
  return h;
}

bool Ssm::deterministic(double tolerance) const {
  for (std::size_t q = 0; q < states_; ++q) {
    if (landing_entropy(q) > tolerance) return false;
    for (std::size_t a = 0; a < inputs_; ++a) {
      if (cell_entropy(q, static_cast<SymbolIndex>(a)) > tolerance) return false;
    }
  }
  return true;
}

Ssm build_ssm(const TraceSet& traces, const QuantizerTree& quantizer) {
  if (traces.points.empty()) throw InvalidArgument("extraction: empty trace set");
  std::vector<std::size_t> state(traces.points.size());
  for (std::size_t i = 0; i < traces.points.size(); ++i) state[i] = quantizer.quantize(traces.points[i]);
  Ssm ssm(quantizer.state_count(), traces.alphabet.size());
  for (const auto& st : traces.steps) {
    ssm.add(state[st.from], st.input, {state[st.to], st.output});
    ssm.add_landing(state[st.to], st.output);
  }
  for (const auto& [point, output] : traces.initial_points) ssm.add_landing(state[point], output);
  return ssm;
}

Ssm build_ssm(const std::vector<TraceRecord>& traces, const QuantizerTree& quantizer, const Alphabet& alphabet) {
  return build_ssm(TraceSet::from_traces(traces, alphabet), quantizer);
}

std::size_t select_split_state(const Ssm& ssm, double tolerance) {
  std::size_t best = 0;
  double best_h = -1.0;
  for (std::size_t q = 0; q < ssm.state_count(); ++q) {
    const double h = ssm.state_entropy(q);
    if (h > best_h) {
      best_h = h;
      best = q;
    }
  }
  if (best_h <= tolerance) throw InvalidArgument("select_split_state: machine is deterministic");
  return best;
}

MergeResult merge_equivalent(const Ssm& ssm) {
  const std::size_t n = ssm.state_count();
  const std::size_t inputs = ssm.input_count();
  // Initial blocks: which outputs were observed on landing in the state.
  std::vector<std::size_t> block(n, 0);
  std::set<std::size_t> signatures;
  for (std::size_t q = 0; q < n; ++q) {
    block[q] = (ssm.landings(q, false) ? 1 : 0) + (ssm.landings(q, true) ? 2 : 0);
    signatures.insert(block[q]);
  }
  std::size_t blocks = signatures.size();
  for (;;) {
    using Behavior = std::vector<std::set<std::pair<std::size_t, bool>>>;
    std::map<std::pair<std::size_t, Behavior>, std::size_t> ids;
    std::vector<std::size_t> refined(n);
    for (std::size_t q = 0; q < n; ++q) {
      Behavior behavior(inputs);
      for (std::size_t a = 0; a < inputs; ++a) {
        for (const auto& [o, c] : ssm.cell(q, static_cast<SymbolIndex>(a))) {
          behavior[a].emplace(block[o.next], o.output);
        }
      }
      auto [it, inserted] = ids.emplace(std::make_pair(block[q], std::move(behavior)), ids.size());
      refined[q] = it->second;
    }
    block.swap(refined);
    if (ids.size() == blocks) break;
    blocks = ids.size();
  }
  // Renumber by lowest member.
  std::vector<std::size_t> rename(blocks, SIZE_MAX);
  std::size_t next = 0;
  for (std::size_t q = 0; q < n; ++q) {
    if (rename[block[q]] == SIZE_MAX) rename[block[q]] = next++;
    block[q] = rename[block[q]];
  }
  Ssm merged(blocks, inputs);
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t a = 0; a < inputs; ++a) {
      for (const auto& [o, c] : ssm.cell(q, static_cast<SymbolIndex>(a))) {
        merged.add(block[q], static_cast<SymbolIndex>(a), {block[o.next], o.output}, c);
      }
    }
    for (bool out : {false, true}) {
      if (auto c = ssm.landings(q, out)) merged.add_landing(block[q], out, c);
    }
  }
  return {std::move(merged), std::move(block)};
}

}  // namespace pathrules
