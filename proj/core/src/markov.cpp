#include "pathrules/markov.hpp"

#include <cstdio>
#include <sstream>

namespace pathrules {

bool MarkovAnnotation::visited(StateId q) const {
  for (auto c : counts.at(q)) {
    if (c) return true;
  }
  return false;
}

double MarkovAnnotation::probability(StateId q, char symbol) const {
  return probabilities.at(q).at(alphabet.index(symbol));
}

MarkovAnnotation estimate_markov(const Fsa& target, const Dataset& corpus) {
  const std::size_t symbols = target.alphabet().size();
  MarkovAnnotation m{target.alphabet(),
                     std::vector<std::vector<std::uint64_t>>(target.state_count(),
                                                             std::vector<std::uint64_t>(symbols, 0)),
                     {}};
  for (const auto& e : corpus.examples) {
    StateId q = target.start();
    for (char c : e.word) {
      const SymbolIndex a = target.alphabet().index(c);
      ++m.counts[q][a];
      q = target.next(q, a);
    }
  }
  m.probabilities.assign(target.state_count(), std::vector<double>(symbols, 0.0));
  for (std::size_t q = 0; q < target.state_count(); ++q) {
    std::uint64_t total = 0;
    for (auto c : m.counts[q]) total += c;
    if (!total) continue;
    for (std::size_t a = 0; a < symbols; ++a) {
      m.probabilities[q][a] = static_cast<double>(m.counts[q][a]) / static_cast<double>(total);
    }
  }
  return m;
}

std::vector<MarkovFlag> underrepresented(const MarkovAnnotation& m, double threshold) {
  std::vector<MarkovFlag> out;
  for (std::size_t q = 0; q < m.counts.size(); ++q) {
    if (!m.visited(static_cast<StateId>(q))) continue;
    for (std::size_t a = 0; a < m.alphabet.size(); ++a) {
      if (m.probabilities[q][a] < threshold) {
        out.push_back({static_cast<StateId>(q), m.alphabet.symbol(a), m.probabilities[q][a]});
      }
    }
  }
  return out;
}

std::string format_markov(const MarkovAnnotation& m, double threshold) {
  std::ostringstream out;
  char buf[64];
  for (std::size_t q = 0; q < m.counts.size(); ++q) {
    if (!m.visited(static_cast<StateId>(q))) continue;
    out << "state " << q << ":";
    for (std::size_t a = 0; a < m.alphabet.size(); ++a) {
      std::snprintf(buf, sizeof buf, " %c=%.3f", m.alphabet.symbol(a), m.probabilities[q][a]);
      out << buf;
      if (m.probabilities[q][a] < threshold) out << '!';
    }
    out << "\n";
  }
  for (const auto& f : underrepresented(m, threshold)) {
    std::snprintf(buf, sizeof buf, "%.3f", f.probability);
    out << "under-represented: state " << f.state << " symbol " << f.symbol << " p=" << buf << " < " << threshold
        << "\n";
  }
  return out.str();
}

}  // namespace pathrules
