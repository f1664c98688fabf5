#include "pathrules/fsa_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "pathrules/error.hpp"
#include "pathrules/text.hpp"

namespace pathrules {

std::string write_fsa(const Fsa& fsa) {
  std::ostringstream out;
  out << "fsa v1\n";
  out << "alphabet: " << fsa.alphabet().to_string() << "\n";
  out << "start: " << fsa.start() << "\n";
  out << "accept:";
  for (StateId q : fsa.accepting_states()) out << ' ' << q;
  out << "\n";
  const auto& alphabet = fsa.alphabet();
  for (std::size_t q = 0; q < fsa.state_count(); ++q) {
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
      out << q << ' ' << alphabet.symbol(a) << ' '
          << fsa.next(static_cast<StateId>(q), static_cast<SymbolIndex>(a)) << "\n";
    }
  }
  return out.str();
}

Fsa read_fsa(std::string_view text) {
  auto lines = text::content_lines(text);
  if (lines.empty() || text::trim(lines.front().text) != "fsa v1") {
    throw ParseError("fsa: missing 'fsa v1' header");
  }
  std::optional<Alphabet> alphabet;
  std::optional<StateId> start;
  std::vector<StateId> accepting;
  std::vector<Fsa::Edge> edges;
  StateId max_id = 0;
  auto note = [&](StateId q) { max_id = std::max(max_id, q); };

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [number, line] = lines[i];
    if (auto value = text::field(line, "alphabet")) {
      alphabet = Alphabet::parse(*value);
    } else if (auto value = text::field(line, "start")) {
      start = text::parse_uint<StateId>(*value, number);
      note(*start);
    } else if (auto value = text::field(line, "accept")) {
      for (const auto& tok : text::split(*value)) {
        accepting.push_back(text::parse_uint<StateId>(tok, number));
        note(accepting.back());
      }
    } else {
      auto tokens = text::split(line);
      if (tokens.size() != 3 || tokens[1].size() != 1) {
        throw ParseError("fsa: line " + std::to_string(number) + ": expected 'from symbol to'");
      }
      if (!alphabet) throw ParseError("fsa: transition before alphabet line");
      Fsa::Edge e{text::parse_uint<StateId>(tokens[0], number), tokens[1][0],
                  text::parse_uint<StateId>(tokens[2], number)};
      if (!alphabet->contains(e.symbol)) throw UnknownSymbol(e.symbol);
      note(e.from);
      note(e.to);
      edges.push_back(e);
    }
  }
  if (!alphabet) throw ParseError("fsa: missing alphabet line");
  if (!start) throw ParseError("fsa: missing start line");
  try {
    return Fsa::from_edges(*alphabet, static_cast<std::size_t>(max_id) + 1, *start, accepting, edges);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

void save_fsa(const std::filesystem::path& path, const Fsa& fsa) { write_text_file(path, write_fsa(fsa)); }

Fsa load_fsa(const std::filesystem::path& path) { return read_fsa(read_text_file(path)); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace pathrules
