#include "lossynet/edge_list.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "lossynet/errors.hpp"
#include "lossynet/format.hpp"

namespace lossynet {

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  out << "n " << g.node_count() << '\n';
  for (const auto& e : g.edges()) {
    out << (e.u + 1) << ' ' << (e.v + 1) << ' ' << format_double(e.weight) << '\n';
  }
}

WeightedGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> n;
  std::vector<Edge> edges;
  auto fail = [&](const std::string& what) {
    throw DomainError("edge list line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream fields{std::string(t)};
    std::string a, b, c, extra;
    fields >> a >> b;
    if (!n) {
      if (a != "n" || b.empty()) fail("expected header 'n <count>'");
      fields >> extra;
      if (!extra.empty()) fail("unexpected text after header");
      n = static_cast<std::size_t>(parse_unsigned(b, "node count"));
      continue;
    }
    fields >> c >> extra;
    if (c.empty() || !extra.empty()) fail("expected 'i j w'");
    const auto i = parse_unsigned(a, "node index");
    const auto j = parse_unsigned(b, "node index");
    if (i < 1 || j < 1 || i > *n || j > *n) fail("node index outside [1, n]");
    edges.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1),
                     parse_double(c, "weight")});
  }
  if (!n) throw DomainError("edge list: missing header 'n <count>'");
  return WeightedGraph::from_edges(*n, std::move(edges));
}

void save_edge_list(const std::string& path, const WeightedGraph& g) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_edge_list(out, g);
  if (!out) throw IoError("write failed: " + path);
}

WeightedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  return read_edge_list(in);
}

}  // namespace lossynet
