#pragma once

#include <iosfwd>
#include <string>

#include "lossynet/graph.hpp"

namespace lossynet {

// Edge-list text format:
//
//   n <count>
//   i j w        one line per link, 1-based node indices, decimal weight
//
// Blank lines and lines starting with '#' are ignored on input.

void write_edge_list(std::ostream& out, const WeightedGraph& g);
WeightedGraph read_edge_list(std::istream& in);

void save_edge_list(const std::string& path, const WeightedGraph& g);
WeightedGraph load_edge_list(const std::string& path);

}  // namespace lossynet
