#pragma once

#include <iosfwd>
#include <string>

#include "treestab/graph.hpp"
#include "treestab/tree.hpp"

namespace treestab {

// Text formats. Lines starting with '#' and blank lines are ignored.
//
// Graph:  header "n m", then m lines "u v" with 0 <= u,v < n, u != v.
//         Duplicate or unnormalized edges are rejected.
// Tree:   header "n root", then n-1 lines "u v" meaning an undirected tree
//         edge; the file must describe a tree on 0..n-1.

Graph load_graph(const std::string& path);
Graph parse_graph(std::istream& in, const std::string& origin);
void save_graph(const Graph& g, const std::string& path);

RootedTree load_tree(const std::string& path);
RootedTree parse_tree(std::istream& in, const std::string& origin);
void save_tree(const RootedTree& t, const std::string& path);

// "3/4" or "3" -> exact rational; rejects zero denominators.
Q parse_rational(const std::string& text);

}  // namespace treestab
