#ifndef NCG_GRAPH_IO_HPP
#define NCG_GRAPH_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "ncg/graph.hpp"

namespace ncg {

// Two interchangeable text formats:
//
//   edge list   one "i j" bond per line, 0-based, whitespace separated;
//               '#' starts a comment; node count is the largest index + 1.
//   JSON        {"nodes": n, "edges": [[i, j], ...]}
//
// Both reject self-loops and repeated bonds (including reversed repeats).

Graph parse_edge_list(std::string_view text,
                      Graph::Connectivity connectivity = Graph::Connectivity::required);
Graph parse_graph_json(std::string_view text,
                       Graph::Connectivity connectivity = Graph::Connectivity::required);
/// Dispatches on the first non-blank character: '{' selects JSON.
Graph parse_graph(std::string_view text,
                  Graph::Connectivity connectivity = Graph::Connectivity::required);

/// Canonical edge list: bonds i < j in lexicographic order, one per line.
std::string serialize_edge_list(const Graph& g);
std::string serialize_graph_json(const Graph& g);

Graph read_graph_file(const std::filesystem::path& path,
                      Graph::Connectivity connectivity = Graph::Connectivity::required);
/// Writes JSON when the extension is ".json", the edge list otherwise.
void write_graph_file(const std::filesystem::path& path, const Graph& g);

}  // namespace ncg

#endif  // NCG_GRAPH_IO_HPP
