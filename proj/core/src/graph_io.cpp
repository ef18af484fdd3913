#include "ncg/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncg/error.hpp"

namespace ncg {

namespace {

using json = nlohmann::json;

// Records bonds and reports repeats regardless of orientation.
class BondCollector {
 public:
  void add(NodeIndex i, NodeIndex j, std::size_t line) {
    if (i == j) throw ParseError(line, "self-loop at node " + std::to_string(i));
    const Bond key{std::min(i, j), std::max(i, j)};
    if (!seen_.insert(key).second) {
      throw ParseError(line, "duplicate bond {" + std::to_string(key.first) + "," +
                                 std::to_string(key.second) + "}");
    }
    bonds_.emplace_back(i, j);
    max_index_ = std::max({max_index_, i, j});
  }

  const std::vector<Bond>& bonds() const { return bonds_; }
  NodeIndex max_index() const { return max_index_; }

 private:
  std::set<Bond> seen_;
  std::vector<Bond> bonds_;
  NodeIndex max_index_ = 0;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Graph finish(std::size_t node_count, const BondCollector& bonds,
             Graph::Connectivity connectivity) {
  try {
    return Graph::from_bonds(node_count, bonds.bonds(), connectivity);
  } catch (const InvalidGraph& e) {
    throw ParseError(0, e.what());
  }
}

}  // namespace

Graph parse_edge_list(std::string_view text, Graph::Connectivity connectivity) {
  BondCollector bonds;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    NodeIndex ends[2];
    std::size_t count = 0;
    while (!line.empty()) {
      const auto stop = line.find_first_of(" \t");
      const auto token = line.substr(0, stop);
      if (count == 2) throw ParseError(line_no, "expected exactly two node indices");
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), ends[count]);
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(line_no, "invalid node index '" + std::string(token) + "'");
      }
      ++count;
      line = stop == std::string_view::npos ? std::string_view{} : trim(line.substr(stop));
    }
    if (count != 2) throw ParseError(line_no, "expected exactly two node indices");
    bonds.add(ends[0], ends[1], line_no);
  }
  if (bonds.bonds().empty()) throw ParseError(0, "edge list contains no bonds");
  return finish(bonds.max_index() + 1, bonds, connectivity);
}

Graph parse_graph_json(std::string_view text, Graph::Connectivity connectivity) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges")) {
    throw ParseError(0, "JSON graph needs \"nodes\" and \"edges\"");
  }
  if (!doc["nodes"].is_number_unsigned() || doc["nodes"].get<std::size_t>() == 0) {
    throw ParseError(0, "\"nodes\" must be a positive integer");
  }
  const auto n = doc["nodes"].get<std::size_t>();
  if (!doc["edges"].is_array()) throw ParseError(0, "\"edges\" must be an array");

  BondCollector bonds;
  std::size_t entry = 0;
  for (const auto& e : doc["edges"]) {
    ++entry;
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
      throw ParseError(0, "edge " + std::to_string(entry) + " is not a pair of node indices");
    }
    const auto i = e[0].get<NodeIndex>();
    const auto j = e[1].get<NodeIndex>();
    if (i >= n || j >= n) {
      throw ParseError(0, "edge " + std::to_string(entry) + " references a node >= " + std::to_string(n));
    }
    try {
      bonds.add(i, j, 0);
    } catch (const ParseError& err) {
      throw ParseError(0, "edge " + std::to_string(entry) + ": " + err.what());
    }
  }
  return finish(n, bonds, connectivity);
}

Graph parse_graph(std::string_view text, Graph::Connectivity connectivity) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_graph_json(text, connectivity);
  return parse_edge_list(text, connectivity);
}

std::string serialize_edge_list(const Graph& g) {
  std::string out;
  for (const auto& [i, j] : g.bonds()) {
    out += std::to_string(i);
    out += ' ';
    out += std::to_string(j);
    out += '\n';
  }
  return out;
}

std::string serialize_graph_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [i, j] : g.bonds()) edges.push_back({i, j});
  json doc{{"nodes", g.node_count()}, {"edges", std::move(edges)}};
  return doc.dump() + "\n";
}

Graph read_graph_file(const std::filesystem::path& path, Graph::Connectivity connectivity) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open graph file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str(), connectivity);
}

void write_graph_file(const std::filesystem::path& path, const Graph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write graph file " + path.string());
  out << (path.extension() == ".json" ? serialize_graph_json(g) : serialize_edge_list(g));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace ncg
