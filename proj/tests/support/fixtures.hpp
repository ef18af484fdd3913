#ifndef NCG_TESTS_FIXTURES_HPP
#define NCG_TESTS_FIXTURES_HPP

#include <string>
#include <utility>
#include <vector>

#include "ncg/graph.hpp"

namespace ncg::testing {

struct Fixture {
  std::string name;
  Graph graph;
};

inline Graph from_list(std::size_t n, std::vector<Bond> bonds,
                       Graph::Connectivity c = Graph::Connectivity::required) {
  return Graph::from_bonds(n, bonds, c);
}

inline Graph k4_minus_edge() { return from_list(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}); }

// Two triangles sharing node 2.
inline Graph bowtie() { return from_list(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}}); }

// Connected fixtures used by the distance properties.
inline std::vector<Fixture> connected_fixtures() {
  std::vector<Fixture> out = {
      {"edge", build_path(2)},
      {"path3", build_path(3)},
      {"path4", build_path(4)},
      {"path5", build_path(5)},
      {"path6", build_path(6)},
      {"triangle", build_complete(3)},
      {"square", build_cycle(4)},
      {"cycle5", build_cycle(5)},
      {"cycle6", build_cycle(6)},
      {"star3", build_star(3)},
      {"k4_minus_edge", k4_minus_edge()},
      {"k4", build_complete(4)},
      {"bowtie", bowtie()},
      {"tree_depth2", build_binary_tree(2)},
      {"tree_depth3", build_binary_tree(3)},
  };
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::size_t n = 4 + seed;  // 5..10
    out.push_back({"random_n" + std::to_string(n) + "_s" + std::to_string(seed), build_random(n, 0.45, seed)});
  }
  return out;
}

// Fixtures with more than one component.
inline std::vector<Fixture> disconnected_fixtures() {
  const auto allowed = Graph::Connectivity::allowed;
  return {
      {"two_triangles", from_list(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}, allowed)},
      {"path_and_isolated", from_list(4, {{0, 1}, {1, 2}}, allowed)},
      {"square_and_edge", from_list(6, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {4, 5}}, allowed)},
      {"three_isolated", from_list(3, {}, allowed)},
  };
}

}  // namespace ncg::testing

#endif  // NCG_TESTS_FIXTURES_HPP
