#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncg_tools/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ncg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = ncg::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("ncg_cli_test_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("gen then connes on the square") {
  TempDir tmp;
  const auto graph = tmp.file("square.txt");
  REQUIRE(invoke({"gen", "--family", "cycle", "--n", "4", "--out", graph}).code == 0);
  const auto r = invoke({"connes", "--graph", graph, "--from", "0", "--to", "2"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(std::abs(j.at("distance").get<double>() - 1.414214) <= 1e-6);
  CHECK(j.at("certified").get<bool>());
}

TEST_CASE("check on a random graph") {
  TempDir tmp;
  const auto graph = tmp.file("random.json");
  REQUIRE(invoke({"gen", "--family", "random", "--n", "12", "--p", "0.3", "--seed", "5", "--out", graph}).code == 0);
  const auto r = invoke({"check", "--graph", graph, "--export", tmp.file("mats")});
  CHECK(r.code == 0);
  CHECK(r.out.find("d*d = -2Δ: PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(fs::exists(tmp.file("mats/dirac.txt")));
  CHECK(fs::file_size(tmp.file("mats/laplacian.txt")) > 0);
}

TEST_CASE("spectral on a depth-8 tree") {
  TempDir tmp;
  const auto graph = tmp.file("tree.txt");
  REQUIRE(invoke({"gen", "--family", "tree", "--depth", "8", "--out", graph}).code == 0);
  const auto r = invoke({"spectral", "--graph", graph});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("upper").get<double>() == 3.0);
  CHECK(j.at("lower").get<double>() <= j.at("estimate").get<double>());
}

TEST_CASE("connes-matrix csv") {
  TempDir tmp;
  const auto graph = tmp.file("path.txt");
  REQUIRE(invoke({"gen", "--family", "path", "--n", "4", "--out", graph}).code == 0);
  const auto csv = tmp.file("m.csv");
  const auto r = invoke({"connes-matrix", "--graph", graph, "--out", csv});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).at("all_certified").get<bool>());
  const auto text = slurp(csv);
  CHECK(text.rfind("from,to,distance,combinatorial,certified\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 17);
}

TEST_CASE("truncation csv") {
  TempDir tmp;
  const auto csv = tmp.file("t.csv");
  const auto r = invoke({"truncation", "--family", "tree", "--max-depth", "6", "--out", csv});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).at("monotone").get<bool>());
  CHECK(slurp(csv).rfind("depth,nodes,norm\n", 0) == 0);
}

TEST_CASE("output is reproducible") {
  const auto a = invoke({"gen", "--family", "random", "--n", "10", "--p", "0.3", "--seed", "9"});
  const auto b = invoke({"gen", "--family", "random", "--n", "10", "--p", "0.3", "--seed", "9"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(nlohmann::json::parse(a.out).at("nodes").get<int>() == 10);
}

TEST_CASE("errors give nonzero exit codes") {
  CHECK(invoke({"frobnicate"}).code != 0);
  CHECK(invoke({}).code != 0);
  const auto bad_flag = invoke({"gen", "--family", "path", "--n", "3", "--colour", "red"});
  CHECK(bad_flag.code != 0);
  CHECK(!bad_flag.err.empty());
  CHECK(invoke({"connes", "--graph", "/nonexistent/graph.txt", "--from", "0", "--to", "1"}).code != 0);
  CHECK(invoke({"gen", "--family", "lattice", "--n", "3"}).code != 0);
  CHECK(invoke({"gen", "--family", "tree"}).code != 0);

  TempDir tmp;
  const auto broken = tmp.file("broken.txt");
  std::ofstream(broken) << "0 1\n1 two\n";
  const auto r = invoke({"check", "--graph", broken});
  CHECK(r.code != 0);
  CHECK(r.err.find("line 2") != std::string::npos);
}
