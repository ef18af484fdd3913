#include "ncg_tools/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncg/connes.hpp"
#include "ncg/error.hpp"
#include "ncg/graph.hpp"
#include "ncg/graph_io.hpp"
#include "ncg/operators.hpp"
#include "ncg/spectral.hpp"

namespace ncg::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct GenArgs {
  std::string family;
  std::optional<std::size_t> n;
  std::optional<std::size_t> depth;
  double p = 0.5;
  std::uint64_t seed = 0;
  std::string out;
};

struct GraphArgs {
  std::string graph;
};

struct CheckArgs {
  std::string graph;
  std::string export_dir;
};

struct ConnesArgs {
  std::string graph;
  NodeIndex from = 0;
  NodeIndex to = 0;
  double tol = 1e-7;
};

struct MatrixArgs {
  std::string graph;
  std::string out;
  double tol = 1e-7;
  std::size_t workers = 0;
};

struct TruncationArgs {
  std::string family = "tree";
  std::size_t min_depth = 1;
  std::size_t max_depth = 0;
  std::string out;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path);
  if (!file) throw Error("cannot open '" + path + "' for writing");
  file.precision(std::numeric_limits<double>::max_digits10);
  return file;
}

int run_gen(const GenArgs& args, std::ostream& out, std::ostream& err) {
  auto need = [&](const std::optional<std::size_t>& v, const char* flag) {
    if (!v) throw InvalidArgument("--family " + args.family + " needs " + flag);
    return *v;
  };
  Graph g;
  if (args.family == "path") {
    g = build_path(need(args.n, "--n"));
  } else if (args.family == "cycle") {
    g = build_cycle(need(args.n, "--n"));
  } else if (args.family == "tree") {
    g = build_binary_tree(need(args.depth, "--depth"));
  } else if (args.family == "random") {
    g = build_random(need(args.n, "--n"), args.p, args.seed);
  } else {
    err << "error: unknown family '" << args.family << "'\n";
    return usage_error;
  }
  if (args.out.empty()) {
    out << serialize_graph_json(g) << '\n';
    return ok;
  }
  write_graph_file(args.out, g);
  out << json{{"nodes", g.node_count()}, {"bonds", g.bond_count()}, {"out", args.out}}.dump() << '\n';
  return ok;
}

int run_spectral(const GraphArgs& args, std::ostream& out) {
  const Graph g = read_graph_file(args.graph, Graph::Connectivity::allowed);
  const NormBounds b = adjacency_norm_bounds(g);
  out << json{{"nodes", g.node_count()},
              {"lower", b.lower},
              {"upper", b.upper},
              {"estimate", b.estimate},
              {"best_prefix", b.best_prefix}}
             .dump()
      << '\n';
  const bool sandwiched = b.lower <= b.estimate + 1e-8 && b.estimate <= b.upper + 1e-8;
  return sandwiched ? ok : not_certified;
}

int run_check(const CheckArgs& args, std::ostream& out) {
  const Graph g = read_graph_file(args.graph, Graph::Connectivity::allowed);
  bool all = true;
  auto report = [&](const std::string& name, bool passed) {
    out << name << ": " << (passed ? "PASS" : "FAIL") << '\n';
    all = all && passed;
  };
  for (const auto& check : check_operator_identities(g)) report(check.name, check.passed);

  bool rank_ok = true;
  try {
    const auto dims = cycle_space_dims(g);
    rank_ok = dims.kernel_dim == g.directed_edge_count() - (g.node_count() - dims.components);
  } catch (const std::logic_error&) {
    rank_ok = false;
  }
  report("rank(d*) = n - c", rank_ok);

  const LinearMap dstar = d_map(g).adjoint();
  double worst = 0.0;
  for (const auto& cycle : fundamental_cycles(g)) {
    worst = std::max(worst, dstar.apply(cycle_vector(g, cycle).values()).cwiseAbs().maxCoeff());
  }
  report("d* on cycle vectors = 0", worst <= 1e-12);

  if (!args.export_dir.empty()) {
    fs::create_directories(args.export_dir);
    const auto dirac = dirac_operator(g);
    const std::vector<std::pair<std::string, LinearMap>> maps = {
        {"d", d_map(g)},          {"adjacency", adjacency_map(g)}, {"degree", degree_map(g)},
        {"laplacian", laplacian_map(g)}, {"incidence", incidence_map(g)}, {"dirac", dirac.assembled}};
    for (const auto& [name, map] : maps) {
      auto file = open_output((fs::path(args.export_dir) / (name + ".txt")).string());
      map.write_coordinate(file);
    }
  }
  return all ? ok : not_certified;
}

int run_connes(const ConnesArgs& args, std::ostream& out, std::ostream& err) {
  const Graph g = read_graph_file(args.graph);
  SolverOptions options;
  options.tol = args.tol;
  const ConnesResult r = connes_distance(g, {args.from, args.to}, options);
  out << to_json(r) << '\n';
  if (!r.certified) {
    err << "error: solve not certified (kkt residual " << r.kkt_residual << ")\n";
    return not_certified;
  }
  return ok;
}

int run_matrix(const MatrixArgs& args, std::ostream& out, std::ostream& err) {
  const Graph g = read_graph_file(args.graph);
  SolverOptions options;
  options.tol = args.tol;
  const DistanceMatrix m = distance_matrix(g, options, args.workers);

  std::ostringstream csv;
  csv.precision(std::numeric_limits<double>::max_digits10);
  csv << "from,to,distance,combinatorial,certified\n";
  for (NodeIndex a = 0; a < g.node_count(); ++a) {
    const auto hops = bfs_distances(g, a);
    for (NodeIndex b = 0; b < g.node_count(); ++b) {
      const auto i = static_cast<Eigen::Index>(a);
      const auto k = static_cast<Eigen::Index>(b);
      csv << a << ',' << b << ',' << m.distance(i, k) << ',' << *hops[b] << ','
          << (m.certified(i, k) ? 1 : 0) << '\n';
    }
  }
  if (args.out.empty()) {
    out << csv.str();
  } else {
    open_output(args.out) << csv.str();
    const MetricViolation v = metric_violation(m.distance);
    out << json{{"nodes", g.node_count()},
                {"all_certified", m.all_certified()},
                {"asymmetry", v.asymmetry},
                {"triangle_violation", v.triangle},
                {"out", args.out}}
               .dump()
        << '\n';
  }
  if (!m.all_certified()) {
    err << "error: some pair solves were not certified\n";
    return not_certified;
  }
  return ok;
}

int run_truncation(const TruncationArgs& args, std::ostream& out, std::ostream& err) {
  if (args.max_depth < args.min_depth) throw InvalidArgument("--max-depth must be at least --min-depth");
  std::vector<std::size_t> depths;
  for (std::size_t d = args.min_depth; d <= args.max_depth; ++d) depths.push_back(d);
  const TruncationReport report = truncation_norm_sequence(parse_family(args.family), depths);
  if (args.out.empty()) {
    write_truncation_csv(out, report);
  } else {
    auto file = open_output(args.out);
    write_truncation_csv(file, report);
    out << json{{"family", std::string(to_string(report.family))},
                {"depths", report.depths},
                {"norms", report.norms},
                {"monotone", report.monotone},
                {"out", args.out}}
               .dump()
        << '\n';
  }
  if (!report.monotone) {
    err << "error: norm sequence is not monotone\n";
    return not_certified;
  }
  return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete calculus, Dirac operator and Connes distance on graphs", "ncg"};
  app.require_subcommand(1, 1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a graph");
  gen_cmd->add_option("--family", gen.family, "path, cycle, tree or random")->required();
  gen_cmd->add_option("--n", gen.n, "Node count (path, cycle, random)");
  gen_cmd->add_option("--depth", gen.depth, "Tree depth");
  gen_cmd->add_option("--p", gen.p, "Edge probability (random)")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--seed", gen.seed, "Seed (random)");
  gen_cmd->add_option("--out", gen.out, "Output file (.json or edge list)");

  GraphArgs spectral;
  auto* spectral_cmd = app.add_subcommand("spectral", "Bounds and estimate of the adjacency norm");
  spectral_cmd->add_option("--graph", spectral.graph, "Graph file")->required();

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Verify the operator identities");
  check_cmd->add_option("--graph", check.graph, "Graph file")->required();
  check_cmd->add_option("--export", check.export_dir, "Directory for coordinate-format matrices");

  ConnesArgs connes;
  auto* connes_cmd = app.add_subcommand("connes", "Connes distance between two nodes");
  connes_cmd->add_option("--graph", connes.graph, "Graph file")->required();
  connes_cmd->add_option("--from", connes.from, "First node")->required();
  connes_cmd->add_option("--to", connes.to, "Second node")->required();
  connes_cmd->add_option("--tol", connes.tol, "KKT tolerance")->check(CLI::PositiveNumber);

  MatrixArgs matrix;
  auto* matrix_cmd = app.add_subcommand("connes-matrix", "All-pairs Connes distances as CSV");
  matrix_cmd->add_option("--graph", matrix.graph, "Graph file")->required();
  matrix_cmd->add_option("--out", matrix.out, "CSV file (stdout when absent)");
  matrix_cmd->add_option("--tol", matrix.tol, "KKT tolerance")->check(CLI::PositiveNumber);
  matrix_cmd->add_option("--workers", matrix.workers, "Worker threads (0 = hardware)");

  TruncationArgs truncation;
  auto* truncation_cmd = app.add_subcommand("truncation", "Adjacency norms of nested truncations as CSV");
  truncation_cmd->add_option("--family", truncation.family, "tree, path or cycle");
  truncation_cmd->add_option("--min-depth", truncation.min_depth, "First depth");
  truncation_cmd->add_option("--max-depth", truncation.max_depth, "Last depth")->required();
  truncation_cmd->add_option("--out", truncation.out, "CSV file (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return usage_error;
  }

  try {
    if (*gen_cmd) return run_gen(gen, out, err);
    if (*spectral_cmd) return run_spectral(spectral, out);
    if (*check_cmd) return run_check(check, out);
    if (*connes_cmd) return run_connes(connes, out, err);
    if (*matrix_cmd) return run_matrix(matrix, out, err);
    if (*truncation_cmd) return run_truncation(truncation, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  }
  err << app.help();
  return usage_error;
}

}  // namespace ncg::cli
