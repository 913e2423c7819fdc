// Command-line front end: approx, validate, exact.
//
// Exit codes: 0 decomposition / OK, 10 lower bound, 1 validation failure, 2 usage or parse error.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "twapprox/elimination.hpp"
#include "twapprox/graph.hpp"
#include "twapprox/improver.hpp"
#include "twapprox/oracle.hpp"
#include "twapprox/tree_decomposition.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;
constexpr int kExitLowerBound = 10;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_stats(const twapprox::RunReport& r) {
  const auto& s = r.stats;
  std::cerr << "outcome=" << (r.lower_bound ? "lower-bound" : "decomposition") << '\n'
            << "width=" << r.width << '\n'
            << "k=" << r.k << '\n'
            << "initial_width=" << r.initial_width << '\n'
            << "initial_nodes=" << r.initial_nodes << '\n'
            << "final_nodes=" << r.final_nodes << '\n'
            << "passes=" << s.passes << '\n'
            << "two_way_passes=" << s.two_way_passes << '\n'
            << "splits=" << s.splits << '\n'
            << "inserted=" << s.inserted << '\n'
            << "removed=" << s.removed << '\n'
            << "moves=" << s.moves << '\n'
            << "wall_seconds=" << r.seconds << '\n';
}

struct ApproxArgs {
  std::string graph;
  int k = 0;
  std::string td;
  std::string two_way = "auto";
  std::string seed_strategy = "min-fill";
  std::string out;
  bool stats = false;
  bool check = false;
};

int run_approx(const ApproxArgs& a) {
  using namespace twapprox;
  const Graph g = parse_gr(read_file(a.graph));
  std::optional<TreeDecomposition> t0;
  if (!a.td.empty()) t0 = parse_td(read_file(a.td));
  ApproxOptions options;
  options.bootstrap = *bootstrap_from_string(a.seed_strategy);
  options.two_way = a.two_way == "on" ? TwoWayMode::On : a.two_way == "off" ? TwoWayMode::Off : TwoWayMode::Auto;
  options.check = a.check;
  RunReport report;
  const Decision decision = approximate(g, a.k, std::move(t0), options, &report);
  if (a.stats) print_stats(report);

  if (const auto* lb = std::get_if<LowerBound>(&decision)) {
    std::cout << "LOWERBOUND k=" << a.k << '\n' << "BAG";
    for (Vertex v : lb->decomposition.bags[lb->node]) std::cout << ' ' << v + 1;
    std::cout << '\n';
    return kExitLowerBound;
  }
  const auto& td = std::get<Approximation>(decision).decomposition;
  if (a.check) {
    // Re-read the emitted text so the file on disk is what gets checked.
    const std::string text = emit_td(td);
    if (auto v = validate(g, parse_td(text)); !v.empty()) {
      for (const auto& violation : v) std::cout << "VIOLATION " << violation.message << '\n';
      return kExitInvalid;
    }
  }
  if (a.out.empty()) {
    std::cout << emit_td(td);
  } else {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + a.out);
    out << emit_td(td);
  }
  std::cout << "WIDTH " << width(td) << '\n';
  return kExitOk;
}

int run_validate(const std::string& graph_path, const std::string& td_path) {
  using namespace twapprox;
  const Graph g = parse_gr(read_file(graph_path));
  const TreeDecomposition t = parse_td(read_file(td_path));
  const auto violations = validate(g, t);
  if (violations.empty()) {
    std::cout << "OK\n";
    return kExitOk;
  }
  for (const auto& v : violations) std::cout << "VIOLATION " << v.message << '\n';
  return kExitInvalid;
}

int run_exact(const std::string& graph_path, int max_n) {
  using namespace twapprox;
  const Graph g = parse_gr(read_file(graph_path));
  std::cout << oracle::exact_treewidth(g, {max_n}) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Treewidth 2-approximation by local bag splitting"};
  app.require_subcommand(1);

  ApproxArgs approx;
  auto* cmd_approx = app.add_subcommand("approx", "Decomposition of width <= 2k+1 or a proof that tw > k");
  cmd_approx->add_option("--graph", approx.graph, "PACE .gr file")->required();
  cmd_approx->add_option("--k", approx.k, "Target treewidth bound")->required()->check(CLI::NonNegativeNumber);
  cmd_approx->add_option("--td", approx.td, "Starting .td decomposition");
  cmd_approx->add_option("--two-way", approx.two_way, "Two-way split mode")->check(CLI::IsMember({"auto", "on", "off"}));
  cmd_approx->add_option("--seed-strategy", approx.seed_strategy, "Bootstrap heuristic")
      ->check(CLI::IsMember({"trivial", "min-degree", "min-fill"}));
  cmd_approx->add_option("--out", approx.out, "Write the .td here instead of standard output");
  cmd_approx->add_flag("--stats", approx.stats, "key=value run statistics on standard error");
  cmd_approx->add_flag("--check", approx.check, "Validate and audit after every edit");

  std::string graph_path, td_path;
  auto* cmd_validate = app.add_subcommand("validate", "Check a .td against a .gr");
  cmd_validate->add_option("--graph", graph_path, "PACE .gr file")->required();
  cmd_validate->add_option("--td", td_path, "PACE .td file")->required();

  int max_n = 12;
  auto* cmd_exact = app.add_subcommand("exact", "Exact treewidth of a small graph");
  cmd_exact->add_option("--graph", graph_path, "PACE .gr file")->required();
  cmd_exact->add_option("--max-n", max_n, "Vertex cap for the exhaustive search");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*cmd_approx) return run_approx(approx);
    if (*cmd_validate) return run_validate(graph_path, td_path);
    if (*cmd_exact) return run_exact(graph_path, max_n);
  } catch (const twapprox::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const twapprox::ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const twapprox::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const twapprox::InvariantViolation& e) {
    std::cerr << "internal check failed: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
