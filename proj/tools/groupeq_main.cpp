#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "groupeq/commands.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw groupeq::Error("cannot open input file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"groupeq: equations over groups, subgroup presentations and "
               "covering-space homology"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string input = "-";
  groupeq::RunFlags flags;
  app.add_option("-f,--file", input, "input document (default: stdin)");
  app.add_flag("--json", flags.json, "emit the JSON report");
  app.add_option("--max-cosets", flags.max_cosets,
                 "coset budget for enumeration (default 100000)");
  app.add_option("--max-index", flags.max_index,
                 "largest subgroup index searched (default 6)");
  app.add_option("--budget", flags.budget,
                 "solver assignment-visit budget (default 1e8)");
  app.add_option("--order-cap", flags.order_cap,
                 "largest overgroup order searched (default 10000)");
  app.add_option("--node-budget", flags.node_budget,
                 "low-index search node budget (default 1e7)");
  app.add_option("--seed-corpus", flags.seed,
                 "seed for the low-index branch exploration order; the "
                 "resulting list is canonical for every seed (default 0)");

  CLI::App* analyze = app.add_subcommand(
      "analyze", "exponent matrix, nonsingularity, conjugacy and all "
                 "applicable theorem hypothesis checks");
  CLI::App* subgroups = app.add_subcommand(
      "subgroups", "low-index subgroups with their Schreier presentations");
  CLI::App* homology = app.add_subcommand(
      "homology", "covering complex sizes, H0/H1/H2 and the criterion check");
  homology->add_option("--index-table", flags.index_table,
                       "which enumerated table to use (default 0)");
  CLI::App* solve = app.add_subcommand(
      "solve", "search the overgroup catalogue for a solution");
  CLI::App* rewrite = app.add_subcommand(
      "rewrite", "orbit-system rewriting over a normal subgroup");
  rewrite->add_option("--normal", flags.normal,
                      "name of the declared normal subset");
  subgroups->add_option("--group", flags.group,
                        "which declared presentation to use");
  homology->add_option("--group", flags.group,
                       "which declared presentation to use");

  CLI11_PARSE(app, argc, argv);

  std::string command;
  if (analyze->parsed()) command = "analyze";
  if (subgroups->parsed()) command = "subgroups";
  if (homology->parsed()) command = "homology";
  if (solve->parsed()) command = "solve";
  if (rewrite->parsed()) command = "rewrite";

  try {
    groupeq::Document doc = groupeq::parse(read_input(input));
    groupeq::Report report = groupeq::run(command, doc, flags);
    if (flags.json) {
      std::cout << report.data.dump(2) << "\n";
    } else {
      std::cout << report.text;
    }
    return 0;
  } catch (const groupeq::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
