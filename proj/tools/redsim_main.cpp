#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "redsim/config.hpp"
#include "redsim/runner.hpp"
#include "redsim/topology.hpp"

using namespace redsim;

int main(int argc, char** argv) {
  CLI::App app{"redsim: in-network caching vs redundancy elimination simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", in_path, out_path;
  std::string report_path, svg_path = "report.svg", metric = "hit_rate";
  std::string level_text = "router", name = "imported";
  int parallel = 1;

  auto* run = app.add_subcommand("run", "execute the scenario matrix");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--parallel", parallel,
                  "worker threads; output is identical at any count");

  auto* import = app.add_subcommand("import-topology",
                                    "convert Rocketfuel-style adjacency");
  import->add_option("input", in_path, "source file")->required();
  import->add_option("output", out_path, "edge-list file to write")->required();
  import->add_option("--level", level_text, "pop or router");
  import->add_option("--name", name, "topology label");

  auto* compare = app.add_subcommand(
      "compare", "footprint comparison of caching vs an RE reference");
  compare->add_option("--config", config_path, "config file")->required();
  compare->add_option("--out", out_dir, "output directory");

  auto* plot = app.add_subcommand("plot", "render a report column as SVG");
  plot->add_option("--report", report_path, "report.csv path")->required();
  plot->add_option("--out", svg_path, "SVG file to write");
  plot->add_option("--metric", metric, "report column to plot");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ScenarioConfig cfg = load_config_file(config_path);
      MatrixResult result = run_matrix(cfg, out_dir, parallel);
      std::cout << "wrote " << result.report_path << " ("
                << result.scenarios.size() << " scenarios)\n";
    } else if (*import) {
      auto lvl = parse_level(level_text);
      if (!lvl) throw std::runtime_error("import: level must be pop or router");
      std::ifstream in(in_path);
      if (!in) throw std::runtime_error("import: cannot open " + in_path);
      Topology t = import_cch(in, *lvl, name);
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("import: cannot write " + out_path);
      write_topology(out, t);
      std::cout << "wrote " << out_path << ": " << t.node_count() << " nodes, "
                << t.edge_count() << " edges\n";
    } else if (*compare) {
      ScenarioConfig cfg = load_config_file(config_path);
      auto rows = compare_policies(cfg, out_dir);
      std::cout << "wrote " << (out_dir + "/compare.csv") << " (" << rows.size()
                << " rows)\n";
    } else if (*plot) {
      plot_report(report_path, svg_path, metric);
      std::cout << "wrote " << svg_path << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
