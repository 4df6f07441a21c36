// Command-line front end: select, deform, metrics, bench, generate.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "rbfmorph/commands.hpp"

using rbfmorph::cli::Algorithm;
using rbfmorph::cli::RunConfig;

namespace {

void add_problem_options(CLI::App* cmd, RunConfig& cfg, std::string& algorithm, std::string& m_text) {
  cmd->add_option("--mesh", cfg.mesh_path, "MDK1 mesh file")->required();
  cmd->add_option("--disp", cfg.disp_path, "MDK1-DISP boundary displacement file");
  cmd->add_option("--deform-mode", cfg.deform_mode, "analytic displacement source")
      ->check(CLI::IsMember({"bend-twist", "span-sine", "zero"}));
  cmd->add_option("--b", cfg.bend_twist.b, "bend-twist root chord / span-sine span length");
  cmd->add_option("--theta-m", cfg.bend_twist.theta_m, "maximum twist angle in degrees");
  cmd->add_option("--x0", cfg.bend_twist.x0, "twist axis x");
  cmd->add_option("--y0", cfg.bend_twist.y0, "twist axis y");
  cmd->add_option("--c", cfg.span_sine.c, "span-sine mean aerodynamic chord");
  cmd->add_option("--radius", cfg.radius, "kernel support radius")->capture_default_str();
  cmd->add_option("--tol", cfg.tolerance, "allowable interpolation error")->capture_default_str();
  cmd->add_option("--algorithm", algorithm, "selection algorithm")
      ->check(CLI::IsMember({"greedy", "gcb"}))
      ->capture_default_str();
  cmd->add_option("--m", m_text, "group count or 'auto'")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "partition seed")->capture_default_str();
  cmd->add_option("--max-supports", cfg.max_supports, "support-count cap; reaching it counts as success");
  cmd->add_option("--workers", cfg.workers, "threads for error scans and volume evaluation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--history", cfg.history_path, "selection history CSV");
}

void finish_config(RunConfig& cfg, const std::string& algorithm, const std::string& m_text,
                   const CLI::App* cmd) {
  cfg.algorithm = algorithm == "greedy" ? Algorithm::Greedy : Algorithm::Gcb;
  if (m_text == "auto") {
    cfg.m.reset();
  } else {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(m_text, &pos);
      if (pos != m_text.size()) throw std::invalid_argument(m_text);
      cfg.m = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw rbfmorph::cli::UsageError("--m must be a positive integer or 'auto', got '" + m_text + "'");
    }
  }
  // --b doubles as the span length for the span-sine mode.
  if (cmd->count("--b") > 0) cfg.span_sine.b = cfg.bend_twist.b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compact RBF mesh deformation with greedy and grouping-circular support selection"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string algorithm = "gcb";
  std::string m_text = "auto";

  auto* select = app.add_subcommand("select", "select support nodes and write the history");
  add_problem_options(select, cfg, algorithm, m_text);
  select->add_option("--out", cfg.out_path, "support set CSV");

  auto* deform = app.add_subcommand("deform", "select supports and deform every mesh node");
  add_problem_options(deform, cfg, algorithm, m_text);
  deform->add_option("--out", cfg.out_path, "deformed MDK1 mesh")->required();

  auto* bench = app.add_subcommand("bench", "time the selection for several group counts");
  add_problem_options(bench, cfg, algorithm, m_text);
  bench->add_option("--m-list", cfg.m_list, "group counts to run")->delimiter(',')->required();
  bench->add_option("--report", cfg.report_path, "benchmark CSV (default stdout)");

  auto* metrics = app.add_subcommand("metrics", "mesh quality and support-distribution divergences");
  metrics->add_option("--mesh", cfg.mesh_path, "undeformed MDK1 mesh")->required();
  metrics->add_option("--after", cfg.after_path, "deformed MDK1 mesh");
  metrics->add_option("--supports", cfg.support_paths, "support set CSV files")->delimiter(',');
  metrics->add_option("--random-seeds", cfg.random_seeds, "random baselines sized like the first set")
      ->delimiter(',');
  metrics->add_option("--report", cfg.report_path, "metrics CSV (default stdout)");

  rbfmorph::WingCaseParams wing;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "write the swept-wing benchmark mesh");
  generate->add_option("--out", gen_out, "MDK1 output")->required();
  generate->add_option("--chord-points", wing.chord_points)->capture_default_str();
  generate->add_option("--span-stations", wing.span_stations)->capture_default_str();
  generate->add_option("--layers", wing.layers)->capture_default_str();
  generate->add_option("--first-layer", wing.first_layer)->capture_default_str();
  generate->add_option("--growth", wing.growth)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  return rbfmorph::cli::guarded(
      [&]() -> int {
        if (*generate) return rbfmorph::cli::cmd_generate(wing, gen_out, std::cout);
        if (*metrics) return rbfmorph::cli::cmd_metrics(cfg, std::cout);
        CLI::App* active = *select ? select : (*deform ? deform : bench);
        finish_config(cfg, algorithm, m_text, active);
        if (*select) return rbfmorph::cli::cmd_select(cfg, std::cout);
        if (*deform) return rbfmorph::cli::cmd_deform(cfg, std::cout);
        return rbfmorph::cli::cmd_bench(cfg, std::cout);
      },
      std::cerr);
}
