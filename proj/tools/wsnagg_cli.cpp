// wsnagg: command-line front end for the clustering / tree / scheduling /
// simulation pipeline. Exit codes: 0 ok, 2 invalid input, 3 pipeline error,
// 4 I/O error. WSNAGG_LOG=quiet|info|debug controls stderr chatter.

#include <CLI11.hpp>

#include <cstdlib>
#include <map>
#include <iostream>
#include <string>
#include <vector>

#include "wsnagg/error.hpp"
#include "wsnagg/report_io.hpp"
#include "wsnagg/scenario_io.hpp"
#include "wsnagg/sim_engine.hpp"
#include "wsnagg/simd/kernels.hpp"

namespace {

using namespace wsnagg;

enum class Command { Simulate, Cluster, Tree, Schedule, Compare, Generate };

struct RunConfig {
  Command command = Command::Simulate;
  std::string input;
  std::string output;  // empty: stdout
  OutputFormat format = OutputFormat::Csv;
  std::vector<std::string> overrides;

  // generate only
  int nodes = 0;
  std::string area = "100x100";
  int k = 1;
  std::uint64_t seed = 1;
  double energy = 2.0;
};

int log_level() {
  const char* env = std::getenv("WSNAGG_LOG");
  if (env == nullptr) return 1;
  const std::string v = env;
  if (v == "quiet") return 0;
  if (v == "debug") return 2;
  return 1;
}

void log(int level, const std::string& msg) {
  if (level <= log_level()) std::cerr << "wsnagg: " << msg << "\n";
}

void apply_overrides(Scenario& s, const std::vector<std::string>& overrides) {
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidScenario, "--set expects key=value, got '" + kv + "'");
    }
    apply_override(s, kv.substr(0, eq), kv.substr(eq + 1));
  }
  validate_scenario(s);
}

Scenario load(const RunConfig& cfg) {
  Scenario s = parse_scenario(read_text_file(cfg.input));
  apply_overrides(s, cfg.overrides);
  log(2, "loaded " + std::to_string(s.size()) + " nodes from " + cfg.input);
  return s;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
  } else {
    write_text_file_atomic(cfg.output, text);
    log(1, "wrote " + cfg.output);
  }
}

Configuration stage_config(const Scenario& s) {
  const NetworkState state = NetworkState::from(s);
  return configure_network(s, state, build_neighbor_graph(s), KeyMode::EnergyOverDistance, true);
}

std::string render(const RunConfig& cfg) {
  const bool csv = cfg.format == OutputFormat::Csv;
  switch (cfg.command) {
    case Command::Generate: {
      const auto x = cfg.area.find('x');
      if (x == std::string::npos) {
        throw Error(ErrorCode::InvalidScenario, "--area expects WxH, got '" + cfg.area + "'");
      }
      GeneratorDefaults defaults;
      defaults.initial_energy = cfg.energy;
      Scenario s = generate_random_scenario(cfg.nodes, std::stod(cfg.area.substr(0, x)),
                                            std::stod(cfg.area.substr(x + 1)), cfg.k, cfg.seed,
                                            defaults);
      apply_overrides(s, cfg.overrides);
      return format_scenario(s);
    }
    case Command::Cluster: {
      const auto s = load(cfg);
      const auto c = run_emd(s);
      log(1, "clustered in " + std::to_string(c.iterations_used) + " EM iterations");
      return csv ? clustering_csv(c) : dump(to_json(c));
    }
    case Command::Tree: {
      const auto c = stage_config(load(cfg));
      return csv ? trees_csv(c.trees) : dump(to_json(c.trees));
    }
    case Command::Schedule: {
      const auto c = stage_config(load(cfg));
      log(1, "t_max = " + std::to_string(c.schedule.t_max));
      if (csv) return schedule_csv(c.schedule);
      return dump({{"schedule", to_json(c.schedule)}, {"frequency_plan", to_json(c.plan)}});
    }
    case Command::Simulate: {
      const auto m = run_simulation(load(cfg));
      log(1, std::to_string(m.rounds_completed) + " rounds, " +
                 std::to_string(m.packets_delivered_to_sink) + " packets delivered");
      return csv ? metrics_csv(m) : dump(to_json(m));
    }
    case Command::Compare: {
      const auto r = compare_baselines(load(cfg));
      return csv ? comparison_csv(r) : dump(to_json(r));
    }
  }
  return {};
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidScenario:
    case ErrorCode::Syntax:
    case ErrorCode::TooFewNodes:
    case ErrorCode::CoincidentNodes:
      return 2;
    case ErrorCode::Io:
      return 4;
    default:
      return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustered data-aggregation pipeline and simulator for wireless sensor networks"};
  app.require_subcommand(1);
  RunConfig cfg;

  const std::map<std::string, OutputFormat> formats{{"csv", OutputFormat::Csv},
                                                    {"json", OutputFormat::Json}};
  auto scenario_command = [&](const std::string& name, const std::string& help, Command c) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", cfg.input, "Scenario file")->required();
    sub->add_option("--format", cfg.format, "csv or json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("--out", cfg.output, "Output path (default: stdout)");
    sub->add_option("--set", cfg.overrides, "Scenario override key=value (repeatable)");
    sub->callback([&cfg, c] { cfg.command = c; });
  };
  scenario_command("simulate", "Run the full pipeline and the round simulation", Command::Simulate);
  scenario_command("cluster", "Expectation-maximization clustering only", Command::Cluster);
  scenario_command("tree", "Clustering plus per-cluster aggregation trees", Command::Tree);
  scenario_command("schedule", "Pipeline up to the TDMA/FDMA schedule", Command::Schedule);
  scenario_command("compare", "Energy/distance trees versus a distance-only baseline",
                   Command::Compare);

  auto* gen = app.add_subcommand("generate", "Write a random scenario file");
  gen->add_option("--nodes", cfg.nodes, "Node count including the sink")->required();
  gen->add_option("--area", cfg.area, "Area as WxH meters");
  gen->add_option("--k", cfg.k, "Cluster count")->required();
  gen->add_option("--seed", cfg.seed, "RNG seed");
  gen->add_option("--energy", cfg.energy, "Initial energy per node, joules");
  gen->add_option("--out", cfg.output, "Output path (default: stdout)");
  gen->add_option("--set", cfg.overrides, "Scenario override key=value (repeatable)");
  gen->callback([&cfg] { cfg.command = Command::Generate; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  log(2, std::string("kernels: ") + std::string(simd::active_kernels().name));
  try {
    emit(cfg, render(cfg));
  } catch (const Error& e) {
    std::cerr << "wsnagg: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "wsnagg: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
