// Command line front end: one subcommand per experiment.
#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "kirchhoff/error.hpp"
#include "kirchhoff/experiments.hpp"

namespace {

constexpr int kVerdictFailed = 1;
constexpr int kRunError = 2;

struct Options {
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::string> format;
};

void print_table(const kirchhoff::Table& t) {
  for (const auto& row : t.rows) {
    std::cout << "  ";
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::cout << (i ? "  " : "");
      std::visit(
          [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) std::cout << kirchhoff::format_double(v);
            else std::cout << v;
          },
          row[i]);
    }
    std::cout << '\n';
  }
}

int run(kirchhoff::Experiment experiment, const Options& opt) {
  using namespace kirchhoff;
  ScenarioConfig cfg;
  if (opt.config) {
    cfg = load_config(*opt.config);
    const Json raw = Json::parse(std::ifstream(*opt.config));
    if (raw.contains("experiment") && cfg.experiment != experiment)
      throw Error(Errc::ConfigError, "config is tagged '" + std::string(to_string(cfg.experiment)) +
                                         "' but the subcommand is '" + std::string(to_string(experiment)) + "'");
  }
  cfg.experiment = experiment;
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.out) cfg.output.dir = *opt.out;
  if (opt.format) cfg.output.format = parse_format(*opt.format);
  if (opt.tol) {
    Json j = to_json(cfg);
    j["solver"]["tol"] = *opt.tol;
    cfg = parse_config(j);  // revalidates the range
  }

  const ExperimentResult r = run_experiment(cfg);
  const auto files = write_result(r, cfg.output.dir, cfg.output.format);

  for (const auto& [name, table] : r.extra_tables)
    if (name == "constants_ledger") {
      std::cout << "constants\n";
      print_table(table);
    }
  for (const Verdict& v : r.verdicts)
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << ": " << v.detail << '\n';
  std::cout << "wrote " << files.size() << " files to " << cfg.output.dir << " (config "
            << config_hash(cfg) << ")\n";
  return r.all_pass() ? 0 : kVerdictFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kirchhoff equation experiments: life-span continuity, almost global existence, "
               "growth envelopes and randomized verification"};
  app.set_version_flag("--version", std::string(kirchhoff::library_version()));
  app.require_subcommand(1);

  Options opt;
  const std::pair<const char*, const char*> subs[] = {
      {"lsc", "continuous dependence on the data along an epsilon grid"},
      {"age", "guaranteed existence times and life-span lower bounds"},
      {"growth", "growth envelope of the corrected phi-energy"},
      {"verify", "randomized property suites"},
      {"simulate", "integrate the configured data and export the trajectory"}};
  for (const auto& [name, help] : subs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "scenario JSON (see docs/config.md)")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--seed", opt.seed, "RNG seed");
    sub->add_option("--tol", opt.tol, "solver tolerance");
    sub->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  }

  CLI11_PARSE(app, argc, argv);
  const std::string chosen = app.get_subcommands().front()->get_name();
  try {
    return run(kirchhoff::parse_experiment(chosen), opt);
  } catch (const kirchhoff::Error& e) {
    std::cerr << "error [" << kirchhoff::to_string(e.code()) << "]: " << e.what() << '\n';
    return kRunError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRunError;
  }
}
