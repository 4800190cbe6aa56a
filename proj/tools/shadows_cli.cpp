#include "harness.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace shadows::harness;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

int report_config_error(const ConfigError& e) {
  json diag{{"error", "config"}, {"message", e.what()}};
  if (e.line() > 0) {
    diag["line"] = e.line();
    diag["column"] = e.column();
  }
  std::cerr << diag.dump() << '\n';
  return kConfigError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shadow position, zonotope and slab-family experiments"};
  app.require_subcommand(1);
  std::string config_path, out_dir = ".", format = "json";
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "overrides the config seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv", "both"}));
  for (const auto& [name, _] : subcommands()) app.add_subcommand(name)->fallthrough();
  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

  ExperimentConfig config;
  try {
    if (!config_path.empty()) config = load_config(config_path);
    if (!config.experiment.empty() && config.experiment != sub)
      throw ConfigError("config is for \"" + config.experiment + "\", not \"" + sub + "\"");
  } catch (const ConfigError& e) {
    return report_config_error(e);
  }
  if (seed) config.seed = *seed;

  const auto start = std::chrono::steady_clock::now();
  const RunResult result = run(sub, config);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    fs::create_directories(out_dir);
    const fs::path base = fs::path(out_dir) / sub;
    if (format != "csv" || !result.table) write_file(base.string() + ".json", result.report.dump(2) + "\n");
    if (format != "json" && result.table) write_file(base.string() + ".csv", result.table->to_csv());
    write_file(base.string() + ".timing.json", json{{"experiment", sub}, {"wall_seconds", wall}}.dump(2) + "\n");
  } catch (const ConfigError& e) {
    return report_config_error(e);
  } catch (const fs::filesystem_error& e) {
    return report_config_error(ConfigError(e.what()));
  }
  if (result.report.contains("error")) std::cerr << result.report["error"].dump() << '\n';
  std::cout << sub << ": " << (result.exit_code == kPass ? "pass" : "FAIL") << " -> " << (fs::path(out_dir) / sub).string()
            << ".*\n";
  return result.exit_code;
}
