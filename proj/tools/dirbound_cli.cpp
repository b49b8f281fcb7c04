#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dirbound/config.hpp"
#include "dirbound/report.hpp"
#include "dirbound/runner.hpp"

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dirbound::Error(dirbound::ErrorCode::kIo, path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet-type norms, de Branges-Rovnyak kernels and composition bounds"};
  app.require_subcommand(1, 1);

  std::string config_path;
  dirbound::CliOverrides overrides;
  std::string out_dir;
  std::size_t refine = 0;
  std::uint64_t seed = 0;

  for (const char* name :
       {"norm", "kernel-sup", "rank-check", "equivalence", "bound-check", "selfmap-check"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--refine", refine, "scale base rule sizes by factor^k");
    sub->add_option("--seed", seed, "seed for random interior sampling");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dirbound::kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--out")) overrides.out_dir = out_dir;
  if (sub->count("--refine")) overrides.refine = refine;
  if (sub->count("--seed")) overrides.seed = seed;

  dirbound::RunConfig config;
  try {
    const auto command = dirbound::command_from_name(sub->get_name());
    config = dirbound::parse_config(read_text(config_path), command, overrides);
  } catch (const dirbound::Error& e) {
    std::cerr << e.what() << '\n';
    return dirbound::kExitConfig;
  }

  dirbound::RunResult result = dirbound::run(config);
  try {
    const auto files = dirbound::emit_reports(result.report, config.out_dir);
    std::cout << dirbound::to_csv(result.report.rows);
    std::cerr << "wrote " << files.csv.string() << ", " << files.trace.string();
    for (const auto& p : files.plots) std::cerr << ", " << p.string();
    std::cerr << '\n';
  } catch (const dirbound::Error& e) {
    std::cerr << e.what() << '\n';
    return dirbound::kExitConfig;
  }
  if (!result.message.empty()) std::cerr << result.message << '\n';
  return result.exit_code;
}
