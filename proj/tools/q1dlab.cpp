#include "q1dlab/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

int main(int argc, char** argv) {
  using namespace q1dlab;
  CLI::App app{"q1dlab: transfer matrices, noise explosion and eigenvalue statistics on long boxes"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "q1dlab-out";
  unsigned threads = default_threads();

  for (const auto& [name, cmd] : cli::commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--seed", seed, "master seed (overrides [run] seed)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (default: Q1DLAB_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const Config cfg = Config::load(config_path);
    const RunOutput out = cli::run_command(command, cfg, seed, threads);
    out.write(out_dir);
    for (const auto& f : out.files()) std::cout << out_dir << "/" << f.name << "\n";
    return cli::kExitOk;
  } catch (const Error& e) {
    std::cerr << "q1dlab " << command << ": " << e.what() << "\n";
    return cli::exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "q1dlab " << command << ": " << e.what() << "\n";
    return 1;
  }
}
