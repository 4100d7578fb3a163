#include <iostream>

#include "CLI11.hpp"
#include "varprin/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sublevel-set variational toolkit: thresholds, constructive minimizers, critical points"};
  varprin::CliOptions opts;
  std::string config;
  std::uint64_t seed = 0;
  std::string output;
  std::string format;
  auto* config_opt = app.add_option("--config", config, "INI config file");
  auto* seed_opt = app.add_option("--seed", seed, "seed (overrides the config)");
  auto* output_opt = app.add_option("--output", output, "output path prefix");
  auto* format_opt = app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--serial", opts.serial, "run single-threaded");
  app.add_flag("--list-builtins", opts.list_builtins, "list builtin functionals, pairs and potentials");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : varprin::kExitValidation;
  }
  if (*config_opt) opts.config_path = config;
  if (*seed_opt) opts.seed = seed;
  if (*output_opt) opts.output = output;
  if (*format_opt) opts.format = format;
  return varprin::run(opts, std::cout, std::cerr);
}
