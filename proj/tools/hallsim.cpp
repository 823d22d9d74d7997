#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <sstream>

#include "hallsim/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Schroedinger-Chern-Simons Hall transport simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::vector<std::string> sets;

  for (const char* name : {"sweep", "staircase", "simulate", "edge", "quantize"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output path")->required();
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--set", sets, "override as key=value (repeatable)");
  }
  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + config_path + "'");
    std::stringstream text;
    text << in.rdbuf();

    hallsim::RunConfig cfg = hallsim::parse_config(text.str(), sets);
    cfg.command = hallsim::command_from_string(app.get_subcommands().front()->get_name());
    cfg.params_file = config_path;
    cfg.output = out_path;
    cfg.format = hallsim::output_format_from_string(format);
    cfg.overrides = sets;
    return hallsim::run_command(cfg);
  } catch (const hallsim::ConfigError& e) {
    fmt::print(stderr, "{}: {}\n", config_path, e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
