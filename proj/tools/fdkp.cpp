// Command-line front end. Usage: fdkp <subcommand> [--config PATH | PATH] [--jobs N] [--out DIR]

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>

#include "fdkp/cli.hpp"
#include "fdkp/error.hpp"

namespace {

void print_error(const std::exception& e) {
  nlohmann::ordered_json record;
  if (const auto* err = dynamic_cast<const fdkp::Error*>(&e)) {
    record["error"] = std::string(fdkp::to_string(err->code()));
  } else {
    record["error"] = "Internal";
  }
  record["message"] = e.what();
  std::cerr << record.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-dispersion KP simulation and line-soliton stability tools", "fdkp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FDKP_VERSION);

  std::string config_path;
  std::string out_dir;
  int jobs = 1;
  for (const auto& name : fdkp::subcommand_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("config,--config", config_path, "configuration file");
    sub->add_option("--jobs", jobs, "parallel jobs for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory (default: output.dir, then ./out)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    fdkp::CommandContext ctx;
    ctx.config = config_path.empty() ? fdkp::Config::parse("") : fdkp::Config::load(config_path);
    ctx.out_dir = out_dir.empty() ? ctx.config.get_string("output.dir", "out") : out_dir;
    ctx.jobs = jobs;
    ctx.report = &std::cout;
    fdkp::run_command(command, ctx);
  } catch (const std::exception& e) {
    print_error(e);
    return fdkp::exit_code_for(e);
  }
  return 0;
}
