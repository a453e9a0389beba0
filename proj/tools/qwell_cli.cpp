// qwell: bound states of a quaternionic spherical square well.
//
//   qwell solve   --kappa-c 15.70796327 --kappa-q 7.85398163 --format json
//   qwell compare --v1 246.74 --v2 30 --v3 40 --a 1
//   qwell curves  --kappa-c 15.70796327 --kappa-q 15.70796327 --format csv --output curves.csv
//   qwell verify  [--validate-tol 1e-10]
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "qwell/commands.hpp"
#include "qwell/errors.hpp"

namespace {

constexpr int kExitUsage = 2;

struct Flags {
  std::map<std::string, std::string> values;
  std::string config_path;
};

void add_well_flags(CLI::App& cmd, Flags& flags) {
  static const std::pair<const char*, const char*> kOptions[] = {
      {"kappa-c", "a sqrt(V1), complex well strength"},
      {"kappa-q", "a (V2^2 + V3^2)^(1/4), quaternionic strength"},
      {"v1", "potential i-component (excludes the kappa pair)"},
      {"v2", "potential j-component"},
      {"v3", "potential k-component"},
      {"a", "well radius (default 1)"},
      {"grid", "scan points or curve samples; 0 = default"},
      {"refine-tol", "bisection tolerance on x (default 1e-12)"},
      {"validate-tol", "root validation tolerance; reality tolerance for verify"},
      {"format", "output format (default json)"},
      {"output", "write to this file instead of stdout"},
  };
  for (const auto& [name, help] : kOptions) {
    auto* opt = cmd.add_option("--" + std::string(name), flags.values[name], help);
    if (std::string(name) == "format") opt->check(CLI::IsMember({"json", "csv"}));
  }
  cmd.add_option("--config", flags.config_path, "flat key=value file; flags take precedence");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bound states of a particle in a quaternionic spherical square well"};
  app.require_subcommand(1);

  Flags flags;
  std::map<std::string, CLI::App*> commands;
  commands["solve"] = app.add_subcommand("solve", "bound-state energies and coefficients");
  commands["compare"] = app.add_subcommand("compare", "complex, quaternionic and trial-complex spectra");
  commands["curves"] = app.add_subcommand("curves", "sampled curves of the quantization condition");
  commands["verify"] = app.add_subcommand("verify", "run the invariant suite");
  for (auto& [name, cmd] : commands) add_well_flags(*cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  qwell::RunConfig config;
  try {
    for (auto& [name, cmd] : commands) {
      if (cmd->parsed()) config.mode = qwell::parse_mode(name);
    }
    if (!flags.config_path.empty()) {
      std::ifstream in(flags.config_path);
      if (!in) throw qwell::UsageError("cannot read config file " + flags.config_path);
      std::stringstream buffer;
      buffer << in.rdbuf();
      qwell::apply_config_text(config, buffer.str());
      // The subcommand on the command line wins over a mode in the file.
      for (auto& [name, cmd] : commands) {
        if (cmd->parsed()) config.mode = qwell::parse_mode(name);
      }
    }
    for (auto& [name, cmd] : commands) {
      if (!cmd->parsed()) continue;
      for (const auto& [key, value] : flags.values) {
        if (cmd->count("--" + key) > 0) qwell::apply_setting(config, key, value);
      }
    }
    const qwell::Document doc = qwell::run(config);
    const std::string text = qwell::render(doc, config.format);
    if (config.output_path) {
      std::ofstream out(*config.output_path, std::ios::binary);
      if (!out) throw qwell::UsageError("cannot write " + *config.output_path);
      out << text;
    } else {
      std::cout << text;
    }
    return doc.exit_code;
  } catch (const qwell::UsageError& e) {
    std::cerr << "qwell: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qwell::DomainError& e) {
    std::cerr << "qwell: " << e.what() << "\n";
    return kExitUsage;
  }
}
