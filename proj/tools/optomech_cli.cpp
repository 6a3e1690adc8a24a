// optomech: figure presets, parameter sweeps, threshold search and
// feasibility reports from the command line.
//
// Exit codes: 0 success, 1 domain or numerical failure, 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "optomech/config.hpp"
#include "optomech/errors.hpp"
#include "optomech/feasibility.hpp"
#include "optomech/protocol.hpp"
#include "optomech/sweep.hpp"
#include "selftest.hpp"

namespace {

using namespace optomech;

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw ConfigError("cannot write '" + path + "'");
}

std::optional<std::string> non_empty(const std::string& s) {
  return s.empty() ? std::nullopt : std::optional<std::string>(s);
}

struct SpecOptions {
  std::string preset;
  std::string config;
  std::vector<std::string> overrides;

  void attach(CLI::App* cmd) {
    cmd->add_option("--preset", preset, "figure preset")->check(CLI::IsMember(preset_names()));
    cmd->add_option("--config", config, "key = value file");
    cmd->add_option("--set", overrides, "key=value override (repeatable)");
  }

  SweepSpec resolve() const {
    return resolve_sweep_spec(non_empty(preset),
                              config.empty() ? std::nullopt : std::optional<std::string>(read_file(config)),
                              overrides);
  }
};

int run_sweep_command(const SpecOptions& opts, const std::string& out_path, int workers) {
  const SweepSpec spec = opts.resolve();
  const SweepResult res = run_sweep(spec, workers);

  std::string log;
  for (const auto& w : res.warnings.messages) log += w + "\n";
  if (out_path.empty()) {
    std::cout << res.csv;
    std::cerr << log;
  } else {
    write_file(out_path, res.csv);
    write_file(out_path + ".log", log);
  }
  return 0;
}

int run_threshold_command(const SpecOptions& opts, const std::string& param, const std::string& lo,
                          const std::string& hi, const std::string& tol) {
  const SweepSpec spec = opts.resolve();
  const double value = find_threshold(spec.base, param, parse_double(lo, "--lo"), parse_double(hi, "--hi"),
                                      parse_double(tol, "--tol"));
  std::cout << format_sig(value) << "\n";
  return 0;
}

int run_feasibility_command(const std::string& preset_name, const std::string& config,
                            const std::vector<std::string>& overrides) {
  FeasibilityInput in;
  if (preset_name == "nanobeam") in = nanobeam_preset();
  else if (preset_name == "trampoline") in = trampoline_preset();
  if (!config.empty()) apply_feasibility_settings(in, parse_key_values(read_file(config)));
  std::vector<KeyValue> kvs;
  for (const auto& o : overrides) kvs.push_back(parse_assignment(o));
  apply_feasibility_settings(in, kvs);
  std::cout << format_report(feasibility(in));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Micro-macro optomechanical entanglement: sweeps, thresholds and feasibility"};
  app.require_subcommand(1);

  SpecOptions sweep_opts;
  std::string out_path;
  int workers = 1;
  auto* sweep = app.add_subcommand("sweep", "evaluate a preset or configured sweep and print CSV");
  sweep_opts.attach(sweep);
  sweep->add_option("--out", out_path, "CSV output file (warnings go to <out>.log)");
  sweep->add_option("--parallel", workers, "worker threads")->check(CLI::PositiveNumber);

  SpecOptions thr_opts;
  std::string param, lo, hi, tol = "1e-5";
  auto* threshold = app.add_subcommand("threshold", "bisect a parameter for the entanglement boundary");
  thr_opts.attach(threshold);
  threshold->add_option("--param", param, "parameter to bisect")->required();
  threshold->add_option("--lo", lo, "lower bracket end")->required();
  threshold->add_option("--hi", hi, "upper bracket end")->required();
  threshold->add_option("--tol", tol, "bracket width at which bisection stops");

  std::string feas_preset, feas_config;
  std::vector<std::string> feas_overrides;
  auto* feas = app.add_subcommand("feasibility", "derive channel parameters from hardware numbers");
  feas->add_option("--preset", feas_preset, "built-in device")->check(CLI::IsMember({"nanobeam", "trampoline"}));
  feas->add_option("--config", feas_config, "key = value file");
  feas->add_option("--set", feas_overrides, "key=value override (repeatable)");

  auto* self = app.add_subcommand("selftest", "run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sweep) {
      if (sweep_opts.preset.empty() && sweep_opts.config.empty())
        throw ConfigError("sweep needs --preset or --config");
      return run_sweep_command(sweep_opts, out_path, workers);
    }
    if (*threshold) return run_threshold_command(thr_opts, param, lo, hi, tol);
    if (*feas) {
      if (feas_preset.empty() && feas_config.empty()) throw ConfigError("feasibility needs --preset or --config");
      return run_feasibility_command(feas_preset, feas_config, feas_overrides);
    }
    if (*self) return selftest::run(std::cout) ? 0 : kExitDomain;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
