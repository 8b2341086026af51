// zenospin: drives the radical-pair spin dynamics library from scenario files.
//
//   zenospin <subcommand> --config <path> [--out <prefix>] [--threads <n>]
//   zenospin <subcommand> --paper-figure <2|4|5|6> [--out <prefix>]
//   zenospin validate
//
// Exit codes: 0 success, 1 validation/parse error, 2 numerical error, 3 I/O error.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "zenospin/shipped_scenarios.hpp"
#include "zenospin/zenospin.hpp"

namespace {

enum ExitCode { kOk = 0, kInvalid = 1, kNumerical = 2, kIo = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw zenospin::IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string shipped_scenario(int figure) {
  const std::string wanted = "fig" + std::to_string(figure);
  for (const auto& [name, text] : zenospin::shipped::kScenarios)
    if (name == wanted) return std::string(text);
  throw zenospin::InvalidArgument("no shipped scenario for figure " + std::to_string(figure) +
                                  " (available: 2, 4, 5, 6)");
}

struct CommonArgs {
  std::string config;
  std::string out;
  unsigned threads = 1;
  std::optional<int> figure;
};

int run_task(const std::string& subcommand, zenospin::Task expected, const CommonArgs& args) {
  if (args.config.empty() == !args.figure.has_value())
    throw zenospin::InvalidArgument("give exactly one of --config or --paper-figure");
  const std::string text = args.figure ? shipped_scenario(*args.figure) : read_file(args.config);
  const zenospin::Scenario scenario = zenospin::parse_scenario(text);
  if (scenario.task != expected)
    throw zenospin::InvalidArgument("scenario '" + scenario.name + "' is a " +
                                    std::string(zenospin::to_string(scenario.task)) +
                                    " task, not " + subcommand);
  const auto report = zenospin::run_scenario(scenario, args.out, args.threads);
  std::cout << report.summary << '\n';
  return kOk;
}

int run_validate() {
  bool ok = true;
  for (const auto& r : zenospin::run_validation()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (measured " << r.measured
              << ", tolerance " << r.tolerance << ")\n";
    ok = ok && r.passed;
  }
  std::cout << (ok ? "validate: all checks passed" : "validate: FAILED") << '\n';
  return ok ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radical-pair spin dynamics: Liouvillian spectra, Zeno slow modes, field effects"};
  app.require_subcommand(1);

  const std::map<std::string, std::pair<zenospin::Task, std::string>> tasks{
      {"spectrum", {zenospin::Task::spectrum, "Eigenmodes and slow-mode count at one parameter point"}},
      {"scan-k", {zenospin::Task::branch_scan, "Decay-rate branches over a kS grid"}},
      {"scan-field", {zenospin::Task::field_scan, "Slow-mode counts over a field grid"}},
      {"evolve", {zenospin::Task::evolve, "Singlet probability by RK4 and by mode expansion"}},
      {"deuteration", {zenospin::Task::deuteration, "Four-pair Py/DMA deuteration study"}},
  };

  CommonArgs args;
  for (const auto& [name, task] : tasks) {
    CLI::App* sub = app.add_subcommand(name, task.second);
    sub->add_option("--config", args.config, "Scenario file");
    sub->add_option("--out", args.out, "Output path prefix (default: the scenario's output key)");
    sub->add_option("--threads", args.threads, "Worker threads for grid points")->check(CLI::PositiveNumber);
    sub->add_option("--paper-figure", args.figure, "Load the shipped scenario for figure 2, 4, 5 or 6");
  }
  app.add_subcommand("validate", "Run the built-in invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalid;
  }

  try {
    for (const CLI::App* sub : app.get_subcommands()) {
      if (sub->get_name() == "validate") return run_validate();
      const auto& task = tasks.at(sub->get_name());
      return run_task(sub->get_name(), task.first, args);
    }
  } catch (const zenospin::IoError& e) {
    std::cerr << "zenospin: I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const zenospin::InvalidArgument& e) {
    std::cerr << "zenospin: " << e.what() << '\n';
    return kInvalid;
  } catch (const zenospin::NumericalError& e) {
    std::cerr << "zenospin: numerical error: " << e.what() << '\n';
    return kNumerical;
  }
  return kInvalid;
}
