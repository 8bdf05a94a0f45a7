// Command-line front end: solve, bench and validate.
#include <CLI11.hpp>

#include <iostream>

#include "bubbles/error.hpp"
#include "commands.hpp"
#include "output.hpp"

using namespace bubbles;
using namespace bubbles::app;

namespace {

void report_error(const std::string& field, const std::string& code, const std::string& message) {
  std::cerr << "error: " << message << '\n';
  json j{{"error", {{"code", code}, {"message", message}}}};
  if (!field.empty()) j["error"]["field"] = field;
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady multi-bubble Hele-Shaw flow via slit conformal maps"};
  app.require_subcommand(1);

  std::string out_dir;
  bool dump_config = false;
  bool quiet = false;
  double t_lambda = 0.0;
  app.add_option("--out-dir", out_dir, "Output directory (overrides outputs.directory)");
  app.add_flag("--dump-config", dump_config, "Print the normalized config and exit");
  app.add_flag("-q,--quiet", quiet, "Only report failures");
  auto* lambda_opt =
      app.add_option("--debug-t-lambda", t_lambda, "Debug: replace the factor 1-U in T = (1-U) Phi_h");

  std::string solve_path, bench_path;
  auto* solve = app.add_subcommand("solve", "Solve one configuration and write outputs");
  solve->add_option("config", solve_path, "JSON run configuration")->required();
  auto* bench = app.add_subcommand("bench", "Time both map solves over a list of n");
  bench->add_option("config", bench_path, "JSON bench configuration")->required();
  auto* validate = app.add_subcommand("validate", "Run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kBadInput;
  }

  CommandOptions options;
  options.quiet = quiet;
  if (!out_dir.empty()) options.out_dir = out_dir;
  if (lambda_opt->count() > 0) options.t_lambda = t_lambda;

  try {
    if (solve->parsed()) {
      const RunConfig config = parse_run_config(read_json_file(solve_path));
      if (dump_config) {
        std::cout << to_json(config).dump(2) << '\n';
        return kSuccess;
      }
      return run_solve(config, options, std::cout);
    }
    if (bench->parsed()) {
      const std::filesystem::path path(bench_path);
      const BenchConfig config = parse_bench_config(read_json_file(path), path.parent_path());
      if (dump_config) {
        std::cout << to_json(config).dump(2) << '\n';
        return kSuccess;
      }
      return run_bench(config, options, std::cout);
    }
    if (validate->parsed()) return run_validate(options, std::cout);
  } catch (const ConfigError& e) {
    report_error(e.field(), e.code(), e.what());
    return kBadInput;
  } catch (const Error& e) {
    const ErrorCode code = e.code();
    report_error("", std::string(to_string(code)), e.what());
    return code == ErrorCode::NonConvergence || code == ErrorCode::BreakdownError ? kNonConvergence
                                                                                  : kBadInput;
  } catch (const std::exception& e) {
    report_error("", "RuntimeError", e.what());
    return kBadInput;
  }
  std::cerr << app.help();
  return kBadInput;
}
