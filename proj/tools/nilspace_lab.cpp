// nilspace-lab: run one experiment described by a JSON config.
//
//   nilspace-lab --config exp.json [--seed N] [--threads N] [--budget-maps N]
//                [--out report.json] [--format structured|csv]
//
// Exit codes: 0 success, 1 bad config, 2 structural failure, 3 resource limit.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nilspace/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exhaustive experiments on small nilspaces and phase polynomials"};
  std::string config_path, out_path, format = "structured";
  std::optional<std::uint64_t> seed, budget;
  std::optional<unsigned> threads;
  app.add_option("--config", config_path, "experiment config (JSON); '-' reads stdin")->required();
  app.add_option("--seed", seed, "seed recorded in the report and used by random steps");
  app.add_option("--threads", threads, "worker pool cap (0 = hardware concurrency)");
  app.add_option("--budget-maps", budget, "candidate budget for searches");
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"structured", "csv"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  nilspace::harness::Json config;
  try {
    std::stringstream text;
    if (config_path == "-") {
      text << std::cin.rdbuf();
    } else {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "nilspace-lab: cannot read " << config_path << "\n";
        return 1;
      }
      text << in.rdbuf();
    }
    config = nilspace::harness::Json::parse(text.str());
  } catch (const std::exception& e) {
    std::cerr << "nilspace-lab: config is not valid JSON: " << e.what() << "\n";
    return 1;
  }

  const auto result = nilspace::harness::run(config, {seed, budget, threads});
  const std::string body = format == "csv" ? nilspace::harness::results_csv(result.report)
                                           : result.report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "nilspace-lab: cannot write " << out_path << "\n";
      return 1;
    }
    out << body;
  }
  if (result.report.contains("error"))
    std::cerr << "nilspace-lab: " << result.report["status"].get<std::string>() << ": "
              << result.report["error"].value("message", "") << "\n";
  return result.exit_code;
}
