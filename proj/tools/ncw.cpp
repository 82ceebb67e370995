#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "ncw/cli/commands.hpp"
#include "ncw/oracle.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Optimal fire allocation for the mixed network-centric Lanchester battle"};
  app.require_subcommand(1);

  std::string file;
  std::string csv;

  auto* rates = app.add_subcommand("rates", "Print threatening rates and the first-stage allocation");
  rates->add_option("file", file, "Scenario file")->required();

  auto* simulate = app.add_subcommand("simulate", "Run a battle and write its time series as CSV");
  simulate->add_option("file", file, "Scenario file")->required();
  simulate->add_option("-o,--output", csv, "CSV output path")->required();

  std::vector<std::string> strategies;
  auto* compare = app.add_subcommand("compare", "Compare the file's strategy against others on B(t)");
  compare->add_option("file", file, "Scenario file holding the base strategy")->required();
  compare->add_option("-s,--strategy", strategies, "Scenario file holding a contrast strategy")->required();
  compare->add_option("-o,--output", csv, "CSV output path")->required();

  int grid = 10;
  std::string lambdas;
  auto* verify = app.add_subcommand("verify", "Brute-force check of the vertex-optimality rule");
  verify->add_option("file", file, "Scenario file")->required();
  verify->add_option("--grid", grid, "Simplex grid resolution k")->capture_default_str();
  verify->add_option("--lambdas", lambdas, "Comma-separated weights in [0,1] (default 0.1,...,0.9)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ncw::cli::exit_invalid;
  }

  if (*rates) return ncw::cli::cmd_rates(file, std::cout, std::cerr);
  if (*simulate) return ncw::cli::cmd_simulate(file, csv, std::cout, std::cerr);
  if (*compare) {
    std::vector<std::filesystem::path> paths(strategies.begin(), strategies.end());
    return ncw::cli::cmd_compare(file, paths, csv, std::cout, std::cerr);
  }
  if (*verify) {
    std::vector<double> ls = ncw::default_lambdas<double>();
    if (!lambdas.empty()) {
      try {
        ls = ncw::cli::parse_lambda_list(lambdas);
      } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ncw::cli::exit_invalid;
      }
    }
    return ncw::cli::cmd_verify(file, grid, ls, std::cout, std::cerr);
  }
  return ncw::cli::exit_invalid;
}
