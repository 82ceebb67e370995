#pragma once

// Subcommand implementations behind the `ncw` executable. Each returns the
// process exit code and writes human-readable output to `out`, diagnostics
// to `err`.

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ncw/battle.hpp"
#include "ncw/core.hpp"
#include "ncw/io/csv.hpp"
#include "ncw/io/scenario_file.hpp"
#include "ncw/oracle.hpp"

namespace ncw::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_invalid = 1,  ///< parse or validation failure, bad arguments
  exit_violation = 2,
  exit_io = 3,
};

namespace detail {

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const io::parse_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_invalid;
  } catch (const io::io_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_io;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_invalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_invalid;
  }
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw io::io_error("cannot write " + path.string());
  return f;
}

inline void close_output(std::ofstream& f, const std::filesystem::path& path) {
  f.close();
  if (!f) throw io::io_error("failed writing " + path.string());
}

}  // namespace detail

/// "0.1,0.5,0.9" -> {0.1, 0.5, 0.9}. Throws std::invalid_argument.
inline std::vector<double> parse_lambda_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  ss.imbue(std::locale::classic());
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad lambda '" + item + "'");
    }
    if (used != item.size()) throw std::invalid_argument("bad lambda '" + item + "'");
    if (!(v >= 0 && v <= 1)) throw std::invalid_argument("lambda must lie in [0, 1]");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty lambda list");
  return out;
}

inline std::string summarize(const Trajectory& traj) {
  const auto& f = traj.final_state();
  std::string s = "outcome=" + std::string(to_string(traj.outcome));
  s += " t=" + io::format_short(f.t) + " b=" + io::format_short(f.b) + " r=" + io::format_short(f.r) +
       " n=" + io::format_short(f.n) + " a=" + io::format_short(f.a);
  s += " stage_starts=0";
  for (std::size_t i = 1; i < traj.stage_allocations.size(); ++i) s += "," + io::format_short(traj.events[i - 1].time);
  s += " allocations=";
  for (std::size_t i = 0; i < traj.stage_allocations.size(); ++i)
    s += (i ? "," : "") + io::format_allocation(traj.stage_allocations[i]);
  return s;
}

inline int cmd_rates(const std::filesystem::path& file, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto f = io::load_scenario(file);
    const auto rates = threat_rates(f.scenario);
    out << "b1=" << io::format_short(rates.b1) << " b2=" << io::format_short(rates.b2)
        << " b3=" << io::format_short(rates.b3)
        << ", allocation=" << io::format_allocation(optimal_allocation(rates)) << '\n';
    return int(exit_ok);
  });
}

inline int cmd_simulate(const std::filesystem::path& file, const std::filesystem::path& csv, std::ostream& out,
                        std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto f = io::load_scenario(file);
    const auto traj = run_battle(f.scenario, f.strategy, f.integrator);
    auto csv_out = detail::open_output(csv);
    io::write_timeseries(csv_out, traj);
    detail::close_output(csv_out, csv);
    out << summarize(traj) << '\n';
    return int(exit_ok);
  });
}

/// The base file's strategy is compared against each strategy file's. All
/// files must describe the same scenario.
inline int cmd_compare(const std::filesystem::path& file, const std::vector<std::filesystem::path>& strategy_files,
                       const std::filesystem::path& csv, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (strategy_files.empty()) throw std::invalid_argument("compare needs at least one strategy file");
    const auto base = io::load_scenario(file);
    std::vector<StrategyScript> scripts{base.strategy};
    std::vector<std::string> names{file.stem().string()};
    for (const auto& p : strategy_files) {
      const auto other = io::load_scenario(p);
      if (!(other.scenario == base.scenario))
        throw std::invalid_argument("scenario in " + p.string() + " does not match " + file.string());
      scripts.push_back(other.strategy);
      std::string name = p.stem().string();
      for (const auto& n : names)
        if (n == name) name += "_" + std::to_string(names.size());
      names.push_back(name);
    }

    const auto rep = compare_strategies(base.scenario, scripts, base.integrator);
    auto csv_out = detail::open_output(csv);
    io::write_comparison(csv_out, rep, names);
    detail::close_output(csv_out, csv);

    out << "base=" << names[0] << " outcome=" << to_string(rep.outcomes[0])
        << " final_b=" << io::format_short(rep.final_states[0].b) << '\n';
    for (std::size_t i = 1; i < scripts.size(); ++i) {
      const char* verdict = rep.outcomes[i] != rep.outcomes[0] ? "different outcome"
                            : rep.dominated[i]                ? "dominated"
                                                              : "not dominated";
      out << "contrast=" << names[i] << " outcome=" << to_string(rep.outcomes[i])
          << " final_b=" << io::format_short(rep.final_states[i].b) << " margin=" << io::format_short(rep.margins[i])
          << " verdict=" << verdict << '\n';
    }
    return int(exit_ok);
  });
}

inline int cmd_verify(const std::filesystem::path& file, int resolution, const std::vector<double>& lambdas,
                      std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
    const auto f = io::load_scenario(file);
    const SimplexGrid grid(resolution);

    const auto dom = verify_dominance(f.scenario, grid, f.integrator);
    out << "dominance: " << (dom.passed() ? "pass" : "FAIL") << " grid=" << grid.size()
        << " vertex=" << io::format_allocation(dom.theorem_vertex) << " horizon=" << io::format_short(dom.horizon)
        << " worst_margin=" << io::format_short(dom.worst_margin)
        << " worst_competitor=" << io::format_allocation(dom.worst_competitor) << '\n';

    const auto sc = verify_scalarization_minimum(f.scenario, grid, lambdas);
    for (const auto& c : sc.checks) {
      out << "scalarization lambda=" << io::format_short(c.lambda) << ": " << (c.ok ? "pass" : "FAIL")
          << " grid_min=" << io::format_short(c.grid_min) << " at " << io::format_allocation(c.grid_argmin)
          << " vertex_value=" << io::format_short(c.theorem_value) << '\n';
    }
    return int(dom.passed() && sc.passed() ? exit_ok : exit_violation);
  });
}

}  // namespace ncw::cli
