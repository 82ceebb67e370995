#pragma once

// YAML scenario files:
//
//   parameters: {alpha_c, alpha_d, gamma_a, beta_r, beta_n, beta_a}
//   initial:    {b0, r0, n0, a0}
//   strategy:   {mode: greedy | scripted, stages: [[pi1, pi2, pi3], ...]}   # optional
//   integrator: {step, event_tolerance, max_time}                           # optional
//
// Unknown keys are rejected by name.

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ncw/battle.hpp"
#include "ncw/core.hpp"
#include "ncw/integrator.hpp"

namespace ncw::io {

/// Malformed or invalid scenario document. `key` is the dotted path of the
/// offending entry and `line` is 1-based (0 when unknown).
class parse_error : public std::runtime_error {
 public:
  parse_error(std::string key, int line, const std::string& what)
      : std::runtime_error(format(key, line, what)), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& key, int line, const std::string& what) {
    std::string out;
    if (!key.empty()) out += "key '" + key + "'";
    if (line > 0) out += (out.empty() ? "line " : " (line ") + std::to_string(line) + (key.empty() ? "" : ")");
    if (!out.empty()) out += ": ";
    return out + what;
  }

  std::string key_;
  int line_;
};

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioFile {
  Scenario scenario;
  StrategyScript strategy = StrategyScript::greedy();
  IntegratorConfig integrator;
  bool has_strategy = false;

  bool operator==(const ScenarioFile&) const = default;
};

namespace detail {

inline int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

inline void reject_unknown(const YAML::Node& map, const std::string& prefix, const std::set<std::string>& allowed) {
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key))
      throw parse_error(prefix + key, line_of(kv.first), "unknown key");
  }
}

inline YAML::Node require_map(const YAML::Node& parent, const std::string& key, int parent_line) {
  const YAML::Node n = parent[key];
  if (!n) throw parse_error(key, parent_line, "missing section");
  if (!n.IsMap()) throw parse_error(key, line_of(n), "expected a mapping");
  return n;
}

inline double read_number(const YAML::Node& map, const std::string& section, const std::string& key) {
  const YAML::Node n = map[key];
  const std::string path = section + "." + key;
  if (!n) throw parse_error(path, line_of(map), "missing value");
  if (!n.IsScalar()) throw parse_error(path, line_of(n), "expected a number");
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    throw parse_error(path, line_of(n), "expected a number, got '" + n.Scalar() + "'");
  }
}

inline std::optional<double> read_optional_number(const YAML::Node& map, const std::string& section,
                                                  const std::string& key) {
  if (!map[key]) return std::nullopt;
  return read_number(map, section, key);
}

// Maps a Scenario::validate message onto the key that caused it.
inline std::string scenario_key_for(const std::string& message) {
  static const char* const params[] = {"alpha_c", "alpha_d", "gamma_a", "beta_r", "beta_n", "beta_a"};
  static const char* const initial[] = {"b0", "r0", "n0", "a0"};
  for (const char* k : params)
    if (message.rfind(k, 0) == 0) return std::string("parameters.") + k;
  for (const char* k : initial)
    if (message.rfind(k, 0) == 0) return std::string("initial.") + k;
  return {};
}

}  // namespace detail

inline ScenarioFile parse_scenario(const std::string& text) {
  YAML::Node loaded;
  try {
    loaded = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw parse_error("", e.mark.line + 1, e.msg);
  }
  const YAML::Node root = loaded;
  if (!root.IsMap()) throw parse_error("", detail::line_of(root), "scenario document must be a mapping");
  detail::reject_unknown(root, "", {"parameters", "initial", "strategy", "integrator"});

  ScenarioFile out;
  const YAML::Node params = detail::require_map(root, "parameters", detail::line_of(root));
  detail::reject_unknown(params, "parameters.", {"alpha_c", "alpha_d", "gamma_a", "beta_r", "beta_n", "beta_a"});
  auto& s = out.scenario;
  s.alpha_c = detail::read_number(params, "parameters", "alpha_c");
  s.alpha_d = detail::read_number(params, "parameters", "alpha_d");
  s.gamma_a = detail::read_number(params, "parameters", "gamma_a");
  s.beta_r = detail::read_number(params, "parameters", "beta_r");
  s.beta_n = detail::read_number(params, "parameters", "beta_n");
  s.beta_a = detail::read_number(params, "parameters", "beta_a");

  const YAML::Node init = detail::require_map(root, "initial", detail::line_of(root));
  detail::reject_unknown(init, "initial.", {"b0", "r0", "n0", "a0"});
  s.b0 = detail::read_number(init, "initial", "b0");
  s.r0 = detail::read_number(init, "initial", "r0");
  s.n0 = detail::read_number(init, "initial", "n0");
  s.a0 = detail::read_number(init, "initial", "a0");

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    const std::string key = detail::scenario_key_for(e.what());
    int line = 0;
    if (auto dot = key.find('.'); dot != std::string::npos) {
      const YAML::Node section = root[key.substr(0, dot)];
      line = detail::line_of(section[key.substr(dot + 1)]);
    } else {
      line = detail::line_of(params["alpha_d"]);
    }
    throw parse_error(key.empty() ? "parameters.alpha_d" : key, line, e.what());
  }

  if (const YAML::Node strat = root["strategy"]) {
    if (!strat.IsMap()) throw parse_error("strategy", detail::line_of(strat), "expected a mapping");
    detail::reject_unknown(strat, "strategy.", {"mode", "stages"});
    const YAML::Node mode = strat["mode"];
    if (!mode || !mode.IsScalar()) throw parse_error("strategy.mode", detail::line_of(strat), "missing mode");
    const std::string m = mode.Scalar();
    if (m == "greedy") {
      if (strat["stages"]) throw parse_error("strategy.stages", detail::line_of(strat["stages"]), "greedy mode takes no stages");
      out.strategy = StrategyScript::greedy();
    } else if (m == "scripted") {
      const YAML::Node stages = strat["stages"];
      if (!stages || !stages.IsSequence() || stages.size() == 0)
        throw parse_error("strategy.stages", detail::line_of(stages ? stages : strat),
                          "scripted mode needs a non-empty list of stages");
      std::vector<Allocation> allocs;
      for (const auto& st : stages) {
        if (!st.IsSequence() || st.size() != 3)
          throw parse_error("strategy.stages", detail::line_of(st), "each stage must be [pi1, pi2, pi3]");
        try {
          allocs.push_back(Allocation::make(st[0].as<double>(), st[1].as<double>(), st[2].as<double>()));
        } catch (const YAML::Exception&) {
          throw parse_error("strategy.stages", detail::line_of(st), "allocation entries must be numbers");
        } catch (const std::invalid_argument& e) {
          throw parse_error("strategy.stages", detail::line_of(st), e.what());
        }
      }
      out.strategy = StrategyScript::scripted(std::move(allocs));
    } else {
      throw parse_error("strategy.mode", detail::line_of(mode), "expected 'greedy' or 'scripted', got '" + m + "'");
    }
    out.has_strategy = true;
  }

  if (const YAML::Node integ = root["integrator"]) {
    if (!integ.IsMap()) throw parse_error("integrator", detail::line_of(integ), "expected a mapping");
    detail::reject_unknown(integ, "integrator.", {"step", "event_tolerance", "max_time"});
    auto& c = out.integrator;
    if (auto v = detail::read_optional_number(integ, "integrator", "step")) c.step = *v;
    if (auto v = detail::read_optional_number(integ, "integrator", "event_tolerance")) c.event_tolerance = *v;
    if (auto v = detail::read_optional_number(integ, "integrator", "max_time")) c.max_time = *v;
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw parse_error("integrator", detail::line_of(integ), e.what());
    }
  }
  return out;
}

inline ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

inline std::string serialize_scenario(const ScenarioFile& f) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  const auto& s = f.scenario;
  out << YAML::BeginMap;
  out << YAML::Key << "parameters" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "alpha_c" << YAML::Value << s.alpha_c;
  out << YAML::Key << "alpha_d" << YAML::Value << s.alpha_d;
  out << YAML::Key << "gamma_a" << YAML::Value << s.gamma_a;
  out << YAML::Key << "beta_r" << YAML::Value << s.beta_r;
  out << YAML::Key << "beta_n" << YAML::Value << s.beta_n;
  out << YAML::Key << "beta_a" << YAML::Value << s.beta_a;
  out << YAML::EndMap;
  out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "b0" << YAML::Value << s.b0;
  out << YAML::Key << "r0" << YAML::Value << s.r0;
  out << YAML::Key << "n0" << YAML::Value << s.n0;
  out << YAML::Key << "a0" << YAML::Value << s.a0;
  out << YAML::EndMap;
  if (f.has_strategy) {
    out << YAML::Key << "strategy" << YAML::Value << YAML::BeginMap;
    if (f.strategy.mode == PolicyMode::greedy_optimal) {
      out << YAML::Key << "mode" << YAML::Value << "greedy";
    } else {
      out << YAML::Key << "mode" << YAML::Value << "scripted";
      out << YAML::Key << "stages" << YAML::Value << YAML::BeginSeq;
      for (const auto& a : f.strategy.stages)
        out << YAML::Flow << YAML::BeginSeq << a.pi1() << a.pi2() << a.pi3() << YAML::EndSeq;
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;
  }
  out << YAML::Key << "integrator" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "step" << YAML::Value << f.integrator.step;
  out << YAML::Key << "event_tolerance" << YAML::Value << f.integrator.event_tolerance;
  out << YAML::Key << "max_time" << YAML::Value << f.integrator.max_time;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace ncw::io
