#include "sladm_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sladm/expression.hpp"

namespace sladm::cli {

namespace {

constexpr std::string_view kExample6 = "builtin:example6";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw ConfigError(key + ": not a number: " + v);
  return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out{};
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw ConfigError(key + ": not an integer: " + v);
  return out;
}

realline::RealFunction parse(const std::string& what, const std::string& text) {
  try {
    return realline::parse_function(text);
  } catch (const ParseError& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    // Strip a comment that is not inside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (std::count(key.begin(), key.end(), '.') > 1) fail(line_no, "nested key " + key);
    if (!value.empty() && value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') fail(line_no, "unterminated string");
      value = value.substr(1, value.size() - 2);
    }
    if (!out.emplace(key, std::string(value)).second) fail(line_no, "duplicate key " + key);
  }
  return out;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"constant", "quadratic", "periodic", "example6"};
  return names;
}

void apply_preset(RunConfig& cfg, std::string_view name) {
  cfg.preset = std::string(name);
  cfg.q1.clear();
  cfg.q1pp.clear();
  cfg.q2.clear();
  cfg.mu = "1";
  cfg.theta = "1";
  cfg.f = "exp(-x^2)";
  if (name == "constant") {
    cfg.q = "1";
  } else if (name == "quadratic") {
    cfg.q = "1 + x^2";
  } else if (name == "periodic") {
    cfg.q = "2 + sin(x)";
  } else if (name == "example6") {
    cfg.q = std::string(kExample6);
    cfg.mu = "1/(sqrt(1+x^2)*log(2+x^2))";
    cfg.theta = "1/log(2+x^2)";
  } else {
    throw ConfigError("unknown preset: " + std::string(name));
  }
}

RunConfig config_from_map(const std::map<std::string, std::string>& kv, RunConfig cfg) {
  if (auto it = kv.find("preset"); it != kv.end()) apply_preset(cfg, it->second);
  for (const auto& [key, v] : kv) {
    if (key == "preset") continue;
    if (key == "problem.q") cfg.q = v;
    else if (key == "problem.q1") cfg.q1 = v;
    else if (key == "problem.q1pp") cfg.q1pp = v;
    else if (key == "problem.q2") cfg.q2 = v;
    else if (key == "problem.mu") cfg.mu = v;
    else if (key == "problem.theta") cfg.theta = v;
    else if (key == "problem.f") cfg.f = v;
    else if (key == "problem.p") cfg.p = to_double(key, v);
    else if (key == "numerics.lo") cfg.lo = to_double(key, v);
    else if (key == "numerics.hi") cfg.hi = to_double(key, v);
    else if (key == "numerics.samples") cfg.samples = to_int<int>(key, v);
    else if (key == "numerics.max_exponent") cfg.max_exponent = to_int<int>(key, v);
    else if (key == "numerics.tol_H") cfg.tol_H = to_double(key, v);
    else if (key == "numerics.tol_agree") cfg.tol_agree = to_double(key, v);
    else if (key == "numerics.stability_trials") cfg.stability_trials = to_int<int>(key, v);
    else if (key == "numerics.seed") cfg.seed = to_int<std::uint64_t>(key, v);
    else if (key == "numerics.probes") cfg.probes = parse_probe_list(v);
    else if (key == "output.report") cfg.report = v;
    else if (key == "output.profile") cfg.profile = v;
    else throw ConfigError("unknown key: " + key);
  }
  if (!(cfg.p >= 1.0) || std::isinf(cfg.p)) throw ConfigError("problem.p must be >= 1 and finite");
  if (!(cfg.lo < cfg.hi)) throw ConfigError("numerics.lo must be below numerics.hi");
  if (cfg.samples < 2) throw ConfigError("numerics.samples must be >= 2");
  if (cfg.max_exponent < 4 || cfg.max_exponent > 40) {
    throw ConfigError("numerics.max_exponent must lie in [4, 40]");
  }
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_map(parse_key_values(ss.str()), std::move(base));
}

std::vector<double> parse_probe_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string item(trim(text.substr(pos, comma - pos)));
    if (!item.empty()) out.push_back(to_double("probes", item));
    pos = comma + 1;
  }
  return out;
}

Problem make_problem(const RunConfig& cfg) {
  Problem pr;
  if (cfg.q == kExample6) {
    pr.q = localscale::example6_potential();
  } else if (!cfg.q1.empty()) {
    if (cfg.q1pp.empty()) throw ConfigError("problem.q1 needs problem.q1pp");
    pr.q = localscale::split_potential(parse("problem.q1", cfg.q1),
                                       parse("problem.q1pp", cfg.q1pp),
                                       cfg.q2.empty() ? realline::RealFunction()
                                                      : parse("problem.q2", cfg.q2));
  } else if (!cfg.q.empty()) {
    pr.q = localscale::expression_potential(parse("problem.q", cfg.q));
  } else {
    throw ConfigError("no potential: set problem.q or a preset");
  }
  pr.weights = {parse("problem.mu", cfg.mu).as_function(),
                parse("problem.theta", cfg.theta).as_function(), cfg.p};
  pr.f = parse("problem.f", cfg.f).as_function();
  pr.mu_source = cfg.mu;
  pr.theta_source = cfg.theta;
  return pr;
}

admissibility::AdmissibilityConfig numerics(const RunConfig& cfg) {
  admissibility::AdmissibilityConfig a;
  a.grid.max_exponent = cfg.max_exponent;
  a.grid.extra_points = cfg.probes;
  a.tol_H = cfg.tol_H;
  a.tol_agree = cfg.tol_agree;
  return a;
}

}  // namespace sladm::cli
