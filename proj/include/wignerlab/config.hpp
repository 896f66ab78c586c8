#ifndef WIGNERLAB_CONFIG_HPP
#define WIGNERLAB_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wignerlab/distribution.hpp"
#include "wignerlab/format.hpp"

// Flat key = value experiment configs. '#' starts a comment, keys are fixed
// per experiment kind, unknown or duplicate keys are hard errors, and a
// parsed config reserializes to one canonical form (fixed key order,
// shortest-round-trip numbers). The canonical text doubles as the
// fingerprint input for run identifiers.

namespace wignerlab {

struct ConfigError : std::runtime_error {
  int line;  // 0 when not tied to a specific line
  ConfigError(int line_, const std::string& what_)
      : std::runtime_error(line_ > 0 ? "config line " + std::to_string(line_) +
                                           ": " + what_
                                     : "config: " + what_),
        line(line_) {}
};

struct ExperimentConfig {
  std::string kind;
  std::optional<std::string> dist;
  std::optional<double> p;
  std::optional<double> sigma;
  std::optional<long long> n;
  std::optional<std::vector<long long>> n_grid;
  std::optional<long long> s;
  std::optional<std::vector<long long>> s_grid;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<std::vector<double>> t_grid;
  std::optional<long long> trials;
  std::optional<long long> ref_trials;
  std::optional<std::vector<long long>> trials_grid;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {
      "exact-vs-mc", "moments",    "variance", "lln",  "concentration",
      "scaling",     "glue-audit", "dyck",     "bound-chain"};
  return kinds;
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(value);
  while (std::getline(is, item, ',')) parts.push_back(trim(item));
  if (parts.empty()) parts.push_back("");
  return parts;
}

template <typename T, typename Parse>
std::vector<T> parse_grid(const std::string& value, int line, Parse parse,
                          const char* what) {
  std::vector<T> out;
  for (const std::string& item : split_list(value)) {
    try {
      out.push_back(parse(item));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line, std::string(what) + ": " + e.what());
    }
  }
  return out;
}

template <typename T>
std::string join_grid(const std::vector<T>& grid) {
  std::string out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_same_v<T, double>)
      out += format_double(grid[i]);
    else
      out += std::to_string(grid[i]);
  }
  return out;
}

template <typename T>
void require_increasing(const std::vector<T>& grid, const char* key) {
  if (grid.empty()) throw ConfigError(0, std::string(key) + " is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw ConfigError(0, std::string(key) + " must be strictly increasing");
}

struct KeySchema {
  bool dist = false, n = false, n_grid = false, s = false, s_grid = false;
  bool epsilon = false, delta = false, t_grid = false, trials = false;
  bool ref_trials = false, trials_grid = false;
  bool sigma = false;
};

// Which keys an experiment kind may carry. kind, seed and out are universal.
inline KeySchema schema_for(const std::string& kind) {
  KeySchema k;
  if (kind == "exact-vs-mc") {
    k.dist = k.sigma = k.n = k.s = k.trials = true;
  } else if (kind == "moments") {
    k.dist = k.sigma = k.n = k.s = k.epsilon = k.trials = true;
  } else if (kind == "variance") {
    k.dist = k.sigma = k.n_grid = k.epsilon = k.trials = true;
  } else if (kind == "lln") {
    k.dist = k.sigma = k.n_grid = k.epsilon = k.trials = k.ref_trials = true;
  } else if (kind == "concentration") {
    k.dist = k.sigma = k.n = k.t_grid = k.trials = true;
  } else if (kind == "scaling") {
    k.dist = k.sigma = k.n_grid = k.trials = k.trials_grid = true;
  } else if (kind == "glue-audit") {
    k.n = k.s = true;
  } else if (kind == "dyck") {
    k.s_grid = k.trials = true;
  } else if (kind == "bound-chain") {
    k.sigma = k.delta = k.epsilon = true;
  } else {
    throw ConfigError(0, "unknown experiment kind '" + kind + "'");
  }
  return k;
}

}  // namespace detail

inline void validate_config(const ExperimentConfig& c);

inline ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::vector<std::string> seen;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string entry = detail::trim(raw);
    if (entry.empty()) continue;
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line, "expected 'key = value', got '" + entry + "'");
    const std::string key = detail::trim(entry.substr(0, eq));
    const std::string value = detail::trim(entry.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (value.empty()) throw ConfigError(line, "empty value for '" + key + "'");
    for (const std::string& s : seen)
      if (s == key) throw ConfigError(line, "duplicate key '" + key + "'");
    seen.push_back(key);
    try {
      if (key == "kind") c.kind = value;
      else if (key == "dist") c.dist = value;
      else if (key == "p") c.p = parse_double(value);
      else if (key == "sigma") c.sigma = parse_double(value);
      else if (key == "n") c.n = parse_int(value);
      else if (key == "n_grid")
        c.n_grid = detail::parse_grid<long long>(
            value, line, [](const std::string& s) { return parse_int(s); },
            "n_grid");
      else if (key == "s") c.s = parse_int(value);
      else if (key == "s_grid")
        c.s_grid = detail::parse_grid<long long>(
            value, line, [](const std::string& s) { return parse_int(s); },
            "s_grid");
      else if (key == "epsilon") c.epsilon = parse_double(value);
      else if (key == "delta") c.delta = parse_double(value);
      else if (key == "t_grid")
        c.t_grid = detail::parse_grid<double>(
            value, line, [](const std::string& s) { return parse_double(s); },
            "t_grid");
      else if (key == "trials") c.trials = parse_int(value);
      else if (key == "ref_trials") c.ref_trials = parse_int(value);
      else if (key == "trials_grid")
        c.trials_grid = detail::parse_grid<long long>(
            value, line, [](const std::string& s) { return parse_int(s); },
            "trials_grid");
      else if (key == "seed") c.seed = parse_uint64(value);
      else if (key == "out") c.out = value;
      else throw ConfigError(line, "unknown key '" + key + "'");
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line, std::string(e.what()));
    }
  }
  validate_config(c);
  return c;
}

inline void validate_config(const ExperimentConfig& c) {
  if (c.kind.empty()) throw ConfigError(0, "missing required key 'kind'");
  const detail::KeySchema allowed = detail::schema_for(c.kind);
  if (!c.seed) throw ConfigError(0, "missing required key 'seed'");

  auto forbid = [&](bool present, bool ok, const char* key) {
    if (present && !ok)
      throw ConfigError(0, "key '" + std::string(key) +
                               "' is not accepted by kind '" + c.kind + "'");
  };
  forbid(c.dist.has_value(), allowed.dist, "dist");
  forbid(c.p.has_value(), allowed.dist, "p");
  forbid(c.sigma.has_value(), allowed.sigma, "sigma");
  forbid(c.n.has_value(), allowed.n, "n");
  forbid(c.n_grid.has_value(), allowed.n_grid, "n_grid");
  forbid(c.s.has_value(), allowed.s, "s");
  forbid(c.s_grid.has_value(), allowed.s_grid, "s_grid");
  forbid(c.epsilon.has_value(), allowed.epsilon, "epsilon");
  forbid(c.delta.has_value(), allowed.delta, "delta");
  forbid(c.t_grid.has_value(), allowed.t_grid, "t_grid");
  forbid(c.trials.has_value(), allowed.trials, "trials");
  forbid(c.ref_trials.has_value(), allowed.ref_trials, "ref_trials");
  forbid(c.trials_grid.has_value(), allowed.trials_grid, "trials_grid");

  auto need = [&](bool present, const char* key) {
    if (!present)
      throw ConfigError(0, "kind '" + c.kind + "' requires key '" +
                               std::string(key) + "'");
  };

  if (allowed.dist) {
    need(c.dist.has_value(), "dist");
    need(c.sigma.has_value(), "sigma");
    if (*c.dist == "two_point") {
      need(c.p.has_value(), "p");
    } else if (*c.dist == "rademacher") {
      if (c.p)
        throw ConfigError(0, "dist 'rademacher' does not take key 'p'");
    } else {
      throw ConfigError(0, "unknown dist '" + *c.dist +
                               "' (expected two_point or rademacher)");
    }
    if (!(*c.sigma > 0.0)) throw ConfigError(0, "sigma must be positive");
  }

  if (c.kind == "exact-vs-mc") {
    need(c.n.has_value(), "n");
    need(c.s.has_value(), "s");
    need(c.trials.has_value(), "trials");
  } else if (c.kind == "moments") {
    need(c.n.has_value(), "n");
    need(c.trials.has_value(), "trials");
    if (c.s.has_value() == c.epsilon.has_value())
      throw ConfigError(0, "kind 'moments' needs exactly one of 's', 'epsilon'");
  } else if (c.kind == "variance") {
    need(c.n_grid.has_value(), "n_grid");
    need(c.epsilon.has_value(), "epsilon");
    need(c.trials.has_value(), "trials");
  } else if (c.kind == "lln") {
    need(c.n_grid.has_value(), "n_grid");
    need(c.epsilon.has_value(), "epsilon");
    need(c.trials.has_value(), "trials");
    need(c.ref_trials.has_value(), "ref_trials");
  } else if (c.kind == "concentration") {
    need(c.n.has_value(), "n");
    need(c.t_grid.has_value(), "t_grid");
    need(c.trials.has_value(), "trials");
  } else if (c.kind == "scaling") {
    need(c.n_grid.has_value(), "n_grid");
    if (c.trials.has_value() == c.trials_grid.has_value())
      throw ConfigError(
          0, "kind 'scaling' needs exactly one of 'trials', 'trials_grid'");
  } else if (c.kind == "glue-audit") {
    need(c.n.has_value(), "n");
    need(c.s.has_value(), "s");
  } else if (c.kind == "dyck") {
    need(c.s_grid.has_value(), "s_grid");
    need(c.trials.has_value(), "trials");
  } else if (c.kind == "bound-chain") {
    need(c.sigma.has_value(), "sigma");
    need(c.delta.has_value(), "delta");
    need(c.epsilon.has_value(), "epsilon");
    if (!(*c.sigma > 0.0)) throw ConfigError(0, "sigma must be positive");
    if (!(*c.delta > 0.0)) throw ConfigError(0, "delta must be positive");
    if (!(*c.epsilon > 0.0)) throw ConfigError(0, "epsilon must be positive");
  }

  if (c.n && *c.n < 1) throw ConfigError(0, "n must be >= 1");
  if (c.s && *c.s < 1) throw ConfigError(0, "s must be >= 1");
  if (c.n_grid) detail::require_increasing(*c.n_grid, "n_grid");
  if (c.s_grid) detail::require_increasing(*c.s_grid, "s_grid");
  if (c.t_grid) detail::require_increasing(*c.t_grid, "t_grid");
  if (c.n_grid)
    for (long long v : *c.n_grid)
      if (v < 1) throw ConfigError(0, "n_grid entries must be >= 1");
  if (c.s_grid)
    for (long long v : *c.s_grid)
      if (v < 1) throw ConfigError(0, "s_grid entries must be >= 1");
  if (c.t_grid)
    for (double v : *c.t_grid)
      if (!(v > 0.0)) throw ConfigError(0, "t_grid entries must be > 0");
  if (c.epsilon && c.kind != "bound-chain" &&
      !(*c.epsilon > 0.0 && *c.epsilon < 6.0 / 11.0))
    throw ConfigError(0, "epsilon must lie in (0, 6/11)");

  const long long min_trials =
      (c.kind == "lln" || c.kind == "concentration" || c.kind == "dyck") ? 1
                                                                         : 2;
  if (c.trials && *c.trials < min_trials)
    throw ConfigError(0, "trials must be >= " + std::to_string(min_trials) +
                             " for kind '" + c.kind + "'");
  if (c.ref_trials && *c.ref_trials < 2)
    throw ConfigError(0, "ref_trials must be >= 2");
  if (c.trials_grid) {
    if (!c.n_grid || c.trials_grid->size() != c.n_grid->size())
      throw ConfigError(0, "trials_grid must match n_grid in length");
    for (long long v : *c.trials_grid)
      if (v < 2) throw ConfigError(0, "trials_grid entries must be >= 2");
  }
}

// Canonical serialization: fixed key order, canonical number forms. Parsing
// the output reproduces the config exactly.
inline std::string canonical_config(const ExperimentConfig& c) {
  std::string out;
  auto put = [&](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += "\n";
  };
  put("kind", c.kind);
  if (c.dist) put("dist", *c.dist);
  if (c.p) put("p", format_double(*c.p));
  if (c.sigma) put("sigma", format_double(*c.sigma));
  if (c.n) put("n", std::to_string(*c.n));
  if (c.n_grid) put("n_grid", detail::join_grid(*c.n_grid));
  if (c.s) put("s", std::to_string(*c.s));
  if (c.s_grid) put("s_grid", detail::join_grid(*c.s_grid));
  if (c.epsilon) put("epsilon", format_double(*c.epsilon));
  if (c.delta) put("delta", format_double(*c.delta));
  if (c.t_grid) put("t_grid", detail::join_grid(*c.t_grid));
  if (c.trials) put("trials", std::to_string(*c.trials));
  if (c.ref_trials) put("ref_trials", std::to_string(*c.ref_trials));
  if (c.trials_grid) put("trials_grid", detail::join_grid(*c.trials_grid));
  if (c.seed) put("seed", std::to_string(*c.seed));
  if (c.out) put("out", *c.out);
  return out;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

// The entry law a config describes.
inline EntryDistribution config_distribution(const ExperimentConfig& c) {
  if (!c.dist || !c.sigma)
    throw ConfigError(0, "kind '" + c.kind + "' carries no distribution");
  if (*c.dist == "two_point") return make_two_point(*c.p, *c.sigma);
  return make_rademacher(*c.sigma);
}

}  // namespace wignerlab

#endif
