//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gennes/bench.hpp"
#include "gennes/error.hpp"

namespace gennes {

namespace {
  std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
      return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  // Thrown by value parsers; rewrapped with key and line by the caller.
  struct BadValue {
    std::string what;
  };

  std::uint64_t to_u64(std::string_view v) {
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec == std::errc() && p == v.data() + v.size() && !v.empty())
      return out;
    // Accept integral scientific notation such as 1e4.
    double d = 0.0;
    const auto [q, ec2] = std::from_chars(v.data(), v.data() + v.size(), d);
    if (ec2 == std::errc() && q == v.data() + v.size() && d >= 0.0
        && d < 1.8e19 && d == static_cast<double>(static_cast<std::uint64_t>(d)))
      return static_cast<std::uint64_t>(d);
    throw BadValue { "expected a non-negative integer, got '" + std::string(v)
                     + "'" };
  }

  double to_double(std::string_view v) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty())
      throw BadValue { "expected a number, got '" + std::string(v) + "'" };
    return out;
  }

  bool to_bool(std::string_view v) {
    if (v == "true" || v == "1" || v == "on")
      return true;
    if (v == "false" || v == "0" || v == "off")
      return false;
    throw BadValue { "expected true or false, got '" + std::string(v) + "'" };
  }

  std::vector<std::string> to_list(std::string_view v) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= v.size()) {
      const auto comma = v.find(',', start);
      const auto end = comma == std::string_view::npos ? v.size() : comma;
      const auto item = trim(v.substr(start, end - start));
      if (item.empty())
        throw BadValue { "empty list element in '" + std::string(v) + "'" };
      out.emplace_back(item);
      if (comma == std::string_view::npos)
        break;
      start = comma + 1;
    }
    return out;
  }

  using Setter = std::function<void(ExperimentConfig &, std::string_view)>;

  const std::map<std::string, Setter, std::less<>> &setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
      { "objective",
        [](auto &c, auto v) {
          const auto k = parse_objective_kind(v);
          if (!k)
            throw BadValue { "unknown objective '" + std::string(v) + "'" };
          c.objective = *k;
        } },
      { "dim", [](auto &c, auto v) { c.dim = to_u64(v); } },
      { "folds", [](auto &c, auto v) { c.folds = to_u64(v); } },
      { "budgets",
        [](auto &c, auto v) {
          c.budgets.clear();
          for (const auto &b : to_list(v))
            c.budgets.push_back(to_u64(b));
        } },
      { "seed", [](auto &c, auto v) { c.seed = to_u64(v); } },
      { "shift_margin", [](auto &c, auto v) { c.shift_margin = to_double(v); } },
      { "alpine1_variant",
        [](auto &c, auto v) {
          const auto a = parse_alpine1_variant(v);
          if (!a)
            throw BadValue { "unknown alpine1 variant '" + std::string(v)
                             + "'" };
          c.alpine1_variant = *a;
        } },
      { "grad_cost", [](auto &c, auto v) { c.grad_cost = to_u64(v); } },
      { "algorithms", [](auto &c, auto v) { c.algorithms = to_list(v); } },
      { "timing", [](auto &c, auto v) { c.timing = to_bool(v); } },

      { "gennes.population",
        [](auto &c, auto v) { c.gennes.population = to_u64(v); } },
      { "gennes.max_iterations",
        [](auto &c, auto v) { c.gennes.max_iterations = to_u64(v); } },
      { "gennes.learning_rate",
        [](auto &c, auto v) { c.gennes.learning_rate = to_double(v); } },
      { "gennes.noise_dim",
        [](auto &c, auto v) { c.gennes.generator.noise_dim = to_u64(v); } },
      { "gennes.hidden_width",
        [](auto &c, auto v) { c.gennes.generator.hidden_width = to_u64(v); } },
      { "gennes.hidden_layers",
        [](auto &c, auto v) { c.gennes.generator.hidden_layers = to_u64(v); } },
      { "gennes.leaky_slope",
        [](auto &c, auto v) { c.gennes.generator.leaky_slope = to_double(v); } },
      { "gennes.target_out_std",
        [](auto &c, auto v) {
          c.gennes.generator.target_out_std = to_double(v);
        } },
      { "gennes.noise_halfwidth",
        [](auto &c, auto v) {
          c.gennes.generator.noise_halfwidth = to_double(v);
        } },
      { "gennes.anneal_alpha",
        [](auto &c, auto v) { c.gennes.generator.anneal_alpha = to_double(v); } },
      { "gennes.calibrate_init",
        [](auto &c, auto v) { c.gennes.generator.calibrate_init = to_bool(v); } },

      { "lbfgs.memory", [](auto &c, auto v) { c.lbfgs.memory = to_u64(v); } },
      { "lbfgs.max_iters",
        [](auto &c, auto v) { c.lbfgs.max_iters = to_u64(v); } },
      { "lbfgs.pg_tol", [](auto &c, auto v) { c.lbfgs.pg_tol = to_double(v); } },
      { "lbfgs.c1", [](auto &c, auto v) { c.lbfgs.armijo_c1 = to_double(v); } },
      { "lbfgs.backtrack",
        [](auto &c, auto v) { c.lbfgs.backtrack = to_double(v); } },
      { "lbfgs.max_backtracks",
        [](auto &c, auto v) { c.lbfgs.max_backtracks = to_u64(v); } },

      { "cmaes.population",
        [](auto &c, auto v) { c.cmaes_population = to_u64(v); } },
      { "cmaes.init_sigma",
        [](auto &c, auto v) { c.cmaes_init_sigma = to_double(v); } },
      { "nes.population", [](auto &c, auto v) { c.nes_population = to_u64(v); } },
      { "nes.init_std", [](auto &c, auto v) { c.nes_init_std = to_double(v); } },

      { "bo.init_points", [](auto &c, auto v) { c.bo.init_points = to_u64(v); } },
      { "bo.outer_iterations",
        [](auto &c, auto v) { c.bo.outer_iterations = to_u64(v); } },
      { "bo.inner_maximizer",
        [](auto &c, auto v) {
          c.bo_inner.clear();
          for (const auto &name : to_list(v)) {
            const auto m = parse_inner_maximizer(name);
            if (!m)
              throw BadValue { "unknown inner maximizer '" + name + "'" };
            c.bo_inner.push_back(*m);
          }
        } },
      { "bo.inner_budget",
        [](auto &c, auto v) { c.bo.inner_budget = to_u64(v); } },
      { "bo.gennes.population",
        [](auto &c, auto v) { c.bo.gennes_population = to_u64(v); } },
      { "bo.gennes.iterations",
        [](auto &c, auto v) { c.bo.gennes_iterations = to_u64(v); } },
      { "bo.gennes.learning_rate",
        [](auto &c, auto v) { c.bo.gennes_learning_rate = to_double(v); } },
      { "bo.lbfgs.starts",
        [](auto &c, auto v) { c.bo.lbfgs_starts = to_u64(v); } },

      { "gp.kernel",
        [](auto &, auto v) {
          if (v != "matern52_ard")
            throw BadValue { "unsupported kernel '" + std::string(v) + "'" };
        } },
      { "gp.fit_restarts",
        [](auto &c, auto v) { c.bo.fit_restarts = to_u64(v); } },
      { "gp.fit_iterations",
        [](auto &c, auto v) { c.bo.fit_iterations = to_u64(v); } },
      { "gp.refit_every",
        [](auto &c, auto v) { c.bo.refit_every = to_u64(v); } },
    };
    return table;
  }

  [[noreturn]] void invalid(const std::string &field, const std::string &why) {
    throw ValidationError(field + ": " + why);
  }
}  // namespace

void ExperimentConfig::validate() const {
  if (dim < 1)
    invalid("dim", "must be >= 1");
  if (folds < 1)
    invalid("folds", "must be >= 1");
  if (budgets.empty())
    invalid("budgets", "must not be empty");
  if (budgets.front() < 1)
    invalid("budgets", "must be positive");
  for (std::size_t i = 1; i < budgets.size(); ++i)
    if (budgets[i] <= budgets[i - 1])
      invalid("budgets", "must be strictly increasing");
  if (shift_margin && !(*shift_margin >= 0.0))
    invalid("shift_margin", "must be >= 0");
  if (grad_cost < 1)
    invalid("grad_cost", "must be >= 1");
  if (algorithms.empty())
    invalid("algorithms", "must not be empty");
  for (const auto &a : algorithms)
    if (a != "gennes" && a != "lbfgs" && a != "cmaes" && a != "nes")
      invalid("algorithms", "unknown algorithm '" + a + "'");

  if (gennes.population < 1)
    invalid("gennes.population", "must be >= 1");
  if (!(gennes.learning_rate > 0.0))
    invalid("gennes.learning_rate", "must be > 0");
  const auto &g = gennes.generator;
  if (g.hidden_width < 1)
    invalid("gennes.hidden_width", "must be >= 1");
  if (g.hidden_layers < 1)
    invalid("gennes.hidden_layers", "must be >= 1");
  if (!(g.leaky_slope >= 0.0 && g.leaky_slope < 1.0))
    invalid("gennes.leaky_slope", "must be in [0, 1)");
  if (!(g.target_out_std >= 0.0))
    invalid("gennes.target_out_std", "must be >= 0");
  if (!(g.noise_halfwidth > 0.0))
    invalid("gennes.noise_halfwidth", "must be > 0");
  if (!(g.anneal_alpha > 0.0 && g.anneal_alpha <= 1.0))
    invalid("gennes.anneal_alpha", "must be in (0, 1]");

  try {
    lbfgs.validate();
  } catch (const std::invalid_argument &e) {
    invalid("lbfgs", e.what());
  }
  if (cmaes_population < 4)
    invalid("cmaes.population", "must be >= 4");
  if (!(cmaes_init_sigma >= 0.0))
    invalid("cmaes.init_sigma", "must be >= 0");
  if (nes_population < 2)
    invalid("nes.population", "must be >= 2");
  if (!(nes_init_std >= 0.0))
    invalid("nes.init_std", "must be >= 0");

  if (bo_inner.empty())
    invalid("bo.inner_maximizer", "must not be empty");
  try {
    bo.validate();
  } catch (const std::invalid_argument &e) {
    invalid("bo", e.what());
  }
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  ExperimentConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;

    const std::string where =
        std::string(source) + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(where + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));

    const auto &table = setters();
    const auto it = table.find(key);
    if (it == table.end())
      throw ParseError(where + ": unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second)
      throw ParseError(where + ": duplicate key '" + std::string(key) + "'");
    try {
      it->second(cfg, value);
    } catch (const BadValue &e) {
      throw ParseError(where + ": key '" + std::string(key) + "': " + e.what);
    }
  }

  if (!seen.contains("objective"))
    invalid("objective", "required");
  if (!seen.contains("dim"))
    invalid("dim", "required");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

}  // namespace gennes
