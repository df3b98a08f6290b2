//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gennes/bench.hpp"
#include "gennes/error.hpp"

namespace gennes {

RegretSample regret_at(const std::vector<TracePoint> &trace,
                       std::uint64_t budget, double f_star) {
  if (trace.empty())
    throw EmptyTrace("regret_at: trace is empty");
  if (trace.front().evaluations > budget)
    return { trace.front().best_value - f_star, true };
  const auto it = std::upper_bound(
      trace.begin(), trace.end(), budget,
      [](std::uint64_t b, const TracePoint &p) { return b < p.evaluations; });
  return { std::prev(it)->best_value - f_star, false };
}

namespace {
  std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
      out.push_back(field);
    if (!line.empty() && line.back() == ',')
      out.emplace_back();
    return out;
  }

  std::ofstream open_out(const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error("cannot open '" + path.string() + "' for writing");
    return out;
  }

  Objective fold_objective(const ExperimentConfig &cfg, std::size_t fold) {
    Rng rng(derive_seed(cfg.seed, fold, "shift"));
    const double margin =
        cfg.shift_margin.value_or(default_shift_margin(cfg.objective));
    auto shift = sample_shift(rng, cfg.objective, cfg.dim, margin);
    return make_objective(cfg.objective, cfg.dim, std::move(shift),
                          cfg.alpine1_variant);
  }
}  // namespace

std::string format_row(const ResultRow &r) {
  std::ostringstream ss;
  ss << r.algorithm << ',' << r.function << ',' << r.dim << ',' << r.fold
     << ',' << r.seed << ',' << r.evals << ',' << num(r.best_value) << ','
     << num(r.regret) << ',' << r.wall_ms;
  return ss.str();
}

std::vector<ResultRow> read_results(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader)
    throw ParseError("results: missing or unexpected header");
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty())
      continue;
    const auto f = split_csv(line);
    if (f.size() != 9)
      throw ParseError("results:" + std::to_string(line_no) + ": expected 9 "
                       "fields, got " + std::to_string(f.size()));
    try {
      rows.push_back({ f[0], f[1], std::stoul(f[2]), std::stoul(f[3]),
                       std::stoull(f[4]), std::stoull(f[5]), std::stod(f[6]),
                       std::stod(f[7]), std::stoull(f[8]) });
    } catch (const std::logic_error &) {
      throw ParseError("results:" + std::to_string(line_no)
                       + ": malformed field");
    }
  }
  return rows;
}

std::vector<ResultRow> read_results(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open '" + path.string() + "'");
  return read_results(in);
}

const RegretCell *RegretTable::find(std::string_view algorithm,
                                    std::uint64_t budget) const {
  for (const auto &c : cells)
    if (c.algorithm == algorithm && c.budget == budget)
      return &c;
  return nullptr;
}

RegretTable aggregate(const std::vector<ResultRow> &rows) {
  RegretTable t;
  if (rows.empty())
    return t;
  t.function = rows.front().function;
  t.dim = rows.front().dim;

  std::vector<std::string> order;
  std::map<std::pair<std::string, std::uint64_t>, std::vector<double>> groups;
  for (const auto &r : rows) {
    if (std::find(order.begin(), order.end(), r.algorithm) == order.end())
      order.push_back(r.algorithm);
    groups[{ r.algorithm, r.evals }].push_back(r.regret);
  }
  for (const auto &alg : order) {
    for (const auto &[key, vals] : groups) {
      if (key.first != alg)
        continue;
      double mean = 0.0;
      for (double v : vals)
        mean += v;
      mean /= static_cast<double>(vals.size());
      double ss = 0.0;
      for (double v : vals)
        ss += (v - mean) * (v - mean);
      const double sd =
          vals.size() > 1 ? std::sqrt(ss / static_cast<double>(vals.size() - 1))
                          : 0.0;
      t.cells.push_back({ alg, key.second, mean, sd, vals.size() });
    }
  }
  return t;
}

std::string format_table(const RegretTable &t) {
  std::vector<std::uint64_t> budgets;
  std::vector<std::string> algs;
  for (const auto &c : t.cells) {
    if (std::find(budgets.begin(), budgets.end(), c.budget) == budgets.end())
      budgets.push_back(c.budget);
    if (std::find(algs.begin(), algs.end(), c.algorithm) == algs.end())
      algs.push_back(c.algorithm);
  }
  std::sort(budgets.begin(), budgets.end());

  std::ostringstream out;
  char buf[64];
  out << t.function << " d=" << t.dim << ", mean regret (std)\n";
  std::snprintf(buf, sizeof buf, "%-10s", "evals");
  out << buf;
  for (auto b : budgets) {
    std::snprintf(buf, sizeof buf, " %22llu", static_cast<unsigned long long>(b));
    out << buf;
  }
  out << '\n';
  for (const auto &a : algs) {
    std::snprintf(buf, sizeof buf, "%-10s", a.c_str());
    out << buf;
    for (auto b : budgets) {
      if (const auto *c = t.find(a, b)) {
        std::snprintf(buf, sizeof buf, " %11.4g (%8.3g)", c->mean, c->std);
        out << buf;
      } else {
        std::snprintf(buf, sizeof buf, " %22s", "-");
        out << buf;
      }
    }
    out << '\n';
  }
  return out.str();
}

RunRecord run_algorithm(std::string_view algorithm, const Objective &obj,
                        const ExperimentConfig &cfg, std::uint64_t budget,
                        std::uint64_t seed) {
  Rng rng(seed);
  const Problem prob = obj.problem();
  RunRecord r;
  if (algorithm == "gennes") {
    GennesConfig g = cfg.gennes;
    g.seed = seed;
    BudgetMeter meter(budget, cfg.grad_cost);
    r = run_gennes(obj, g, meter, rng);
  } else if (algorithm == "lbfgs") {
    r = multistart_lbfgs(obj, budget, cfg.lbfgs, rng, cfg.grad_cost);
  } else if (algorithm == "cmaes") {
    const auto mean = uniform_in_box(prob, rng);
    const double sigma = cfg.cmaes_init_sigma > 0.0 ? cfg.cmaes_init_sigma
                                                    : obj.domain().width() / 4;
    r = cmaes_run(obj, cfg.cmaes_population, budget, mean, sigma, rng);
  } else if (algorithm == "nes") {
    const auto mean = uniform_in_box(prob, rng);
    const std::vector<double> sd(obj.dim(), cfg.nes_init_std > 0.0
                                                ? cfg.nes_init_std
                                                : obj.domain().width() / 4);
    r = nes_run(obj, cfg.nes_population, budget, mean, sd, rng);
  } else {
    throw std::invalid_argument("unknown algorithm '" + std::string(algorithm)
                                + "'");
  }
  r.seed = seed;
  return r;
}

RegretTable run_experiment(const ExperimentConfig &cfg,
                           const std::filesystem::path &out) {
  cfg.validate();
  auto csv = open_out(out);
  csv << kResultsHeader << '\n';

  const std::uint64_t max_budget = cfg.budgets.back();
  std::vector<ResultRow> rows;
  for (const auto &alg : cfg.algorithms) {
    for (std::size_t fold = 0; fold < cfg.folds; ++fold) {
      const std::uint64_t seed = derive_seed(cfg.seed, fold, alg);
      RunRecord rec;
      std::uint64_t wall_ms = 0;
      try {
        const Objective obj = fold_objective(cfg, fold);
        const auto t0 = std::chrono::steady_clock::now();
        rec = run_algorithm(alg, obj, cfg, max_budget, seed);
        if (cfg.timing)
          wall_ms = static_cast<std::uint64_t>(
              std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count());
        for (auto b : cfg.budgets) {
          const auto s = regret_at(rec.trace, b, obj.f_star());
          ResultRow row { alg,  std::string(obj.name()),
                          cfg.dim, fold,
                          seed, b,
                          s.regret + obj.f_star(), s.regret,
                          wall_ms };
          csv << format_row(row) << '\n';
          rows.push_back(std::move(row));
        }
      } catch (const std::exception &e) {
        csv.flush();
        throw Error(alg + ", fold " + std::to_string(fold) + ": " + e.what());
      }
      csv.flush();
    }
  }

  const RegretTable table = aggregate(rows);
  std::filesystem::path summary = out;
  summary += ".summary.csv";
  auto s = open_out(summary);
  s << "algorithm,function,dim,budget,mean_regret,std_regret,folds\n";
  for (const auto &c : table.cells)
    s << c.algorithm << ',' << table.function << ',' << table.dim << ','
      << c.budget << ',' << num(c.mean) << ',' << num(c.std) << ','
      << c.folds << '\n';
  return table;
}

std::vector<BoResultRow> run_bo_experiment(const ExperimentConfig &cfg,
                                           const std::filesystem::path &out) {
  cfg.validate();
  auto csv = open_out(out);
  csv << kBoHeader << '\n';

  const Objective obj =
      make_objective(cfg.objective, cfg.dim, cfg.alpine1_variant);
  const Problem prob = obj.problem();

  std::vector<BoResultRow> rows;
  for (const auto method : cfg.bo_inner) {
    const std::string name(inner_maximizer_name(method));
    for (std::size_t fold = 0; fold < cfg.folds; ++fold) {
      Rng init_rng(derive_seed(cfg.seed, fold, "init"));
      DenseMatrix init;
      for (std::size_t i = 0; i < cfg.bo.init_points; ++i)
        init.append_row(uniform_in_box(prob, init_rng));

      BoConfig b = cfg.bo;
      b.inner = method;
      Rng rng(derive_seed(cfg.seed, fold, "bo-" + name));
      BoRecord rec;
      try {
        rec = run_bo(obj, b, rng, init);
      } catch (const std::exception &e) {
        csv.flush();
        throw Error("bo " + name + ", fold " + std::to_string(fold) + ": "
                    + e.what());
      }
      for (const auto &s : rec.steps) {
        BoResultRow row { name, fold, s.step, s.objective_evals, s.acq_queries,
                          s.incumbent };
        csv << row.inner_method << ',' << row.fold << ',' << row.step << ','
            << row.objective_evals << ',' << row.acq_queries << ','
            << num(row.incumbent) << '\n';
        rows.push_back(std::move(row));
      }
      csv.flush();
    }
  }
  return rows;
}

}  // namespace gennes
