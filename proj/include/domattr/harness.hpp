#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "domattr/ks.hpp"
#include "domattr/parallel.hpp"
#include "domattr/regimes.hpp"

namespace domattr {

enum class Format { csv, json };

inline std::string_view to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

inline Format parse_format(std::string_view s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  fail(ErrorCategory::invalid_argument, "unknown format '" + std::string(s) + "' (expected csv or json)");
}

struct ExperimentConfig {
  std::string model;
  Stat stat = Stat::T;
  std::vector<std::uint64_t> n_grid;
  std::size_t replications = 1000;
  std::size_t reference_draws = 10000;
  std::uint64_t seed = 1;
  std::string output;  ///< empty: caller decides (the CLI prints to stdout)
  Format format = Format::csv;
  unsigned threads = 0;  ///< 0: one per hardware thread
};

inline constexpr std::array<double, 5> kQuantileLevels{0.05, 0.25, 0.50, 0.75, 0.95};

struct ResultRow {
  std::uint64_t n = 0;
  double ks = 0.0;
  std::array<double, 5> q{};
  std::array<double, 5> ref_q{};
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  Regime regime = Regime::I;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ExperimentResult {
  std::string model;
  Stat stat = Stat::T;
  Regime regime = Regime::I;
  std::string lhs;
  std::string rhs;
  std::uint64_t seed = 0;
  std::size_t replications = 0;
  std::size_t reference_draws = 0;
  std::vector<std::string> warnings;
  std::vector<ResultRow> rows;

  friend bool operator==(const ExperimentResult&, const ExperimentResult&) = default;
};

inline void validate(const ExperimentConfig& cfg) {
  require(!cfg.model.empty(), "config: model is required");
  require(cfg.replications >= 1, "config: replications must be positive");
  require(cfg.reference_draws >= 1, "config: reference_draws must be positive");
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    require(cfg.n_grid[i] >= 1, "config: sample sizes must be positive");
    if (i > 0) require(cfg.n_grid[i] > cfg.n_grid[i - 1], "config: n_grid must be strictly increasing");
  }
}

/// Seed stream of the reference draws; replication streams use (n index + 1, r).
inline constexpr std::uint64_t kReferenceStream = 0;

/// The cell's normalized statistic on `replications` independent samples of size n.
inline std::vector<double> simulate_statistic(const DistributionModel& model, const TheoremCell& cell,
                                              const NormalizerRow& row, std::size_t replications,
                                              std::uint64_t seed, std::uint64_t stream_index, unsigned threads) {
  const MomentTable m = moments(model);
  std::vector<double> out(replications);
  parallel_for(replications, threads, [&](std::size_t r) {
    std::vector<double> data(row.n);
    Stream stream(derive_seed(seed, stream_index, r));
    sample_into(model, data, stream);
    out[r] = cell_statistic(cell, data, row, m);
  });
  return out;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const unsigned threads = cfg.threads == 0 ? default_thread_count() : cfg.threads;
  const DistributionModel model = parse_model(cfg.model);
  const TheoremCell cell = build_cell(cfg.stat, model);

  ExperimentResult res;
  res.model = to_spec(model);
  res.stat = cfg.stat;
  res.regime = cell.regime;
  res.lhs = std::string(cell.lhs->formula);
  res.rhs = cell.rhs;
  res.seed = cfg.seed;
  res.replications = cfg.replications;
  res.reference_draws = cfg.reference_draws;
  if (cfg.replications < 100)
    res.warnings.push_back("replications=" + std::to_string(cfg.replications) +
                           " is below 100; distances and quantiles are unreliable");
  if (cfg.n_grid.empty()) return res;

  const Normalizers norms(model, cfg.n_grid);
  auto ref = reference_sample(cell, cfg.reference_draws, derive_seed(cfg.seed, kReferenceStream), threads);
  std::sort(ref.begin(), ref.end());

  for (std::size_t k = 0; k < cfg.n_grid.size(); ++k) {
    const NormalizerRow& nr = norms.at(cfg.n_grid[k]);
    auto stat = simulate_statistic(model, cell, nr, cfg.replications, cfg.seed, k + 1, threads);
    std::sort(stat.begin(), stat.end());
    ResultRow row;
    row.n = nr.n;
    row.ks = ks_two_sample(stat, ref);
    for (std::size_t i = 0; i < kQuantileLevels.size(); ++i) {
      row.q[i] = nearest_rank(stat, kQuantileLevels[i]);
      row.ref_q[i] = nearest_rank(ref, kQuantileLevels[i]);
    }
    row.a = nr.a;
    row.b = nr.b;
    row.c = nr.c;
    row.d = nr.d;
    row.regime = nr.regime;
    res.rows.push_back(row);
  }
  return res;
}

inline constexpr std::string_view kCsvHeader =
    "n,ks,q05,q25,q50,q75,q95,ref_q05,ref_q25,ref_q50,ref_q75,ref_q95,a,b,c,d,regime";

inline std::string emit_csv(const ExperimentResult& res) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : res.rows) {
    out += std::to_string(r.n) + ',' + format_double(r.ks);
    for (double q : r.q) out += ',' + format_double(q);
    for (double q : r.ref_q) out += ',' + format_double(q);
    for (double v : {r.a, r.b, r.c, r.d}) out += ',' + format_double(v);
    out += ',';
    out += to_string(r.regime);
    out += '\n';
  }
  return out;
}

inline nlohmann::json to_json(const ExperimentResult& res) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : res.rows) {
    rows.push_back({{"n", r.n},
                    {"ks", r.ks},
                    {"q", r.q},
                    {"ref_q", r.ref_q},
                    {"a", r.a},
                    {"b", r.b},
                    {"c", r.c},
                    {"d", r.d},
                    {"regime", to_string(r.regime)}});
  }
  return {{"model", res.model},
          {"stat", to_string(res.stat)},
          {"regime", to_string(res.regime)},
          {"lhs", res.lhs},
          {"rhs", res.rhs},
          {"seed", res.seed},
          {"replications", res.replications},
          {"reference_draws", res.reference_draws},
          {"quantile_levels", kQuantileLevels},
          {"warnings", res.warnings},
          {"rows", rows}};
}

inline std::string emit_json(const ExperimentResult& res) { return to_json(res).dump(2) + "\n"; }

inline std::string emit(const ExperimentResult& res, Format f) {
  return f == Format::csv ? emit_csv(res) : emit_json(res);
}

inline ExperimentResult parse_result_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ExperimentResult res;
    res.model = j.at("model").get<std::string>();
    res.stat = parse_stat(j.at("stat").get<std::string>());
    res.regime = parse_regime(j.at("regime").get<std::string>());
    res.lhs = j.at("lhs").get<std::string>();
    res.rhs = j.at("rhs").get<std::string>();
    res.seed = j.at("seed").get<std::uint64_t>();
    res.replications = j.at("replications").get<std::size_t>();
    res.reference_draws = j.at("reference_draws").get<std::size_t>();
    res.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      ResultRow row;
      row.n = r.at("n").get<std::uint64_t>();
      row.ks = r.at("ks").get<double>();
      row.q = r.at("q").get<std::array<double, 5>>();
      row.ref_q = r.at("ref_q").get<std::array<double, 5>>();
      row.a = r.at("a").get<double>();
      row.b = r.at("b").get<double>();
      row.c = r.at("c").get<double>();
      row.d = r.at("d").get<double>();
      row.regime = parse_regime(r.at("regime").get<std::string>());
      res.rows.push_back(row);
    }
    return res;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCategory::config, std::string("result json: ") + e.what());
  }
}

/// ExperimentConfig from a JSON document whose keys are the field names.
inline ExperimentConfig parse_config_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCategory::config, std::string("config: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCategory::config, "config: expected a JSON object");
  ExperimentConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "model") cfg.model = value.get<std::string>();
      else if (key == "stat") cfg.stat = parse_stat(value.get<std::string>());
      else if (key == "n_grid") cfg.n_grid = value.get<std::vector<std::uint64_t>>();
      else if (key == "replications") cfg.replications = value.get<std::size_t>();
      else if (key == "reference_draws") cfg.reference_draws = value.get<std::size_t>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "output") cfg.output = value.get<std::string>();
      else if (key == "format") cfg.format = parse_format(value.get<std::string>());
      else if (key == "threads") cfg.threads = value.get<unsigned>();
      else fail(ErrorCategory::config, "config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCategory::config, std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::config) throw;
    fail(ErrorCategory::config, e.what());
  }
  return cfg;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCategory::io, "cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCategory::io, "write to '" + path + "' failed");
}

}  // namespace domattr
