// domattr: simulate normalized ratio statistics and compare them with their limit laws.
//
// Failures print {"error": <category>, "message": ...} on stderr and exit with
// the category's code (2 usage/config, 3 all-zero sample, 4 undefined cell,
// 5 unsupported regime, 6 no root, 7 io).

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "domattr/domattr.hpp"

using namespace domattr;

namespace {

void report_error(std::string_view category, std::string_view message) {
  std::cerr << nlohmann::json{{"error", category}, {"message", message}}.dump() << '\n';
}

void deliver(const std::string& out, std::string_view text) {
  if (out.empty() || out == "-") std::cout << text;
  else write_file(out, text);
}

std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string s;
  for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
  s += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
    s += '\n';
  }
  return s;
}

// Numeric cells are written as JSON numbers (integers stay integers), everything else as strings.
std::string table_json(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!r[i].empty() && r[i].find_first_not_of("0123456789") == std::string::npos) {
        obj[header[i]] = std::stoull(r[i]);
        continue;
      }
      try {
        obj[header[i]] = parse_double(r[i]);
      } catch (const Error&) {
        obj[header[i]] = r[i];
      }
    }
    arr.push_back(obj);
  }
  return arr.dump(2) + "\n";
}

std::string table(Format f, const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  return f == Format::csv ? table_csv(header, rows) : table_json(header, rows);
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> xs;
  std::string token;
  const auto flush = [&] {
    if (!token.empty()) xs.push_back(parse_double(token));
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || c == '\n' || c == '\r' || c == ' ' || c == '\t') flush();
    else token += c;
  }
  flush();
  return xs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Domain-of-attraction simulator for ratio statistics of positive samples"};
  app.require_subcommand(1);

  std::string model, stat_name = "T", out, format_name = "csv", config_path, data_path;
  std::vector<std::uint64_t> ns;
  std::vector<double> xs, ys;
  std::size_t reps = 1000, ref_draws = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool generic = false;

  const auto add_format = [&](CLI::App* sub) {
    sub->add_option("--out", out, "Output path (stdout when omitted)");
    sub->add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo convergence table for one (model, statistic) cell");
  simulate->add_option("--config", config_path, "JSON config; its keys are the ExperimentConfig field names");
  simulate->add_option("--model", model, "e.g. pareto{alpha=1.5}, paretolog{alpha=2}, bernoulli{p=0.3}, exp{rate=1}");
  simulate->add_option("--stat", stat_name, "T, C, SV, SD or T2");
  simulate->add_option("--n", ns, "Comma-separated sample sizes")->delimiter(',');
  simulate->add_option("--reps", reps, "Replications per sample size");
  simulate->add_option("--ref-draws", ref_draws, "Draws from the limit law");
  simulate->add_option("--seed", seed, "Root seed");
  simulate->add_option("--threads", threads, "Worker threads (0: hardware)");
  add_format(simulate);

  auto* normalizers = app.add_subcommand("normalizers", "Tabulate a(n), b(n), c(n), d(n)");
  normalizers->add_option("--model", model)->required();
  normalizers->add_option("--n", ns, "Comma-separated sample sizes")->delimiter(',')->required();
  normalizers->add_flag("--generic", generic, "Always use the root finder, even where closed forms exist");
  add_format(normalizers);

  auto* reference = app.add_subcommand("reference", "Draws from the limit law of a cell");
  reference->add_option("--model", model)->required();
  reference->add_option("--stat", stat_name);
  reference->add_option("--ref-draws", ref_draws);
  reference->add_option("--seed", seed);
  reference->add_option("--threads", threads);
  add_format(reference);

  auto* functionals = app.add_subcommand("functionals", "U, W and the transfer bound on an (x, y) grid");
  functionals->add_option("--model", model)->required();
  functionals->add_option("--x", xs, "Comma-separated x values")->delimiter(',')->required();
  functionals->add_option("--y", ys, "Comma-separated y values")->delimiter(',')->required();
  add_format(functionals);

  auto* identities = app.add_subcommand("identities", "Ratio statistics and their identities on a data file");
  identities->add_option("--data", data_path, "File of nonnegative numbers (comma or whitespace separated)")
      ->required();
  add_format(identities);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error(to_string(ErrorCategory::invalid_argument), e.what());
    return exit_code(ErrorCategory::invalid_argument);
  }

  try {
    const Format format = parse_format(format_name);

    if (simulate->parsed()) {
      ExperimentConfig cfg;
      if (!config_path.empty()) cfg = parse_config_json(read_file(config_path));
      // Flags given on the command line override the config file.
      if (simulate->count("--model")) cfg.model = model;
      if (simulate->count("--stat") || config_path.empty()) cfg.stat = parse_stat(stat_name);
      if (simulate->count("--n")) cfg.n_grid = ns;
      if (simulate->count("--reps") || config_path.empty()) cfg.replications = reps;
      if (simulate->count("--ref-draws") || config_path.empty()) cfg.reference_draws = ref_draws;
      if (simulate->count("--seed") || config_path.empty()) cfg.seed = seed;
      if (simulate->count("--threads") || config_path.empty()) cfg.threads = threads;
      if (simulate->count("--out")) cfg.output = out;
      if (simulate->count("--format") || config_path.empty()) cfg.format = format;
      if (cfg.model.empty()) fail(ErrorCategory::invalid_argument, "simulate: --model (or a config model) is required");

      const ExperimentResult res = run_experiment(cfg);
      for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
      deliver(cfg.output, emit(res, cfg.format));
      return 0;
    }

    if (identities->parsed()) {
      const auto data = parse_numbers(read_file(data_path));
      const SampleStats s = compute_stats(data);
      const double n = static_cast<double>(s.n), nt = n * s.t_ratio;
      const auto relerr = [](double got, double want) { return std::abs(got - want) / std::abs(want); };
      const std::string t2 = s.t2 ? format_double(*s.t2) : "undefined";
      const std::string t2_err = s.t2 ? format_double(relerr(*s.t2 * (nt - 1.0), n)) : "undefined";
      deliver(out, table(format,
                         {"n", "T", "C", "SV", "SD", "T2", "err_sv_nt", "err_sd", "err_t2"},
                         {{std::to_string(s.n), format_double(s.t_ratio), format_double(s.c_ratio),
                           format_double(s.sv), format_double(s.sd), t2,
                           format_double(relerr(s.sv * s.sv + 1.0, nt)),
                           format_double(s.degenerate ? std::abs(s.sd) : relerr(s.sd, (nt - 1.0) * s.mean())),
                           t2_err}}));
      return 0;
    }

    const DistributionModel m = parse_model(model);

    if (normalizers->parsed()) {
      NormalizerOptions opt;
      opt.closed_form = !generic;
      const Normalizers table_rows(m, ns, opt);
      std::vector<std::vector<std::string>> rows;
      for (const auto& r : table_rows.rows())
        rows.push_back({std::to_string(r.n), format_double(r.a), format_double(r.b), format_double(r.c),
                        format_double(r.d), format_double(r.mean_scale), std::string(to_string(r.regime))});
      deliver(out, table(format, {"n", "a", "b", "c", "d", "mean_scale", "regime"}, rows));
      return 0;
    }

    if (reference->parsed()) {
      const TheoremCell cell = build_cell(parse_stat(stat_name), m);
      const auto draws = reference_sample(cell, ref_draws, seed, threads == 0 ? default_thread_count() : threads);
      if (format == Format::json) {
        deliver(out, nlohmann::json{{"model", to_spec(m)},
                                    {"stat", to_string(cell.stat)},
                                    {"regime", to_string(cell.regime)},
                                    {"rhs", cell.rhs},
                                    {"seed", seed},
                                    {"draws", draws}}
                             .dump(2) +
                         "\n");
      } else {
        std::string s = "value\n";
        for (double d : draws) s += format_double(d) + '\n';
        deliver(out, s);
      }
      return 0;
    }

    if (functionals->parsed()) {
      std::vector<std::vector<std::string>> rows;
      for (double x : xs) {
        for (double y : ys) {
          const TransferBound tb = check_transfer_bound(m, x, y);
          rows.push_back({format_double(x), format_double(y), format_double(U_integral(m, x, y)),
                          format_double(W_integral(m, x, y)), format_double(tb.lhs), format_double(tb.rhs),
                          tb.holds ? "true" : "false"});
        }
      }
      deliver(out, table(format, {"x", "y", "U", "W", "bound_lhs", "bound_rhs", "holds"}, rows));
      return 0;
    }
  } catch (const Error& e) {
    report_error(to_string(e.category()), e.what());
    return exit_code(e.category());
  }
  return 0;
}
