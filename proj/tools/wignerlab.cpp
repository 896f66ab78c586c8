// Command-line front end: runs declared experiments, regenerates plots from
// result tables, and exposes the exhaustive gluing audit directly.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wignerlab/config.hpp"
#include "wignerlab/csv.hpp"
#include "wignerlab/experiments.hpp"
#include "wignerlab/format.hpp"
#include "wignerlab/svg.hpp"
#include "wignerlab/version.hpp"

namespace {

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("WIGNERLAB_THREADS")) {
    try {
      const long long v = wignerlab::parse_int(env);
      if (v > 0 && v <= 1024) return static_cast<int>(v);
    } catch (const std::invalid_argument&) {
    }
    std::cerr << "warning: ignoring invalid WIGNERLAB_THREADS='" << env
              << "'\n";
  }
  return 1;
}

// Observables worth echoing to the terminal, per kind. Everything else
// stays in results.csv.
const std::vector<std::string>& headline_observables(const std::string& kind) {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"exact-vs-mc",
       {"exact_trace_moment", "mc_trace_moment", "z_trace_moment",
        "exact_variance_full", "exact_variance_correlated", "mc_variance",
        "z_variance"}},
      {"moments",
       {"s_rule", "mc_trace_moment", "asymptotic_moment",
        "moment_ratio_asymptotic", "moment_per_n_ratio_catalan"}},
      {"variance", {"variance_ratio"}},
      {"lln", {"threshold", "exceed_fraction"}},
      {"concentration", {"mean_norm", "empirical_tail", "concentration_bound"}},
      {"scaling", {"edge_gap", "scaling_exponent", "scaling_residual"}},
      {"glue-audit",
       {"correlated_pairs", "glued_outputs", "closure_violations",
        "length_violations", "multiplicity_drop_violations",
        "preimage_membership_violations", "max_preimage_count",
        "preimage_bound", "augment_candidates", "augment_insertions",
        "augment_violations"}},
      {"dyck", {"mean_marked_count", "marked_count_exponent"}},
      {"bound-chain",
       {"threshold_found", "threshold_n", "scan_monotone", "o1_dropped"}},
  };
  static const std::vector<std::string> empty;
  const auto it = table.find(kind);
  return it == table.end() ? empty : it->second;
}

void print_headlines(const wignerlab::RunArtifacts& artifacts,
                     const std::string& kind) {
  const std::vector<std::string>& wanted = headline_observables(kind);
  for (const wignerlab::ResultRow& r : artifacts.rows) {
    bool show = false;
    for (const std::string& name : wanted)
      if (r.observable == name) {
        show = true;
        break;
      }
    if (!show) continue;
    std::cout << "  " << r.observable;
    if (!r.params.empty()) std::cout << " [" << r.params << "]";
    std::cout << " = " << wignerlab::format_double(r.value);
    if (r.std_error)
      std::cout << " (stderr " << wignerlab::format_double(*r.std_error)
                << ")";
    std::cout << "\n";
  }
}

int run_command(const std::string& config_path, const std::string& out_flag,
                int threads_flag) {
  const wignerlab::ExperimentConfig config =
      wignerlab::load_config(config_path);
  const int threads = resolve_threads(threads_flag);
  const std::string out_dir = !out_flag.empty()  ? out_flag
                              : config.out       ? *config.out
                                                 : std::string(".");
  std::filesystem::create_directories(out_dir);

  const wignerlab::RunArtifacts artifacts =
      wignerlab::run_experiment(config, threads);

  const std::filesystem::path dir(out_dir);
  const std::string csv_path = (dir / "results.csv").string();
  wignerlab::write_csv(csv_path, artifacts.rows);
  const std::string summary_path = (dir / "summary.json").string();
  wignerlab::write_text(summary_path, artifacts.summary.dump(2) + "\n");
  std::vector<std::string> plot_paths;
  for (const auto& [name, content] : artifacts.plots) {
    const std::string path = (dir / name).string();
    wignerlab::write_text(path, content);
    plot_paths.push_back(path);
  }

  std::cout << "kind: " << config.kind << "\n";
  std::cout << "run id: " << artifacts.rows.front().run_id << "\n";
  print_headlines(artifacts, config.kind);
  std::cout << "rows: " << artifacts.rows.size() << " -> " << csv_path << "\n";
  std::cout << "summary: " << summary_path << "\n";
  for (const std::string& p : plot_paths) std::cout << "plot: " << p << "\n";
  return 0;
}

int plot_command(const std::string& kind, const std::string& csv_path,
                 std::string out_path) {
  const std::vector<wignerlab::ResultRow> rows = wignerlab::read_csv(csv_path);
  if (rows.empty()) throw std::runtime_error("'" + csv_path + "' has no rows");
  std::string svg;
  if (kind == "scaling") svg = wignerlab::make_scaling_plot(rows);
  else if (kind == "concentration")
    svg = wignerlab::make_concentration_plot(rows);
  else
    throw std::runtime_error("unknown plot kind '" + kind +
                             "' (expected scaling or concentration)");
  if (out_path.empty()) out_path = kind + ".svg";
  wignerlab::write_text(out_path, svg);
  std::cout << "plot: " << out_path << "\n";
  return 0;
}

int audit_command(long long n, long long s, std::uint64_t seed,
                  const std::string& out_flag) {
  wignerlab::ExperimentConfig config;
  config.kind = "glue-audit";
  config.n = n;
  config.s = s;
  config.seed = seed;
  if (!out_flag.empty()) config.out = out_flag;
  wignerlab::validate_config(config);

  const wignerlab::RunArtifacts artifacts = wignerlab::run_experiment(config);
  std::cout << "kind: glue-audit\n";
  print_headlines(artifacts, "glue-audit");
  if (!out_flag.empty()) {
    std::filesystem::create_directories(out_flag);
    const std::filesystem::path dir(out_flag);
    wignerlab::write_csv((dir / "results.csv").string(), artifacts.rows);
    wignerlab::write_text((dir / "summary.json").string(),
                          artifacts.summary.dump(2) + "\n");
    std::cout << "rows: " << artifacts.rows.size() << " -> "
              << (dir / "results.csv").string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // The eigensolver is called once per trial on small matrices; threading
  // happens across trials, so keep the BLAS layer single-threaded.
  setenv("OPENBLAS_NUM_THREADS", "1", 0);

  CLI::App app{"spectral-norm verification experiments for Wigner matrices"};
  app.require_subcommand(1);

  std::string config_path, out_path, plot_kind, csv_path;
  int threads = 0;

  CLI::App* run = app.add_subcommand("run", "run one configured experiment");
  run->add_option("--config", config_path, "experiment config file")
      ->required();
  run->add_option("--out", out_path, "output directory (overrides config)");
  run->add_option("--threads", threads,
                  "worker threads (or WIGNERLAB_THREADS)");

  CLI::App* plot = app.add_subcommand("plot", "render an SVG from results");
  plot->add_option("--kind", plot_kind, "scaling or concentration")
      ->required();
  plot->add_option("--csv", csv_path, "results.csv to read")->required();
  plot->add_option("--out", out_path, "output SVG path");

  long long audit_n = 0, audit_s = 0;
  std::uint64_t audit_seed = 1;
  CLI::App* audit =
      app.add_subcommand("audit", "exhaustive gluing audit at (n, s)");
  audit->add_option("--n", audit_n, "vertex count")->required();
  audit->add_option("--s", audit_s, "half length")->required();
  audit->add_option("--seed", audit_seed, "run id seed (default 1)");
  audit->add_option("--out", out_path, "output directory");

  CLI::App* version = app.add_subcommand("version", "print the version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(config_path, out_path, threads);
    if (plot->parsed()) return plot_command(plot_kind, csv_path, out_path);
    if (audit->parsed())
      return audit_command(audit_n, audit_s, audit_seed, out_path);
    if (version->parsed()) {
      std::cout << wignerlab::version_string() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
