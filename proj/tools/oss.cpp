#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oss/harness.hpp"

namespace {

int cmd_pair_check(const std::string& pair_id, int series_override) {
  oss::GridSpec grid;
  if (series_override >= 0) grid.series_override = (series_override != 0);
  const auto report = oss::pair_check(pair_id, grid);
  std::cout << oss::format_pair_check(report);
  return 0;
}

int cmd_run(const std::string& config_path,
            const std::vector<std::string>& pair_override,
            const std::vector<std::string>& fn_override, int nmax,
            const std::string& out_override, int threads) {
  oss::ExperimentConfig cfg = config_path.empty()
                                  ? oss::default_config()
                                  : oss::load_config(config_path);
  if (!pair_override.empty()) cfg.pair_ids = pair_override;
  if (!fn_override.empty()) cfg.fn_ids = fn_override;
  if (nmax > 0) {
    cfg.n_grid.clear();
    for (int n = 3; n <= nmax; n = 2 * n + 1) cfg.n_grid.push_back(n);
  }
  if (!out_override.empty()) cfg.output_path = out_override;
  if (threads > 0) cfg.threads = threads;

  const auto report = oss::run_sweep(cfg);
  oss::emit_csv(report, cfg.output_path);
  for (const auto& s : report.summary) {
    std::cout << s.pair_id << ' ' << s.fn_id << " x=" << s.x << " [" << s.label
              << "]"
              << " corollary1_decay=" << oss::to_string(s.corollary1_decay)
              << " domination_bounded=" << oss::to_string(s.domination_bounded)
              << " negative_control=" << oss::to_string(s.negative_control);
    if (!s.note.empty()) std::cout << "  (" << s.note << ")";
    std::cout << '\n';
  }
  std::cout << "rows: " << report.rows.size() << " -> " << cfg.output_path
            << "[.csv|.profile.<pair>.csv|.summary.csv]\n";
  return oss::report_exit_code(report);
}

int cmd_report(const std::string& in_path, double decay_factor) {
  oss::Tolerances tol;
  if (decay_factor > 0.0) tol.decay_factor = decay_factor;
  const auto rows = oss::read_rows_csv(in_path);
  const auto verdicts = oss::derive_verdicts(rows, tol);
  bool any_fail = false;
  for (const auto& s : verdicts) {
    std::cout << s.pair_id << ' ' << s.fn_id << " x=" << s.x
              << " corollary1_decay=" << oss::to_string(s.corollary1_decay)
              << " domination_bounded=" << oss::to_string(s.domination_bounded)
              << '\n';
    any_fail = any_fail || s.corollary1_decay == oss::Verdict::fail ||
               s.domination_bounded == oss::Verdict::fail;
  }
  return any_fail ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong means of Fourier series against Orlicz pointwise "
               "characteristics: batch sweeps, pair checks, reports"};
  app.require_subcommand(1);

  auto* pc = app.add_subcommand("pair-check",
                                "evaluate the structural conditions of a pair");
  std::string pair_id;
  int series_override = -1;
  pc->add_option("pair", pair_id, "pair id: exp, power:<alpha>, file:<path>")
      ->required();
  pc->add_option("--assume-series-converges", series_override,
                 "override the series heuristic with 0 or 1");

  auto* run = app.add_subcommand("run", "run a sweep and write CSV reports");
  std::string config_path, out_override;
  std::vector<std::string> pair_override, fn_override;
  int nmax = 0, threads = 0;
  run->add_option("--config", config_path, "flat key=value config file");
  run->add_option("--pair", pair_override, "pair ids (overrides config)");
  run->add_option("--fn", fn_override, "function ids (overrides config)");
  run->add_option("--nmax", nmax, "largest n; grid becomes 3,7,...,nmax");
  run->add_option("--out", out_override, "output stem or .csv path");
  run->add_option("--threads", threads, "worker threads (also OSS_THREADS)");

  auto* rep = app.add_subcommand("report",
                                 "re-derive verdicts from an existing rows CSV");
  std::string in_path;
  double decay_factor = 0.0;
  rep->add_option("--in", in_path, "rows CSV produced by `run`")->required();
  rep->add_option("--decay-factor", decay_factor,
                  "decay threshold (default 0.2)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (pc->parsed()) return cmd_pair_check(pair_id, series_override);
    if (run->parsed()) {
      return cmd_run(config_path, pair_override, fn_override, nmax,
                     out_override, threads);
    }
    if (rep->parsed()) return cmd_report(in_path, decay_factor);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
