#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oss/nfunction.hpp"
#include "oss/strongmeans.hpp"

namespace oss {

struct Tolerances {
  double quad_rtol = 1e-10;
  double inv_atol = 1e-12;
  double decay_factor = 0.2;   // tail-max must fall below factor * base value
  double zero_eps = 1e-12;     // below this a series counts as identically 0
  double domination_spread = 2.0;  // allowed max/min of H/RHS over the window
};

struct ExperimentConfig {
  std::vector<std::string> pair_ids;
  std::vector<std::string> fn_ids;
  std::vector<int> n_grid;  // strictly increasing
  // explicit evaluation points per function id; when absent the labeled
  // points of the corpus member are used
  std::map<std::string, std::vector<double>> points;
  Tolerances tol;
  std::string output_path = "sweep";
  int threads = 0;  // 0: hardware default, capped by OSS_THREADS
};

ExperimentConfig default_config();
/// Flat key = value text; '#' starts a comment. Keys: pairs, fns, n_grid,
/// nmax, out, threads, decay_factor, zero_eps, points.<fn_id>.
ExperimentConfig load_config(const std::string& path);

enum class Verdict { pass, fail, skipped };
const char* to_string(Verdict v);

struct SweepRow {
  std::string fn_id;
  double x = 0.0;
  std::string pair_id;
  int n = 0;
  double h_phi = 0.0;
  double g_1psi = 0.0;
  double rhs_thm = 0.0;
  double rhs_proof_k2 = 0.0;
  double ratio_h_over_g = 0.0;
  double ratio_h_over_rhs = 0.0;
  int decay_flag = 0;  // 1 when h has fallen below factor * h(first n)
};

struct ProfileRow {
  std::string fn_id;
  double x = 0.0;
  int n = 0;
  double delta = 0.0;
  double w1 = 0.0;
  double wpsi = 0.0;
  double g12 = 0.0;
  double g1psi = 0.0;
  double m_diag = 0.0;
};

struct PointSummary {
  std::string pair_id;
  std::string fn_id;
  double x = 0.0;
  std::string label;  // "lpsi", "non_lpsi", or "explicit"
  double h_base = 0.0;
  double h_tail_max = 0.0;
  double rhs_base = 0.0;
  double rhs_tail_max = 0.0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  Verdict corollary1_decay = Verdict::skipped;
  Verdict domination_bounded = Verdict::skipped;
  Verdict negative_control = Verdict::skipped;
  std::string note;
};

struct SweepReport {
  ExperimentConfig cfg;
  std::vector<SweepRow> rows;
  std::map<std::string, std::vector<ProfileRow>> profiles;  // per pair id
  std::vector<PointSummary> summary;
};

SweepReport run_sweep(const ExperimentConfig& cfg);

/// rows file at `path`, profile files at `<stem>.profile.<pair>.csv`,
/// summary at `<stem>.summary.csv`. 17 significant digits throughout.
void emit_csv(const SweepReport& report, const std::string& path);

/// Recomputes the per-point verdicts from rows alone (what `report` does).
std::vector<PointSummary> derive_verdicts(const std::vector<SweepRow>& rows,
                                          const Tolerances& tol);

/// 0 when every verdict passes, 2 otherwise.
int report_exit_code(const SweepReport& report);

struct PairCheckReport {
  std::string pair_id;
  ConditionFlags flags;
  ConditionDiagnostics diag;
};

PairCheckReport pair_check(const std::string& pair_id, GridSpec grid = {});
std::string format_pair_check(const PairCheckReport& report);

std::vector<SweepRow> read_rows_csv(const std::string& path);

}  // namespace oss
