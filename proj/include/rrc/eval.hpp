#pragma once

// Evaluation protocol: per-robot goal lists shared by every policy, jobs of
// 9 (Push) or 6 (Lift) episodes separated by object resets, and the
// return / success aggregation behind the report tables.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rrc/data.hpp"
#include "rrc/env.hpp"
#include "rrc/policy.hpp"

namespace rrc {

struct EvalProtocolConfig {
  int robots = 3;
  int goals_push = 9;   // per robot per combo
  int goals_lift = 6;
  int job_size_push = 9;
  int job_size_lift = 6;
  std::uint64_t seed = 0;
  int workers = 1;
  EnvConfig env;

  void validate() const;
  int goals(Task t) const { return t == Task::Push ? goals_push : goals_lift; }
  int job_size(Task t) const { return t == Task::Push ? job_size_push : job_size_lift; }
  int jobs_per_robot(Task t) const { return (goals(t) + job_size(t) - 1) / job_size(t); }
};

struct Combo {
  Task task = Task::Push;
  Quality quality = Quality::Expert;

  std::string name() const;  // e.g. "push-expert"
  static Combo parse(std::string_view s);
  friend bool operator==(const Combo&, const Combo&) = default;
};

/// The four task/dataset combinations in report order.
std::vector<Combo> all_combos();

/// A named policy; the factory is called once per combo and may throw, in
/// which case that combo's episodes score 0 and the error is recorded.
struct PolicyEntry {
  std::string name;
  std::function<std::shared_ptr<const Policy>(const Combo&)> factory;
};

/// The policy that generated the combo's dataset.
PolicyEntry behavior_entry(const ArenaSpec& arena, WeakParams weak = {}, std::string name = "behavior");

/// Goal list of one robot for one combo; identical for every policy.
std::vector<Goal> goal_list(const EvalProtocolConfig& cfg, int robot, const Combo& combo);

struct EpisodeRecord {
  int robot = 0;
  int goal_index = 0;
  int job = 0;
  double episode_return = 0.0;
  bool success = false;
  bool failed = false;
  Goal goal;
};

struct MeanSem {
  double mean = 0.0;
  double sem = 0.0;
};

/// Sample standard deviation over sqrt(n); sem = 0 for n = 1.
MeanSem mean_sem(std::span<const double> values);
/// Fraction of successes with sqrt(p (1 - p) / n).
MeanSem compute_success_rate(const std::vector<bool>& outcomes);
/// Arithmetic mean of per-combo mean returns.
double compute_overall_score(std::span<const double> per_combo_means);

struct ReportRow {
  Task task = Task::Push;
  Quality quality = Quality::Expert;
  std::string policy;
  int n_episodes = 0;
  double mean_return = 0.0;
  double sem_return = 0.0;
  double success_rate = 0.0;
  double sem_success = 0.0;
};

struct PolicyScore {
  std::string policy;
  double overall = 0.0;
};

struct EvalReport {
  std::vector<ReportRow> rows;          // combo-major, then policy order
  std::vector<PolicyScore> overall;     // policy order
  std::vector<std::string> errors;      // load and episode failures
  bool load_failure = false;
  std::string reference_policy = "behavior";
  // Per (combo, policy) episode records in (robot, goal) order.
  std::vector<std::vector<EpisodeRecord>> episodes;

  /// Recomputes `overall` from `rows`.
  void compute_overall();
  const ReportRow* find(const Combo& c, std::string_view policy) const;
  double overall_of(std::string_view policy) const;
};

EvalReport run_evaluation(const std::vector<PolicyEntry>& policies, const std::vector<Combo>& combos,
                          const EvalProtocolConfig& cfg);

std::string report_csv(const EvalReport& r);
std::vector<ReportRow> parse_report_csv(std::string_view text);
std::string report_text(const EvalReport& r);
std::string report_svg(const EvalReport& r);

/// Writes report.csv, report.txt and scores.svg into dir.
void emit_report(const EvalReport& r, const std::filesystem::path& dir);

}  // namespace rrc
