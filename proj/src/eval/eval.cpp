#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "binio.hpp"
#include "rrc/eval.hpp"

namespace rrc {

namespace {

std::uint64_t combo_key(const Combo& c) { return std::uint64_t(c.task) * 4 + std::uint64_t(c.quality); }

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = s.find(sep, start);
    out.emplace_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

}  // namespace

void EvalProtocolConfig::validate() const {
  if (robots < 1 || goals_push < 1 || goals_lift < 1) throw ParameterError("robot and goal counts must be >= 1");
  if (job_size_push < 1 || job_size_lift < 1) throw ParameterError("job sizes must be >= 1");
  if (workers < 1) throw ParameterError("worker count must be >= 1");
  env.arena.validate();
  env.obs_model.validate();
  env.kernel.validate();
  env.success.validate();
}

std::string Combo::name() const { return std::string(task_name(task)) + "-" + quality_name(quality); }

Combo Combo::parse(std::string_view s) {
  const auto dash = s.find('-');
  if (dash == std::string_view::npos) throw InputError("combo '" + std::string(s) + "' is not task-quality");
  Combo c{parse_task(s.substr(0, dash)), parse_quality(s.substr(dash + 1))};
  if (c.quality != Quality::Expert && c.quality != Quality::Mixed)
    throw InputError("combo quality must be expert or mixed");
  return c;
}

std::vector<Combo> all_combos() {
  return {{Task::Push, Quality::Expert}, {Task::Push, Quality::Mixed}, {Task::Lift, Quality::Expert},
          {Task::Lift, Quality::Mixed}};
}

PolicyEntry behavior_entry(const ArenaSpec& arena, WeakParams weak, std::string name) {
  return {std::move(name), [arena, weak](const Combo& c) -> std::shared_ptr<const Policy> {
            return std::make_shared<BehaviorPolicy>(c.quality == Quality::Mixed, arena, weak);
          }};
}

std::vector<Goal> goal_list(const EvalProtocolConfig& cfg, int robot, const Combo& combo) {
  Rng rng(derive_seed(cfg.seed, {0x676f616cULL, std::uint64_t(robot), combo_key(combo)}));
  std::vector<Goal> goals;
  goals.reserve(std::size_t(cfg.goals(combo.task)));
  for (int g = 0; g < cfg.goals(combo.task); ++g) goals.push_back(sample_goal(combo.task, rng, cfg.env.arena));
  return goals;
}

MeanSem mean_sem(std::span<const double> values) {
  if (values.empty()) throw InputError("mean of an empty sample");
  const double n = double(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

MeanSem compute_success_rate(const std::vector<bool>& outcomes) {
  if (outcomes.empty()) throw InputError("success rate of an empty sample");
  const double n = double(outcomes.size());
  const double p = double(std::count(outcomes.begin(), outcomes.end(), true)) / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

double compute_overall_score(std::span<const double> per_combo_means) {
  if (per_combo_means.empty()) throw InputError("overall score needs at least one combo");
  double s = 0.0;
  for (double v : per_combo_means) s += v;
  return s / double(per_combo_means.size());
}

void EvalReport::compute_overall() {
  overall.clear();
  for (const auto& r : rows) {
    if (std::none_of(overall.begin(), overall.end(), [&](const PolicyScore& p) { return p.policy == r.policy; }))
      overall.push_back({r.policy, 0.0});
  }
  for (auto& p : overall) {
    std::vector<double> means;
    for (const auto& r : rows)
      if (r.policy == p.policy) means.push_back(r.mean_return);
    p.overall = compute_overall_score(means);
  }
}

const ReportRow* EvalReport::find(const Combo& c, std::string_view policy) const {
  for (const auto& r : rows)
    if (r.task == c.task && r.quality == c.quality && r.policy == policy) return &r;
  return nullptr;
}

double EvalReport::overall_of(std::string_view policy) const {
  for (const auto& p : overall)
    if (p.policy == policy) return p.overall;
  throw InputError("no policy named '" + std::string(policy) + "' in the report");
}

EvalReport run_evaluation(const std::vector<PolicyEntry>& policies, const std::vector<Combo>& combos,
                          const EvalProtocolConfig& cfg) {
  cfg.validate();
  if (policies.empty() || combos.empty()) throw InputError("evaluation needs at least one policy and one combo");
  for (std::size_t i = 0; i < policies.size(); ++i) {
    const auto& name = policies[i].name;
    if (name.empty() || name.find_first_of(",\n\"") != std::string::npos)
      throw InputError("policy name '" + name + "' must be non-empty without commas or quotes");
    for (std::size_t j = 0; j < i; ++j)
      if (policies[j].name == name) throw InputError("duplicate policy name '" + name + "'");
  }

  EvalReport report;
  const std::size_t n_cells = combos.size() * policies.size();
  std::vector<std::shared_ptr<const Policy>> loaded(n_cells);
  std::vector<std::string> load_error(n_cells);
  for (std::size_t ci = 0; ci < combos.size(); ++ci)
    for (std::size_t pi = 0; pi < policies.size(); ++pi) {
      const std::size_t cell = ci * policies.size() + pi;
      try {
        loaded[cell] = policies[pi].factory(combos[ci]);
        if (!loaded[cell]) throw InputError("factory returned no policy");
      } catch (const std::exception& e) {
        load_error[cell] = e.what();
      }
    }

  std::vector<std::vector<std::vector<Goal>>> goals(combos.size());
  for (std::size_t ci = 0; ci < combos.size(); ++ci)
    for (int r = 0; r < cfg.robots; ++r) goals[ci].push_back(goal_list(cfg, r, combos[ci]));

  struct Unit {
    std::size_t cell, ci;
    int robot, job;
  };
  std::vector<Unit> units;
  report.episodes.resize(n_cells);
  for (std::size_t ci = 0; ci < combos.size(); ++ci) {
    const Task task = combos[ci].task;
    const int n_goals = cfg.goals(task);
    for (std::size_t pi = 0; pi < policies.size(); ++pi) {
      const std::size_t cell = ci * policies.size() + pi;
      report.episodes[cell].resize(std::size_t(cfg.robots) * std::size_t(n_goals));
      for (int r = 0; r < cfg.robots; ++r)
        for (int j = 0; j < cfg.jobs_per_robot(task); ++j) units.push_back({cell, ci, r, j});
    }
  }

  parallel_for(int(units.size()), cfg.workers, [&](int u) {
    const Unit& unit = units[std::size_t(u)];
    const Combo& combo = combos[unit.ci];
    const Task task = combo.task;
    const int n_goals = cfg.goals(task), job_size = cfg.job_size(task);
    const std::uint64_t ck = combo_key(combo);
    const auto ur = std::uint64_t(unit.robot), uj = std::uint64_t(unit.job);
    const std::uint64_t robot_noise_seed = derive_seed(cfg.seed, {0x6e6f697365ULL, ur});
    Rng job_rng(derive_seed(cfg.seed, {0x6a6f62ULL, ur, ck, uj}));
    Env env(task, cfg.env, derive_seed(robot_noise_seed, {ck, uj}));
    EnvState state = reset_episode(job_rng, cfg.env.arena);
    auto& slots = report.episodes[unit.cell];
    const int g0 = unit.job * job_size, g1 = std::min(n_goals, g0 + job_size);
    for (int g = g0; g < g1; ++g) {
      if (g > g0) state = object_reset_trajectory(state, job_rng, cfg.env.arena);
      EpisodeRecord rec;
      rec.robot = unit.robot;
      rec.goal_index = g;
      rec.job = unit.job;
      rec.goal = goals[unit.ci][std::size_t(unit.robot)][std::size_t(g)];
      const auto& policy = loaded[unit.cell];
      if (!policy) {
        rec.failed = true;
      } else {
        const int episode_index = unit.robot * n_goals + g;
        const auto session =
            policy->start({task, derive_seed(cfg.seed, {0x706f6cULL, ur, ck, std::uint64_t(g)}), episode_index});
        const EpisodeOutcome out = run_episode(env, state, rec.goal, *session);
        rec.episode_return = out.failed ? 0.0 : out.episode_return;
        rec.success = out.success;
        rec.failed = out.failed;
        state = env.state();
      }
      slots[std::size_t(unit.robot) * std::size_t(n_goals) + std::size_t(g)] = rec;
    }
  });

  for (std::size_t ci = 0; ci < combos.size(); ++ci)
    for (std::size_t pi = 0; pi < policies.size(); ++pi) {
      const std::size_t cell = ci * policies.size() + pi;
      const auto& eps = report.episodes[cell];
      if (!load_error[cell].empty()) {
        report.load_failure = true;
        report.errors.push_back(policies[pi].name + " [" + combos[ci].name() + "]: " + load_error[cell]);
      } else {
        const auto failed = std::count_if(eps.begin(), eps.end(), [](const EpisodeRecord& e) { return e.failed; });
        if (failed > 0)
          report.errors.push_back(policies[pi].name + " [" + combos[ci].name() + "]: " + std::to_string(failed) +
                                  " failed episode(s) scored 0");
      }
      std::vector<double> returns;
      std::vector<bool> successes;
      for (const auto& e : eps) {
        returns.push_back(e.episode_return);
        successes.push_back(e.success);
      }
      const MeanSem ret = mean_sem(returns);
      const MeanSem rate = compute_success_rate(successes);
      report.rows.push_back({combos[ci].task, combos[ci].quality, policies[pi].name, int(eps.size()), ret.mean,
                             ret.sem, rate.mean, rate.sem});
    }
  report.compute_overall();
  return report;
}

std::string report_csv(const EvalReport& r) {
  std::string out = "task,quality,policy,n_episodes,mean_return,sem_return,success_rate,sem_success\n";
  for (const auto& row : r.rows) {
    out += std::string(task_name(row.task)) + ',' + quality_name(row.quality) + ',' + row.policy + ',' +
           std::to_string(row.n_episodes) + ',' + fmt17(row.mean_return) + ',' + fmt17(row.sem_return) + ',' +
           fmt17(row.success_rate) + ',' + fmt17(row.sem_success) + '\n';
  }
  return out;
}

std::vector<ReportRow> parse_report_csv(std::string_view text) {
  auto lines = split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != "task,quality,policy,n_episodes,mean_return,sem_return,success_rate,sem_success")
    throw FormatError("report CSV has an unexpected header");
  std::vector<ReportRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 8) throw FormatError("report CSV line " + std::to_string(i + 1) + " has wrong field count");
    try {
      rows.push_back({parse_task(f[0]), parse_quality(f[1]), f[2], std::stoi(f[3]), std::stod(f[4]), std::stod(f[5]),
                      std::stod(f[6]), std::stod(f[7])});
    } catch (const std::logic_error& e) {
      throw FormatError("report CSV line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return rows;
}

std::string report_text(const EvalReport& r) {
  std::size_t w = 6;
  for (const auto& row : r.rows) w = std::max(w, row.policy.size());
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-6s %-9s %-*s %5s %20s %16s\n", "task", "quality", int(w), "policy", "n",
                "return", "success");
  out << buf;
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%-6s %-9s %-*s %5d %10.1f +- %6.1f %7.2f +- %4.2f\n",
                  std::string(task_name(row.task)).c_str(), quality_name(row.quality).c_str(), int(w),
                  row.policy.c_str(), row.n_episodes, row.mean_return, row.sem_return, row.success_rate,
                  row.sem_success);
    out << buf;
  }
  out << "\noverall score (mean of per-combo mean returns)\n";
  for (const auto& p : r.overall) {
    std::snprintf(buf, sizeof buf, "  %-*s %10.1f\n", int(w), p.policy.c_str(), p.overall);
    out << buf;
  }
  for (const auto& e : r.errors) out << "error: " << e << '\n';
  return out.str();
}

std::string report_svg(const EvalReport& r) {
  const int bar_w = 60, gap = 30, left = 60, top = 30, height = 240;
  const int width = left + int(r.overall.size()) * (bar_w + gap) + gap;
  double ref = -1.0;
  for (const auto& p : r.overall)
    if (p.policy == r.reference_policy) ref = p.overall;
  double vmax = 1.0;
  for (const auto& p : r.overall) vmax = std::max(vmax, p.overall);
  const auto y_of = [&](double v) { return top + height - v / vmax * height; };
  std::ostringstream out;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" font-family=\"sans-serif\" "
                "font-size=\"11\">\n",
                width, top + height + 50);
  out << buf;
  std::snprintf(buf, sizeof buf, "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", left,
                top + height, width - gap / 2, top + height);
  out << buf;
  for (std::size_t i = 0; i < r.overall.size(); ++i) {
    const auto& p = r.overall[i];
    const int x = left + gap / 2 + int(i) * (bar_w + gap);
    const double y = y_of(p.overall);
    std::snprintf(buf, sizeof buf,
                  "<rect class=\"bar\" x=\"%d\" y=\"%.2f\" width=\"%d\" height=\"%.2f\" fill=\"#4a78b0\"/>\n", x, y,
                  bar_w, top + height - y);
    out << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%.2f\" text-anchor=\"middle\">%.1f</text>\n", x + bar_w / 2,
                  y - 4, p.overall);
    out << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\">%s</text>\n", x + bar_w / 2,
                  top + height + 16, p.policy.c_str());
    out << buf;
  }
  if (ref >= 0.0) {
    std::snprintf(buf, sizeof buf,
                  "<line class=\"reference\" x1=\"%d\" y1=\"%.2f\" x2=\"%d\" y2=\"%.2f\" stroke=\"#c03030\" "
                  "stroke-dasharray=\"6,4\"/>\n",
                  left, y_of(ref), width - gap / 2, y_of(ref));
    out << buf;
  }
  out << "</svg>\n";
  return out.str();
}

void emit_report(const EvalReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  binio::write_file(dir / "report.csv", report_csv(r));
  binio::write_file(dir / "report.txt", report_text(r));
  binio::write_file(dir / "scores.svg", report_svg(r));
}

}  // namespace rrc
