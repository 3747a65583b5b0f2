#include "rrc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "binio.hpp"
#include "rrc/algos.hpp"
#include "rrc/artifact.hpp"
#include "rrc/config.hpp"
#include "rrc/data.hpp"
#include "rrc/errors.hpp"
#include "rrc/eval.hpp"

namespace rrc {

namespace {

namespace fs = std::filesystem;

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  int jobs = 1;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "key=value config file");
  cmd->add_option("--set", c.sets, "override a config key, key=value (repeatable)")->allow_extra_args(false);
  c.seed_opt = cmd->add_option("--seed", c.seed, "master seed; falls back to the config, then RRCB_SEED, then 0");
  c.jobs_opt = cmd->add_option("--jobs", c.jobs, "worker thread cap")->check(CLI::Range(1, std::numeric_limits<int>::max()));
}

RunConfig resolve(const Common& c) {
  RunConfig cfg;
  if (!c.config.empty()) cfg.load_file(c.config);
  for (const auto& s : c.sets) cfg.set_assignment(s);
  if (c.seed_opt->count() > 0) {
    cfg.set("seed", std::to_string(c.seed));
  } else if (!cfg.explicitly_set("seed")) {
    const char* env = std::getenv("RRCB_SEED");
    if (env != nullptr && *env != '\0') {
      try {
        cfg.set("seed", env);
      } catch (const InputError&) {
        throw InputError("RRCB_SEED is not an integer: '" + std::string(env) + "'");
      }
    }
  }
  if (c.jobs_opt->count() > 0) cfg.set("jobs", std::to_string(c.jobs));
  if (cfg.integer("jobs") < 1) throw InputError("jobs must be >= 1");
  return cfg;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class Summary {
 public:
  explicit Summary(std::string command) { add("command", std::move(command)); }
  Summary& add(const std::string& k, const std::string& v) {
    line_ += (line_.empty() ? "" : " ") + k + "=" + v;
    return *this;
  }
  Summary& add(const std::string& k, double v) { return add(k, fmt(v)); }
  Summary& add(const std::string& k, int v) { return add(k, std::to_string(v)); }
  const std::string& line() const { return line_; }

 private:
  std::string line_;
};

fs::path sidecar(const fs::path& out, const std::string& suffix) {
  return out.parent_path() / (out.stem().string() + suffix);
}

void write_echo(const RunConfig& cfg, const std::string& command_line, const fs::path& path) {
  binio::write_file(path, "# rrcb " + command_line + "\n" + cfg.echo());
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / double(v.size());
}

std::string histogram(const std::vector<double>& v, double lo, double hi, int bins = 10) {
  std::vector<int> counts(std::size_t(bins), 0);
  const double width = hi > lo ? (hi - lo) / bins : 1.0;
  for (double x : v) {
    const int b = std::clamp(int((x - lo) / width), 0, bins - 1);
    ++counts[std::size_t(b)];
  }
  std::string s = "[" + fmt(lo) + ", " + fmt(hi) + "]";
  for (int c : counts) s += " " + std::to_string(c);
  return s;
}

void require_env_layout(const Dataset& d) {
  if (d.act_dim() != kActionDim || d.obs_dim() != obs_layout::dim(d.task()))
    throw FormatError("dataset layout (obs " + std::to_string(d.obs_dim()) + ", act " + std::to_string(d.act_dim()) +
                      ") does not match the " + std::string(task_name(d.task())) + " environment (obs " +
                      std::to_string(obs_layout::dim(d.task())) + ", act " + std::to_string(kActionDim) + ")");
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) s.replace(pos, from.size(), to);
  return s;
}

PolicyEntry artifact_entry(std::string name, std::string path_pattern) {
  return {std::move(name), [pattern = std::move(path_pattern)](const Combo& c) -> std::shared_ptr<const Policy> {
            std::string path = replace_all(pattern, "{task}", std::string(task_name(c.task)));
            path = replace_all(path, "{quality}", quality_name(c.quality));
            path = replace_all(path, "{combo}", c.name());
            auto art = std::make_shared<const PolicyArtifact>(load_policy(path));
            if (art->task != c.task)
              throw FormatError(path + ": policy was trained for " + std::string(task_name(art->task)));
            return std::make_shared<ArtifactPolicy>(std::move(art));
          }};
}

PolicyEntry parse_policy_entry(const std::string& spec, const RunConfig& cfg) {
  const ArenaSpec arena = cfg.env_config().arena;
  const WeakParams weak = cfg.weak_params();
  if (spec == "behavior") return behavior_entry(arena, weak);
  if (spec == "expert" || spec == "weak") {
    auto p = std::make_shared<ScriptedPolicy>(spec == "expert" ? BehaviorKind::Expert : BehaviorKind::Weak, arena, weak);
    return {spec, [p](const Combo&) -> std::shared_ptr<const Policy> { return p; }};
  }
  const auto eq = spec.find('=');
  std::string name = eq == std::string::npos ? fs::path(spec).stem().string() : spec.substr(0, eq);
  std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
  if (name.empty() || path.empty()) throw InputError("malformed policy entry '" + spec + "' (expected name=path)");
  return artifact_entry(std::move(name), std::move(path));
}

// ---------------------------------------------------------------- commands

struct GenArgs {
  std::string task, quality, out;
  int episodes = 0;
  CLI::Option* episodes_opt = nullptr;
};

int cmd_gen_data(const GenArgs& a, const RunConfig& base, const std::string& cl, std::ostream& out) {
  RunConfig cfg = base;
  if (a.episodes_opt->count() > 0) cfg.set("data.episodes", std::to_string(a.episodes));
  GenerateConfig g;
  g.task = parse_task(a.task);
  g.quality = parse_quality(a.quality);
  g.episodes = int(cfg.integer("data.episodes"));
  g.seed = std::uint64_t(cfg.integer("seed"));
  g.env = cfg.env_config();
  g.weak = cfg.weak_params();
  g.workers = int(cfg.integer("jobs"));
  const GenerateResult r = generate_dataset(g);
  save_dataset(r.data, a.out);
  write_echo(cfg, cl, sidecar(a.out, ".config.txt"));

  const int successes = int(std::count(r.success.begin(), r.success.end(), true));
  out << Summary("gen-data")
             .add("task", a.task)
             .add("quality", a.quality)
             .add("episodes", r.data.num_episodes())
             .add("expert", r.data.count_behavior(BehaviorKind::Expert))
             .add("weak", r.data.count_behavior(BehaviorKind::Weak))
             .add("mean_return", mean_of(r.data.episode_returns()))
             .add("success_rate", double(successes) / double(r.success.size()))
             .add("out", a.out)
             .line()
      << "\n";
  return kExitOk;
}

struct TrainArgs {
  std::string algo, dataset, out;
};

int cmd_train(const TrainArgs& a, const RunConfig& cfg, const std::string& cl, std::ostream& out) {
  const Algo algo = parse_algo(a.algo);
  const TrainConfig tc = cfg.train_config(algo);
  const Dataset d = load_dataset(a.dataset);
  require_env_layout(d);
  const TrainResult r = train(d, tc);
  save_policy(r.policy, a.out);
  r.log.write_csv(sidecar(a.out, ".log.csv"));
  write_echo(cfg, cl, sidecar(a.out, ".config.txt"));
  out << Summary("train")
             .add("algo", a.algo)
             .add("task", std::string(task_name(d.task())))
             .add("episodes", d.num_episodes())
             .add("steps", tc.steps)
             .add("initial_loss", r.initial_loss)
             .add("final_loss", r.final_loss)
             .add("out", a.out)
             .line()
      << "\n";
  return kExitOk;
}

struct TransformArgs {
  std::string dataset, out;
  double init_frac = 0.0;
  CLI::Option* init_frac_opt = nullptr;
  int k = 3;
  int history = 1;
};

void print_sizes(std::ostream& out, const Dataset& in, const Dataset& result) {
  const auto& ri = in.episode_returns();
  const auto& ro = result.episode_returns();
  double lo = 0.0, hi = 0.0;
  if (!ri.empty()) {
    lo = *std::min_element(ri.begin(), ri.end());
    hi = *std::max_element(ri.begin(), ri.end());
  }
  out << "episodes: " << in.num_episodes() << " -> " << result.num_episodes() << "\n";
  out << "returns before: " << histogram(ri, lo, hi) << "\n";
  out << "returns after:  " << histogram(ro, lo, hi) << "\n";
}

int cmd_filter(const TransformArgs& a, const RunConfig& base, const std::string& cl, std::ostream& out) {
  RunConfig cfg = base;
  if (a.init_frac_opt->count() > 0) cfg.set("filter.init_frac", fmt(a.init_frac));
  const Dataset d = load_dataset(a.dataset);
  const FilterResult r = filter_expert_iterative(d, cfg.filter_config());
  save_dataset(r.subset, a.out);
  write_echo(cfg, cl, sidecar(a.out, ".config.txt"));
  print_sizes(out, d, r.subset);
  out << Summary("filter")
             .add("episodes_in", d.num_episodes())
             .add("episodes_out", r.subset.num_episodes())
             .add("iterations", int(r.log.size()))
             .add("expert_out", r.subset.count_behavior(BehaviorKind::Expert))
             .add("mean_return_in", mean_of(d.episode_returns()))
             .add("mean_return_out", mean_of(r.subset.episode_returns()))
             .add("out", a.out)
             .line()
      << "\n";
  return kExitOk;
}

int cmd_augment(const TransformArgs& a, const RunConfig& cfg, const std::string& cl, std::ostream& out) {
  const Dataset d = load_dataset(a.dataset);
  const Dataset r = rotational_augment(d, a.k);
  save_dataset(r, a.out);
  write_echo(cfg, cl, sidecar(a.out, ".config.txt"));
  print_sizes(out, d, r);
  out << Summary("augment")
             .add("k", a.k)
             .add("episodes_in", d.num_episodes())
             .add("episodes_out", r.num_episodes())
             .add("out", a.out)
             .line()
      << "\n";
  return kExitOk;
}

int cmd_stack(const TransformArgs& a, const RunConfig& cfg, const std::string& cl, std::ostream& out) {
  const Dataset d = load_dataset(a.dataset);
  const Dataset r = history_stack(d, a.history);
  save_dataset(r, a.out);
  write_echo(cfg, cl, sidecar(a.out, ".config.txt"));
  print_sizes(out, d, r);
  out << Summary("stack")
             .add("history", a.history)
             .add("obs_dim_in", d.obs_dim())
             .add("obs_dim_out", r.obs_dim())
             .add("episodes", r.num_episodes())
             .add("out", a.out)
             .line()
      << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::vector<std::string> policies, combos;
  std::string out;
  int robots = 0, goals = 0;
  CLI::Option* robots_opt = nullptr;
  CLI::Option* goals_opt = nullptr;
};

std::vector<Combo> parse_combos(const std::vector<std::string>& names) {
  if (names.empty()) return all_combos();
  std::vector<Combo> combos;
  for (const auto& n : names) combos.push_back(Combo::parse(n));
  return combos;
}

void add_scores(Summary& s, const EvalReport& report) {
  for (const auto& p : report.overall) s.add("overall_" + p.policy, p.overall);
}

int report_errors(const EvalReport& report, std::ostream& err) {
  for (const auto& e : report.errors) err << "error: " << e << "\n";
  return report.load_failure ? kExitFormat : kExitOk;
}

int cmd_evaluate(const EvalArgs& a, const RunConfig& base, const std::string& cl, std::ostream& out,
                 std::ostream& err) {
  RunConfig cfg = base;
  if (a.robots_opt->count() > 0) cfg.set("eval.robots", std::to_string(a.robots));
  if (a.goals_opt->count() > 0) {
    cfg.set("eval.goals_push", std::to_string(a.goals));
    cfg.set("eval.goals_lift", std::to_string(a.goals));
  }
  std::vector<PolicyEntry> entries;
  for (const auto& spec : a.policies) {
    PolicyEntry e = parse_policy_entry(spec, cfg);
    for (const auto& prev : entries)
      if (prev.name == e.name) throw InputError("duplicate policy name '" + e.name + "'");
    entries.push_back(std::move(e));
  }
  const std::vector<Combo> combos = parse_combos(a.combos);
  const EvalReport report = run_evaluation(entries, combos, cfg.eval_config());
  emit_report(report, a.out);
  write_echo(cfg, cl, fs::path(a.out) / "config.txt");
  out << report_text(report);
  const int code = report_errors(report, err);
  Summary s("evaluate");
  s.add("policies", int(entries.size())).add("combos", int(combos.size())).add("rows", int(report.rows.size()));
  add_scores(s, report);
  s.add("load_failure", report.load_failure ? 1 : 0).add("out", a.out);
  out << s.line() << "\n";
  return code;
}

struct ReproArgs {
  std::string scale = "tiny";
  std::string out = "repro";
  bool check = false;
};

void apply_scale(RunConfig& cfg, const std::string& scale) {
  std::vector<std::pair<std::string, std::string>> preset;
  if (scale == "tiny") {
    preset = {{"data.episodes", "20"}, {"train.steps", "300"},   {"train.hidden", "64,64"},   {"train.batch", "64"},
              {"train.log_every", "100"}, {"eval.robots", "1"}, {"filter.train_steps", "100"}};
  } else if (scale == "small") {
    preset = {{"data.episodes", "100"}, {"train.steps", "3000"}, {"eval.robots", "2"}};
  }
  for (const auto& [k, v] : preset)
    if (!cfg.explicitly_set(k)) cfg.set(k, v);
}

struct CheckLine {
  std::string name;
  double value, bound;
  bool pass;
};

std::vector<CheckLine> repro_checks(const EvalReport& report, const EvalReport& weak, const std::vector<Combo>& combos) {
  std::vector<CheckLine> checks;
  for (const Combo& c : combos) {
    if (c.quality != Quality::Expert) continue;
    const ReportRow* b = report.find(c, "behavior");
    const ReportRow* w = weak.find(c, "weak");
    if (b == nullptr || w == nullptr) continue;
    const double floor = c.task == Task::Push ? 0.80 : 0.50;
    checks.push_back({c.name() + ".expert_success", b->success_rate, floor, b->success_rate >= floor});
    checks.push_back({c.name() + ".weak_return_ratio", w->mean_return / b->mean_return, 0.7,
                      w->mean_return <= 0.7 * b->mean_return});
  }
  const Combo pm{Task::Push, Quality::Mixed};
  const ReportRow* bc = report.find(pm, "bc");
  const ReportRow* fbc = report.find(pm, "filtered-bc");
  if (bc != nullptr && fbc != nullptr) {
    const double ratio = bc->mean_return > 0.0 ? fbc->mean_return / bc->mean_return : 0.0;
    checks.push_back({"push-mixed.filtered_bc_ratio", ratio, 1.2, fbc->mean_return >= 1.2 * bc->mean_return});
  }
  return checks;
}

int cmd_repro(const ReproArgs& a, const RunConfig& base, const std::string& cl, std::ostream& out,
              std::ostream& err) {
  RunConfig cfg = base;
  apply_scale(cfg, a.scale);
  const fs::path dir(a.out);
  const Algo method = parse_algo(cfg.text("repro.algo"));
  const std::string method_name = algo_name(method);
  const auto seed = std::uint64_t(cfg.integer("seed"));
  const int workers = int(cfg.integer("jobs"));
  const EnvConfig env = cfg.env_config();
  const std::vector<Combo> combos = all_combos();
  fs::create_directories(dir / "data");
  fs::create_directories(dir / "policies");
  write_echo(cfg, cl, dir / "config.txt");

  const auto policy_path = [&](const Combo& c, const std::string& name) {
    return dir / "policies" / (c.name() + "-" + name + ".rrcp");
  };
  const auto fit = [&](const Dataset& d, Algo algo, const fs::path& path) {
    const TrainResult r = train(d, cfg.train_config(algo));
    save_policy(r.policy, path);
    r.log.write_csv(sidecar(path, ".log.csv"));
    out << "trained " << path.filename().string() << " loss " << fmt(r.initial_loss) << " -> " << fmt(r.final_loss)
        << "\n";
  };

  for (const Combo& c : combos) {
    GenerateConfig g;
    g.task = c.task;
    g.quality = c.quality;
    g.episodes = int(cfg.integer("data.episodes"));
    if (c.quality == Quality::Mixed && g.episodes % 2 != 0) ++g.episodes;
    g.seed = seed;
    g.env = env;
    g.weak = cfg.weak_params();
    g.workers = workers;
    const Dataset d = generate_dataset(g).data;
    save_dataset(d, dir / "data" / (c.name() + ".rrcb"));
    out << "generated " << c.name() << " episodes " << d.num_episodes() << " mean_return "
        << fmt(mean_of(d.episode_returns())) << "\n";

    fit(d, Algo::BC, policy_path(c, "bc"));
    fit(d, method, policy_path(c, method_name));
    const FilterResult f = filter_expert_iterative(d, cfg.filter_config());
    save_dataset(f.subset, dir / "data" / (c.name() + "-filtered.rrcb"));
    fit(f.subset, Algo::BC, policy_path(c, "filtered-bc"));
  }

  std::vector<PolicyEntry> entries{behavior_entry(env.arena, cfg.weak_params())};
  for (const std::string& name : {std::string("bc"), std::string("filtered-bc"), method_name})
    entries.push_back(artifact_entry(name, (dir / "policies" / ("{combo}-" + name + ".rrcp")).string()));
  const EvalProtocolConfig ecfg = cfg.eval_config();
  const EvalReport report = run_evaluation(entries, combos, ecfg);
  emit_report(report, dir);
  out << report_text(report);
  int code = report_errors(report, err);

  Summary s("repro");
  s.add("scale", a.scale);
  add_scores(s, report);
  if (a.check) {
    const std::vector<Combo> expert_combos{{Task::Push, Quality::Expert}, {Task::Lift, Quality::Expert}};
    const EvalReport weak = run_evaluation({parse_policy_entry("weak", cfg)}, expert_combos, ecfg);
    bool ok = true;
    for (const auto& c : repro_checks(report, weak, combos)) {
      const bool upper = c.name.find("weak_return_ratio") != std::string::npos;
      out << "check " << c.name << " " << fmt(c.value) << (upper ? " <= " : " >= ") << fmt(c.bound) << " "
          << (c.pass ? "pass" : "FAIL") << "\n";
      ok = ok && c.pass;
    }
    s.add("check", ok ? "pass" : "fail");
    if (!ok && code == kExitOk) code = kExitCheckFailed;
  }
  s.add("out", a.out);
  out << s.line() << "\n";
  return code;
}

std::string join_args(int argc, const char* const* argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) s += (i > 1 ? " " : "") + std::string(argv[i]);
  return s;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Offline-RL manipulation benchmark: datasets, training, filtering, evaluation", "rrcb"};
  app.require_subcommand(1);

  Common gen_c, train_c, filter_c, augment_c, stack_c, eval_c, repro_c;

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "generate a dataset from the scripted controllers");
  gen_cmd->add_option("--task", gen.task, "push|lift")->required()->check(CLI::IsMember({"push", "lift"}));
  gen_cmd->add_option("--quality", gen.quality, "expert|mixed")->required()->check(CLI::IsMember({"expert", "mixed"}));
  gen.episodes_opt = gen_cmd->add_option("--episodes", gen.episodes, "episode count")->check(CLI::Range(1, std::numeric_limits<int>::max()));
  gen_cmd->add_option("--out", gen.out, "dataset path")->required();
  add_common(gen_cmd, gen_c);

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "train a policy on a dataset");
  train_cmd->add_option("--algo", tr.algo, "bc|crr|awac|cql|iql|td3bc")
      ->required()
      ->check(CLI::IsMember({"bc", "crr", "awac", "cql", "iql", "td3bc"}));
  train_cmd->add_option("--dataset", tr.dataset, "input dataset")->required();
  train_cmd->add_option("--out", tr.out, "policy path")->required();
  add_common(train_cmd, train_c);

  TransformArgs tf;
  auto* filter_cmd = app.add_subcommand("filter", "keep the episodes the iterative classifier labels expert");
  filter_cmd->add_option("--dataset", tf.dataset)->required();
  filter_cmd->add_option("--out", tf.out)->required();
  tf.init_frac_opt = filter_cmd->add_option("--init-frac", tf.init_frac, "fraction of top-return seeds");
  add_common(filter_cmd, filter_c);

  TransformArgs ta;
  auto* augment_cmd = app.add_subcommand("augment", "add 120-degree rotated copies of every episode");
  augment_cmd->add_option("--dataset", ta.dataset)->required();
  augment_cmd->add_option("--out", ta.out)->required();
  augment_cmd->add_option("--k", ta.k, "copies including the original (1..3)")->capture_default_str();
  add_common(augment_cmd, augment_c);

  TransformArgs ts;
  auto* stack_cmd = app.add_subcommand("stack", "stack observation and action history");
  stack_cmd->add_option("--dataset", ts.dataset)->required();
  stack_cmd->add_option("--out", ts.out)->required();
  stack_cmd->add_option("--history", ts.history)->required()->check(CLI::Range(1, std::numeric_limits<int>::max()));
  add_common(stack_cmd, stack_c);

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("evaluate", "run the evaluation protocol and write the report");
  eval_cmd->add_option("--policies", ev.policies, "behavior|expert|weak|name=path ({task} {quality} {combo} expand)")
      ->required()
      ->delimiter(',');
  eval_cmd->add_option("--combos", ev.combos, "push-expert,push-mixed,lift-expert,lift-mixed (default all)")
      ->delimiter(',');
  ev.robots_opt = eval_cmd->add_option("--robots", ev.robots)->check(CLI::Range(1, std::numeric_limits<int>::max()));
  ev.goals_opt = eval_cmd->add_option("--goals", ev.goals, "goals per robot per combo")->check(CLI::Range(1, std::numeric_limits<int>::max()));
  eval_cmd->add_option("--out", ev.out, "report directory")->required();
  add_common(eval_cmd, eval_c);

  ReproArgs rp;
  auto* repro_cmd = app.add_subcommand("repro", "generate, train, filter and evaluate end to end");
  repro_cmd->add_option("--scale", rp.scale)->check(CLI::IsMember({"tiny", "small", "full"}))->capture_default_str();
  repro_cmd->add_option("--out", rp.out, "output directory")->capture_default_str();
  repro_cmd->add_flag("--check", rp.check, "exit 3 when an acceptance inequality fails");
  add_common(repro_cmd, repro_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    CLI::App* failing = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << "error: " << e.what() << "\n" << "run with " << failing->get_name() << " --help for usage\n";
    return kExitUsage;
  }

  const std::string cl = join_args(argc, argv);
  try {
    if (gen_cmd->parsed()) return cmd_gen_data(gen, resolve(gen_c), cl, out);
    if (train_cmd->parsed()) return cmd_train(tr, resolve(train_c), cl, out);
    if (filter_cmd->parsed()) return cmd_filter(tf, resolve(filter_c), cl, out);
    if (augment_cmd->parsed()) return cmd_augment(ta, resolve(augment_c), cl, out);
    if (stack_cmd->parsed()) return cmd_stack(ts, resolve(stack_c), cl, out);
    if (eval_cmd->parsed()) return cmd_evaluate(ev, resolve(eval_c), cl, out, err);
    if (repro_cmd->parsed()) return cmd_repro(rp, resolve(repro_c), cl, out, err);
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const std::invalid_argument& e) {
    // InputError, ParameterError
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace rrc
