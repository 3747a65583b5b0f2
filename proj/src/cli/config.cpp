#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "binio.hpp"
#include "rrc/config.hpp"

namespace rrc {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_real(std::string_view s, double& out) {
  const std::string tmp(s);
  char* end = nullptr;
  out = std::strtod(tmp.c_str(), &end);
  return !tmp.empty() && end == tmp.c_str() + tmp.size() && std::isfinite(out);
}

bool parse_int(std::string_view s, std::int64_t& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && !s.empty();
}

bool parse_int_list(std::string_view s, std::vector<int>& out) {
  out.clear();
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    std::int64_t v = 0;
    if (!parse_int(item, v) || v < 1 || v > (1 << 16)) return false;
    out.push_back(int(v));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return !out.empty();
}

using K = RunConfig::Kind;

std::vector<RunConfig::Key> build_schema() {
  const ArenaSpec a;
  const ObservationModel o;
  const TrainConfig t;
  const FilterConfig f;
  const PoseFilterConfig p;
  const EvalProtocolConfig e;
  const auto r = [](double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
  };
  const auto i = [](std::int64_t v) { return std::to_string(v); };
  const auto list = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
    return s;
  };
  return {
      {"seed", K::Int, "0", {}, "master seed (flag --seed and RRCB_SEED take part in resolution)"},
      {"jobs", K::Int, "1", {}, "worker threads"},
      {"arena.radius", K::Real, r(a.radius), {}, "m"},
      {"arena.cube_half_extent", K::Real, r(a.cube_half_extent), {}, "m"},
      {"arena.dt", K::Real, r(a.dt), {}, "s"},
      {"arena.gravity", K::Real, r(a.gravity), {}, "m/s^2"},
      {"arena.max_tip_step", K::Real, r(a.max_tip_step), {}, "m per step"},
      {"arena.contact_radius", K::Real, r(a.contact_radius), {}, "m"},
      {"arena.grasp_radius", K::Real, r(a.grasp_radius), {}, "m"},
      {"arena.workspace_offset", K::Real, r(a.workspace_offset), {}, "m"},
      {"arena.workspace_radius", K::Real, r(a.workspace_radius), {}, "m"},
      {"arena.home_radius", K::Real, r(a.home_radius), {}, "m"},
      {"arena.home_height", K::Real, r(a.home_height), {}, "m"},
      {"obs.sigma_pos", K::Real, r(o.sigma_pos), {}, "m"},
      {"obs.sigma_ori_deg", K::Real, r(o.sigma_ori_deg), {}, "deg"},
      {"obs.max_delay", K::Int, i(o.max_delay), {}, "steps"},
      {"obs.delay_prob", K::Real, r(o.delay_prob), {}, ""},
      {"obs.low_conf_prob", K::Real, r(o.low_conf_prob), {}, ""},
      {"obs.low_conf_noise_scale", K::Real, r(o.low_conf_noise_scale), {}, ""},
      {"kernel.a", K::Real, "30", {}, ""},
      {"kernel.b", K::Real, "1", {}, ""},
      {"success.pos_tol", K::Real, "0.02", {}, "m"},
      {"success.ori_tol_deg", K::Real, "22", {}, "deg"},
      {"weak.sigma", K::Real, r(WeakParams{}.sigma), {}, ""},
      {"weak.gain_scale", K::Real, r(WeakParams{}.gain_scale), {}, ""},
      {"data.episodes", K::Int, "200", {}, "episodes per generated dataset"},
      {"train.steps", K::Int, i(t.steps), {}, ""},
      {"train.batch", K::Int, i(t.batch), {}, ""},
      {"train.actor_lr", K::Real, r(t.actor_lr), {}, ""},
      {"train.critic_lr", K::Real, r(t.critic_lr), {}, ""},
      {"train.gamma", K::Real, r(t.gamma), {}, ""},
      {"train.target_rate", K::Real, r(t.target_rate), {}, ""},
      {"train.hidden", K::IntList, list(t.hidden), {}, "comma-separated hidden widths"},
      {"train.history", K::Int, i(t.history), {}, ""},
      {"train.log_every", K::Int, i(t.log_every), {}, ""},
      {"train.initial_log_std", K::Real, r(t.initial_log_std), {}, ""},
      {"crr.weight", K::Choice, "indicator", {"indicator", "exponential"}, ""},
      {"crr.temperature", K::Real, r(t.crr_temperature), {}, ""},
      {"crr.samples", K::Int, i(t.crr_samples), {}, ""},
      {"crr.clip", K::Real, r(t.crr_clip), {}, ""},
      {"awac.lambda", K::Real, r(t.awac_lambda), {}, ""},
      {"awac.clip", K::Real, r(t.awac_clip), {}, ""},
      {"cql.penalty", K::Real, r(t.cql_penalty), {}, ""},
      {"cql.random_actions", K::Int, i(t.cql_random_actions), {}, ""},
      {"cql.entropy", K::Real, r(t.cql_entropy), {}, ""},
      {"iql.tau", K::Real, r(t.iql_tau), {}, ""},
      {"iql.beta", K::Real, r(t.iql_beta), {}, ""},
      {"iql.clip", K::Real, r(t.iql_clip), {}, ""},
      {"td3bc.alpha", K::Real, r(t.td3_alpha), {}, ""},
      {"td3bc.smooth_beta", K::Real, r(t.smooth_beta), {}, ""},
      {"td3bc.smooth_sigma", K::Real, r(t.smooth_sigma), {}, ""},
      {"td3bc.policy_noise", K::Real, r(t.policy_noise), {}, ""},
      {"td3bc.noise_clip", K::Real, r(t.noise_clip), {}, ""},
      {"td3bc.policy_delay", K::Int, i(t.policy_delay), {}, ""},
      {"filter.init_frac", K::Real, r(f.init_frac), {}, ""},
      {"filter.stop_eps", K::Int, i(f.stop_eps), {}, ""},
      {"filter.max_iterations", K::Int, i(f.max_iterations), {}, ""},
      {"filter.hidden", K::IntList, list(f.hidden), {}, ""},
      {"filter.train_steps", K::Int, i(f.train_steps), {}, ""},
      {"filter.lr", K::Real, r(f.lr), {}, ""},
      {"smooth.alpha", K::Real, r(p.alpha), {}, ""},
      {"smooth.confidence_threshold", K::Real, r(p.confidence_threshold), {}, ""},
      {"smooth.delay_threshold", K::Int, i(p.delay_threshold), {}, "steps"},
      {"eval.robots", K::Int, i(e.robots), {}, ""},
      {"eval.goals_push", K::Int, i(e.goals_push), {}, "per robot"},
      {"eval.goals_lift", K::Int, i(e.goals_lift), {}, "per robot"},
      {"eval.job_size_push", K::Int, i(e.job_size_push), {}, ""},
      {"eval.job_size_lift", K::Int, i(e.job_size_lift), {}, ""},
      {"repro.algo", K::Choice, "crr", {"crr", "awac", "cql", "iql", "td3bc"}, "reward-aware method in repro"},
  };
}

}  // namespace

const std::vector<RunConfig::Key>& RunConfig::schema() {
  static const std::vector<Key> s = build_schema();
  return s;
}

RunConfig::RunConfig() {
  for (const auto& k : schema()) values_.emplace(k.name, k.default_value);
}

const RunConfig::Key& RunConfig::key(std::string_view name) const {
  for (const auto& k : schema())
    if (k.name == name) return k;
  throw InputError("unknown config key '" + std::string(name) + "'");
}

void RunConfig::set(std::string_view name, std::string_view raw) {
  const Key& k = key(name);
  const std::string_view value = trim(raw);
  bool ok = false;
  std::string canonical(value);
  switch (k.kind) {
    case Kind::Real: {
      double v;
      ok = parse_real(value, v);
      break;
    }
    case Kind::Int: {
      std::int64_t v;
      ok = parse_int(value, v);
      break;
    }
    case Kind::IntList: {
      std::vector<int> v;
      ok = parse_int_list(value, v);
      if (ok) {
        canonical.clear();
        for (std::size_t i = 0; i < v.size(); ++i) canonical += (i ? "," : "") + std::to_string(v[i]);
      }
      break;
    }
    case Kind::Choice:
      ok = std::find(k.choices.begin(), k.choices.end(), value) != k.choices.end();
      break;
  }
  if (!ok) throw InputError("invalid value '" + std::string(value) + "' for config key '" + k.name + "'");
  values_[k.name] = canonical;
  explicit_[k.name] = true;
}

void RunConfig::set_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw InputError("expected key=value, got '" + std::string(assignment) + "'");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void RunConfig::load_text(std::string_view text, std::string_view origin) {
  std::size_t line_no = 0, start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      set_assignment(line);
    } catch (const InputError& e) {
      throw InputError(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void RunConfig::load_file(const std::filesystem::path& path) {
  load_text(binio::read_file(path), path.string());
}

bool RunConfig::explicitly_set(std::string_view name) const {
  key(name);
  const auto it = explicit_.find(name);
  return it != explicit_.end() && it->second;
}

double RunConfig::real(std::string_view name) const {
  if (key(name).kind != Kind::Real) throw UsageError("config key is not real-valued");
  double v = 0.0;
  parse_real(values_.find(name)->second, v);
  return v;
}

std::int64_t RunConfig::integer(std::string_view name) const {
  if (key(name).kind != Kind::Int) throw UsageError("config key is not an integer");
  std::int64_t v = 0;
  parse_int(values_.find(name)->second, v);
  return v;
}

std::vector<int> RunConfig::int_list(std::string_view name) const {
  if (key(name).kind != Kind::IntList) throw UsageError("config key is not an integer list");
  std::vector<int> v;
  parse_int_list(values_.find(name)->second, v);
  return v;
}

const std::string& RunConfig::text(std::string_view name) const {
  key(name);
  return values_.find(name)->second;
}

std::string RunConfig::echo() const {
  std::string out;
  for (const auto& k : schema()) out += k.name + "=" + values_.find(k.name)->second + "\n";
  return out;
}

EnvConfig RunConfig::env_config() const {
  EnvConfig c;
  c.arena.radius = real("arena.radius");
  c.arena.cube_half_extent = real("arena.cube_half_extent");
  c.arena.dt = real("arena.dt");
  c.arena.gravity = real("arena.gravity");
  c.arena.max_tip_step = real("arena.max_tip_step");
  c.arena.contact_radius = real("arena.contact_radius");
  c.arena.grasp_radius = real("arena.grasp_radius");
  c.arena.workspace_offset = real("arena.workspace_offset");
  c.arena.workspace_radius = real("arena.workspace_radius");
  c.arena.home_radius = real("arena.home_radius");
  c.arena.home_height = real("arena.home_height");
  c.obs_model.sigma_pos = real("obs.sigma_pos");
  c.obs_model.sigma_ori_deg = real("obs.sigma_ori_deg");
  c.obs_model.max_delay = int(integer("obs.max_delay"));
  c.obs_model.delay_prob = real("obs.delay_prob");
  c.obs_model.low_conf_prob = real("obs.low_conf_prob");
  c.obs_model.low_conf_noise_scale = real("obs.low_conf_noise_scale");
  c.kernel.a = real("kernel.a");
  c.kernel.b = real("kernel.b");
  c.success.pos_tol = real("success.pos_tol");
  c.success.ori_tol_deg = real("success.ori_tol_deg");
  c.arena.validate();
  c.obs_model.validate();
  c.kernel.validate();
  c.success.validate();
  return c;
}

WeakParams RunConfig::weak_params() const { return {real("weak.sigma"), real("weak.gain_scale")}; }

TrainConfig RunConfig::train_config(Algo algo) const {
  TrainConfig t;
  t.algo = algo;
  t.steps = int(integer("train.steps"));
  t.batch = int(integer("train.batch"));
  t.actor_lr = real("train.actor_lr");
  t.critic_lr = real("train.critic_lr");
  t.gamma = real("train.gamma");
  t.target_rate = real("train.target_rate");
  t.hidden = int_list("train.hidden");
  t.history = int(integer("train.history"));
  t.log_every = int(integer("train.log_every"));
  t.seed = std::uint64_t(integer("seed"));
  t.initial_log_std = real("train.initial_log_std");
  t.crr_weight = text("crr.weight") == "indicator" ? CrrWeight::Indicator : CrrWeight::Exponential;
  t.crr_temperature = real("crr.temperature");
  t.crr_samples = int(integer("crr.samples"));
  t.crr_clip = real("crr.clip");
  t.awac_lambda = real("awac.lambda");
  t.awac_clip = real("awac.clip");
  t.cql_penalty = real("cql.penalty");
  t.cql_random_actions = int(integer("cql.random_actions"));
  t.cql_entropy = real("cql.entropy");
  t.iql_tau = real("iql.tau");
  t.iql_beta = real("iql.beta");
  t.iql_clip = real("iql.clip");
  t.td3_alpha = real("td3bc.alpha");
  t.smooth_beta = real("td3bc.smooth_beta");
  t.smooth_sigma = real("td3bc.smooth_sigma");
  t.policy_noise = real("td3bc.policy_noise");
  t.noise_clip = real("td3bc.noise_clip");
  t.policy_delay = int(integer("td3bc.policy_delay"));
  t.validate();
  return t;
}

FilterConfig RunConfig::filter_config() const {
  FilterConfig f;
  f.init_frac = real("filter.init_frac");
  f.stop_eps = int(integer("filter.stop_eps"));
  f.max_iterations = int(integer("filter.max_iterations"));
  f.hidden = int_list("filter.hidden");
  f.train_steps = int(integer("filter.train_steps"));
  f.lr = real("filter.lr");
  f.seed = std::uint64_t(integer("seed"));
  return f;
}

PoseFilterConfig RunConfig::pose_filter_config() const {
  PoseFilterConfig p{real("smooth.alpha"), real("smooth.confidence_threshold"), int(integer("smooth.delay_threshold"))};
  p.validate();
  return p;
}

EvalProtocolConfig RunConfig::eval_config() const {
  EvalProtocolConfig e;
  e.robots = int(integer("eval.robots"));
  e.goals_push = int(integer("eval.goals_push"));
  e.goals_lift = int(integer("eval.goals_lift"));
  e.job_size_push = int(integer("eval.job_size_push"));
  e.job_size_lift = int(integer("eval.job_size_lift"));
  e.seed = std::uint64_t(integer("seed"));
  e.workers = int(integer("jobs"));
  e.env = env_config();
  e.validate();
  return e;
}

}  // namespace rrc
