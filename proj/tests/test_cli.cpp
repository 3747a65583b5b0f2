#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "binio.hpp"
#include "rrc/artifact.hpp"
#include "rrc/cli.hpp"
#include "rrc/data.hpp"
#include "rrc/eval.hpp"
#include "test_util.hpp"

using namespace rrc;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out, err;
};

CliRun rrcb(std::vector<std::string> args) {
  args.insert(args.begin(), "rrcb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(int(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string p(const test::TempDir& d, const std::string& name) { return (d / name).string(); }

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    if (value != nullptr) {
      ::setenv(name, value, 1);
    } else {
      ::unsetenv(name);
    }
  }
  ~ScopedEnv() {
    if (old_.empty()) {
      ::unsetenv(name_);
    } else {
      ::setenv(name_, old_.c_str(), 1);
    }
  }

 private:
  const char* name_;
  std::string old_;
};

}  // namespace

TEST(GenData, MixedComposition) {
  test::TempDir dir("cli");
  const CliRun r = rrcb({"gen-data", "--task", "push", "--quality", "mixed", "--episodes", "10", "--out", p(dir, "d.rrcb")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Dataset d = load_dataset(dir / "d.rrcb");
  EXPECT_EQ(d.num_episodes(), 10);
  EXPECT_EQ(d.count_behavior(BehaviorKind::Expert), 5);
  EXPECT_EQ(d.count_behavior(BehaviorKind::Weak), 5);
  EXPECT_TRUE(fs::exists(dir / "d.config.txt"));
  EXPECT_NE(r.out.find("command=gen-data"), std::string::npos);
  EXPECT_NE(r.out.find("expert=5 weak=5"), std::string::npos);
}

TEST(GenData, RejectsZeroEpisodes) {
  test::TempDir dir("cli");
  const CliRun r = rrcb({"gen-data", "--task", "push", "--quality", "expert", "--episodes", "0", "--out", p(dir, "d.rrcb")});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(fs::exists(dir / "d.rrcb"));
}

TEST(GenData, BitIdenticalReruns) {
  test::TempDir dir("cli");
  for (const char* name : {"a.rrcb", "b.rrcb"})
    ASSERT_EQ(rrcb({"gen-data", "--task", "lift", "--quality", "mixed", "--episodes", "4", "--seed", "9", "--out",
                    p(dir, name)})
                  .code,
              0);
  EXPECT_EQ(binio::read_file(dir / "a.rrcb"), binio::read_file(dir / "b.rrcb"));
  ASSERT_EQ(rrcb({"gen-data", "--task", "lift", "--quality", "mixed", "--episodes", "4", "--seed", "10", "--jobs", "3",
                  "--out", p(dir, "c.rrcb")})
                .code,
            0);
  EXPECT_NE(binio::read_file(dir / "a.rrcb"), binio::read_file(dir / "c.rrcb"));
}

TEST(Seed, Precedence) {
  test::TempDir dir("cli");
  const auto gen = [&](const std::string& name, std::vector<std::string> extra) {
    std::vector<std::string> args{"gen-data", "--task", "push", "--quality", "expert", "--episodes", "2", "--out",
                                  p(dir, name)};
    args.insert(args.end(), extra.begin(), extra.end());
    EXPECT_EQ(rrcb(args).code, 0) << name;
    return binio::read_file(dir / name);
  };
  std::string flag7, zero;
  {
    ScopedEnv unset("RRCB_SEED", nullptr);
    flag7 = gen("flag7.rrcb", {"--seed", "7"});
    zero = gen("zero.rrcb", {});
  }
  ScopedEnv env("RRCB_SEED", "7");
  EXPECT_EQ(gen("env7.rrcb", {}), flag7);
  EXPECT_EQ(gen("flag0.rrcb", {"--seed", "0"}), zero);
  EXPECT_EQ(gen("set0.rrcb", {"--set", "seed=0"}), zero);
  ScopedEnv bad("RRCB_SEED", "seven");
  EXPECT_EQ(rrcb({"gen-data", "--task", "push", "--quality", "expert", "--out", p(dir, "x.rrcb")}).code, 1);
}

TEST(Config, FileAndOverrides) {
  test::TempDir dir("cli");
  {
    std::ofstream f(dir / "run.cfg");
    f << "# demo\nseed = 4\ndata.episodes = 3\n";
  }
  CliRun r = rrcb({"gen-data", "--task", "push", "--quality", "expert", "--config", p(dir, "run.cfg"), "--out",
                p(dir, "a.rrcb")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_dataset(dir / "a.rrcb").num_episodes(), 3);
  const std::string echo = binio::read_file(dir / "a.config.txt");
  EXPECT_NE(echo.find("seed=4\n"), std::string::npos);
  EXPECT_NE(echo.find("data.episodes=3\n"), std::string::npos);

  r = rrcb({"gen-data", "--task", "push", "--quality", "expert", "--config", p(dir, "run.cfg"), "--set",
            "data.episodes=2", "--out", p(dir, "b.rrcb")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(load_dataset(dir / "b.rrcb").num_episodes(), 2);

  EXPECT_EQ(rrcb({"gen-data", "--task", "push", "--quality", "expert", "--set", "no.such.key=1", "--out",
                  p(dir, "c.rrcb")})
                .code,
            1);
  EXPECT_EQ(rrcb({"gen-data", "--task", "push", "--quality", "expert", "--set", "kernel.a=-3", "--out",
                  p(dir, "c.rrcb")})
                .code,
            1);
  {
    std::ofstream f(dir / "bad.cfg");
    f << "seed = 1\nthis line has no equals sign\n";
  }
  r = rrcb({"gen-data", "--task", "push", "--quality", "expert", "--config", p(dir, "bad.cfg"), "--out",
            p(dir, "c.rrcb")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad.cfg:2"), std::string::npos) << r.err;
  EXPECT_EQ(rrcb({"gen-data", "--task", "push", "--quality", "expert", "--config", p(dir, "missing.cfg"), "--out",
                  p(dir, "c.rrcb")})
                .code,
            2);
}

TEST(Usage, Errors) {
  EXPECT_EQ(rrcb({}).code, 1);
  EXPECT_EQ(rrcb({"frobnicate"}).code, 1);
  EXPECT_EQ(rrcb({"train", "--algo", "ppo", "--dataset", "x", "--out", "y"}).code, 1);
  EXPECT_EQ(rrcb({"gen-data", "--task", "push"}).code, 1);
  EXPECT_EQ(rrcb({"gen-data", "--task", "push", "--quality", "expert", "--jobs", "0", "--out", "x"}).code, 1);
  EXPECT_EQ(rrcb({"--help"}).code, 0);
}

TEST(Train, WritesPolicyAndLog) {
  test::TempDir dir("cli");
  ASSERT_EQ(rrcb({"gen-data", "--task", "push", "--quality", "mixed", "--episodes", "4", "--out", p(dir, "d.rrcb")}).code,
            0);
  for (const char* algo : {"bc", "iql"}) {
    const std::string out = p(dir, std::string(algo) + ".rrcp");
    const CliRun r = rrcb({"train", "--algo", algo, "--dataset", p(dir, "d.rrcb"), "--out", out, "--set", "train.steps=40",
                        "--set", "train.hidden=16,16", "--set", "train.batch=32", "--set", "train.log_every=20"});
    ASSERT_EQ(r.code, 0) << r.err;
    const PolicyArtifact a = load_policy(out);
    EXPECT_EQ(algo_name(a.algo), algo);
    EXPECT_EQ(a.task, Task::Push);
    EXPECT_TRUE(fs::exists(dir / (std::string(algo) + ".log.csv")));
    EXPECT_TRUE(fs::exists(dir / (std::string(algo) + ".config.txt")));
  }
  const CliRun again = rrcb({"train", "--algo", "bc", "--dataset", p(dir, "d.rrcb"), "--out", p(dir, "bc2.rrcp"), "--set",
                          "train.steps=40", "--set", "train.hidden=16,16", "--set", "train.batch=32", "--set",
                          "train.log_every=20"});
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(binio::read_file(dir / "bc.rrcp"), binio::read_file(dir / "bc2.rrcp"));
  EXPECT_EQ(binio::read_file(dir / "bc.log.csv"), binio::read_file(dir / "bc2.log.csv"));
}

TEST(Train, MissingOrCorruptDataset) {
  test::TempDir dir("cli");
  EXPECT_EQ(rrcb({"train", "--algo", "bc", "--dataset", p(dir, "nope.rrcb"), "--out", p(dir, "p.rrcp")}).code, 2);
  binio::write_file(dir / "junk.rrcb", "not a dataset at all");
  const CliRun r = rrcb({"train", "--algo", "bc", "--dataset", p(dir, "junk.rrcb"), "--out", p(dir, "p.rrcp")});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
  EXPECT_FALSE(fs::exists(dir / "p.rrcp"));
}

TEST(Transforms, AugmentFilterStack) {
  test::TempDir dir("cli");
  ASSERT_EQ(rrcb({"gen-data", "--task", "lift", "--quality", "mixed", "--episodes", "6", "--out", p(dir, "d.rrcb")}).code,
            0);
  const Dataset d = load_dataset(dir / "d.rrcb");

  CliRun r = rrcb({"augment", "--dataset", p(dir, "d.rrcb"), "--out", p(dir, "aug.rrcb")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_dataset(dir / "aug.rrcb").num_episodes(), 3 * d.num_episodes());
  EXPECT_EQ(rrcb({"augment", "--dataset", p(dir, "d.rrcb"), "--out", p(dir, "x.rrcb"), "--k", "4"}).code, 1);

  r = rrcb({"filter", "--dataset", p(dir, "d.rrcb"), "--out", p(dir, "all.rrcb"), "--init-frac", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_dataset(dir / "all.rrcb").num_episodes(), d.num_episodes());
  EXPECT_NE(r.out.find("returns before:"), std::string::npos);
  EXPECT_EQ(rrcb({"filter", "--dataset", p(dir, "d.rrcb"), "--out", p(dir, "x.rrcb"), "--init-frac", "1.5"}).code, 1);

  r = rrcb({"stack", "--dataset", p(dir, "d.rrcb"), "--out", p(dir, "h1.rrcb"), "--history", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(binio::read_file(dir / "h1.rrcb"), binio::read_file(dir / "d.rrcb"));
  r = rrcb({"stack", "--dataset", p(dir, "d.rrcb"), "--out", p(dir, "h3.rrcb"), "--history", "3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(load_dataset(dir / "h3.rrcb").obs_dim(), 3 * d.obs_dim() + 2 * d.act_dim());
}

TEST(Evaluate, ExpertMatchesBehaviorOnExpertCombos) {
  test::TempDir dir("cli");
  const CliRun r = rrcb({"evaluate", "--policies", "behavior,expert,weak", "--robots", "1", "--goals", "3", "--out",
                      p(dir, "rep")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_report_csv(binio::read_file(dir / "rep" / "report.csv"));
  EXPECT_EQ(rows.size(), 12u);
  EvalReport rep;
  rep.rows = rows;
  for (const Combo& c : {Combo{Task::Push, Quality::Expert}, Combo{Task::Lift, Quality::Expert}}) {
    EXPECT_EQ(rep.find(c, "expert")->mean_return, rep.find(c, "behavior")->mean_return) << c.name();
    EXPECT_GT(rep.find(c, "expert")->mean_return, rep.find(c, "weak")->mean_return) << c.name();
  }
  for (const char* f : {"report.csv", "report.txt", "scores.svg", "config.txt"})
    EXPECT_TRUE(fs::exists(dir / "rep" / f)) << f;
  EXPECT_NE(r.out.find("overall score"), std::string::npos);

  const CliRun again = rrcb({"evaluate", "--policies", "behavior,expert,weak", "--robots", "1", "--goals", "3", "--jobs",
                          "2", "--out", p(dir, "rep2")});
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(binio::read_file(dir / "rep" / "report.csv"), binio::read_file(dir / "rep2" / "report.csv"));
}

TEST(Evaluate, TrainedPolicyPattern) {
  test::TempDir dir("cli");
  ASSERT_EQ(rrcb({"gen-data", "--task", "push", "--quality", "expert", "--episodes", "3", "--out", p(dir, "d.rrcb")})
                .code,
            0);
  ASSERT_EQ(rrcb({"train", "--algo", "bc", "--dataset", p(dir, "d.rrcb"), "--out", p(dir, "mine_push-expert.rrcp"),
                  "--set", "train.steps=20", "--set", "train.hidden=8"})
                .code,
            0);
  const std::string pattern = "mine=" + p(dir, "mine_{combo}.rrcp");
  CliRun r = rrcb({"evaluate", "--policies", "behavior," + pattern, "--combos", "push-expert", "--robots", "1", "--goals",
                "2", "--out", p(dir, "rep")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse_report_csv(binio::read_file(dir / "rep" / "report.csv")).size(), 2u);

  // Lift has no trained file: the entry is reported and the exit code is nonzero.
  r = rrcb({"evaluate", "--policies", "behavior," + pattern, "--combos", "push-expert,lift-expert", "--robots", "1",
            "--goals", "2", "--out", p(dir, "rep2")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("mine [lift-expert]"), std::string::npos) << r.err;
  EXPECT_TRUE(fs::exists(dir / "rep2" / "report.csv"));

  // A push policy listed for a lift combo is rejected too.
  r = rrcb({"evaluate", "--policies", "p=" + p(dir, "mine_push-expert.rrcp"), "--combos", "lift-expert", "--robots",
            "1", "--goals", "1", "--out", p(dir, "rep3")});
  EXPECT_EQ(r.code, 2);

  EXPECT_EQ(rrcb({"evaluate", "--policies", "behavior,behavior", "--out", p(dir, "rep4")}).code, 1);
  EXPECT_EQ(rrcb({"evaluate", "--policies", "behavior", "--combos", "push-easy", "--out", p(dir, "rep4")}).code, 1);
}

TEST(Repro, TinyEndToEnd) {
  test::TempDir dir("cli");
  const CliRun r = rrcb({"repro", "--scale", "tiny", "--out", p(dir, "run")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_report_csv(binio::read_file(dir / "run" / "report.csv"));
  EXPECT_EQ(rows.size(), 16u);
  for (const char* policy : {"behavior", "bc", "filtered-bc", "crr"}) {
    int n = 0;
    for (const auto& row : rows) n += row.policy == policy;
    EXPECT_EQ(n, 4) << policy;
  }
  for (const Combo& c : all_combos()) {
    EXPECT_TRUE(fs::exists(dir / "run" / "data" / (c.name() + ".rrcb")));
    EXPECT_TRUE(fs::exists(dir / "run" / "data" / (c.name() + "-filtered.rrcb")));
    for (const char* pol : {"bc", "filtered-bc", "crr"})
      EXPECT_TRUE(fs::exists(dir / "run" / "policies" / (c.name() + "-" + pol + ".rrcp")));
  }
  EXPECT_NE(r.out.find("command=repro scale=tiny"), std::string::npos);
}

TEST(Repro, CheckFailureExitsThree) {
  test::TempDir dir("cli");
  // A position tolerance nothing can meet makes the expert success floor fail.
  const CliRun r = rrcb({"repro", "--scale", "tiny", "--check", "--set", "success.pos_tol=1e-9", "--set",
                      "repro.algo=iql", "--out", p(dir, "run")});
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_NE(r.out.find("push-expert.expert_success 0 >= 0.8 FAIL"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("check=fail"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "run" / "policies" / "push-mixed-iql.rrcp"));
}
