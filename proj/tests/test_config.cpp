#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "richlab/error.hpp"
#include "richlab/experiment.hpp"

using namespace richlab;
namespace fs = std::filesystem;

namespace {

std::string message_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("richlab_test_config_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("parse: the survival example is valid") {
  const auto c = parse_config("kind=survival_curve cfg=hyperplane:W=256 lambda2=1.0 R=16,32,64 reps=2000 seed=7");
  CHECK(c.kind == ExperimentKind::Survival);
  CHECK(c.seed == 7);
  CHECK(c.reps == 2000);
  CHECK(c.lambda2 == 1.0);
  CHECK(c.radii == std::vector<std::int64_t>{16, 32, 64});
  REQUIRE(c.seeds.has_value());
  CHECK(c.seeds->type1 == RegionSpec::hyperplane(256));
  CHECK(c.seeds->type2 == RegionSpec::origin());
  CHECK(effective_half_width(c) == 256);
}

TEST_CASE("parse: negative rate names the lambda > 0 precondition") {
  const auto msg = message_of("kind=survival cfg=hyperplane:W=64 R=8\nlambda2=-1");
  CHECK(msg.find("lambda > 0") != std::string::npos);
  CHECK(msg.find("line 2, column 1") != std::string::npos);
}

TEST_CASE("parse: R beyond half the default box is rejected") {
  const auto msg = message_of("kind=survival cfg=halfaxis:L=64 R=128");
  CHECK_FALSE(msg.empty());
  CHECK(msg.find("M") != std::string::npos);
  CHECK(msg.find("column 33") != std::string::npos);
  // An explicit larger box makes the same request valid.
  CHECK_NOTHROW(parse_config("kind=survival cfg=halfaxis:L=64 R=128 M=256"));
}

TEST_CASE("parse: diagnostics for unknown keys, type mismatches, duplicates, inapplicable keys") {
  CHECK(message_of("kind=mu n=8\n  colour=red").find("line 2, column 3") != std::string::npos);
  CHECK(message_of("kind=mu n=eight").find("'n'") != std::string::npos);
  CHECK(message_of("kind=mu n=8 n=9").find("already set") != std::string::npos);
  CHECK_FALSE(message_of("kind=mu n=8 R=4").empty());
  CHECK_FALSE(message_of("kind=mu").empty());
  CHECK_FALSE(message_of("n=8").empty());
  CHECK_FALSE(message_of("kind=mu n=8 reps=0").empty());
  CHECK_FALSE(message_of("kind=mu-hyperplane n=8 W=31").empty());
  CHECK_FALSE(message_of("kind=coexistence-scan n=0,4 R=8").empty());
  CHECK_FALSE(message_of("kind=shape t=5 dim=3").empty());
  CHECK_FALSE(message_of("kind=survival cfg=halfaxis:L=8 R=4,2").empty());
  CHECK_FALSE(message_of("kind=mu n=8 garbage").empty());
}

TEST_CASE("parse: comments, defaults and last-wins merging") {
  const auto c = parse_config("# header\nkind=mu-hyperplane  # trailing\nn=8\n");
  CHECK(c.width == 32);
  CHECK(c.lambda == 1.0);
  CHECK(c.identity == true);
  auto tokens = tokenize_config("kind=mu n=8 n=16", "inline");
  CHECK(tokens[2].where() == "inline line 1, column 13");
  CHECK(build_config(tokens).n == 16);
}

TEST_CASE("text form round-trips for every kind") {
  const char* samples[] = {
      "kind=mu n=64 lambda=0.8 reps=20 seed=3",
      "kind=mu-hyperplane n=32 W=256 identity=false",
      "kind=mu-hampered n=256 b=2,4,8,16,32 reps=500",
      "kind=descent b=8 W=128 overshoot=8",
      "kind=records t=200 lateral=40",
      "kind=record-probability n=64 K=64",
      "kind=shape t=150 lambda=2",
      "kind=survival cfg=cone:s=1/2,L=16 R=0,4,8 lambda2=1.5 clock=two engine=markov horizon=50 dim=3",
      "kind=survival type1=explicit:[(-1,0);(-2,0)] type2=explicit:[(0,0);(0,1)] R=2 M=8",
      "kind=coexistence-scan n=1,2,4 R=16 swap=true",
      "kind=survival cfg=halfaxis:L=32 R=4,8 clock=single",
      "kind=simulate cfg=halfaxis:L=16 R=4 rep=7 stop=survival emit_events=true lambda1=2 out=/tmp/x",
  };
  for (const char* text : samples) {
    const auto c = parse_config(text);
    CHECK(parse_config(to_text(c)) == c);
    CHECK(to_text(parse_config(to_text(c))) == to_text(c));
  }
}

TEST_CASE("run_experiment: reps = 0 fails before writing anything") {
  const auto dir = scratch("reps0");
  ExperimentConfig c = parse_config("kind=mu n=8 reps=2");
  c.reps = 0;
  c.out = dir.string();
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("run_experiment: unwritable output directory") {
  const auto blocker = scratch("blocker");
  { std::ofstream(blocker) << "file"; }
  auto c = parse_config("kind=mu n=8 reps=2");
  c.out = (blocker / "sub").string();
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  fs::remove(blocker);
}

TEST_CASE("run_experiment: byte-identical results across reruns and thread counts") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  auto c = parse_config("kind=survival cfg=hyperplane:W=32 R=0,4,8,16 reps=40 seed=11");
  c.out = a.string();
  const auto ra = run_experiment(c, RunOptions{1, "test"});
  c.out = b.string();
  const auto rb = run_experiment(c, RunOptions{3, "test"});
  CHECK(ra.exit_code == rb.exit_code);
  for (const char* f : {"results.csv", "reps.csv", "summary.json"}) {
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(fs::exists(a / "manifest.json"));
  CHECK_FALSE(fs::exists(a / ".partial"));
  const auto csv = slurp(a / "results.csv");
  CHECK(csv.rfind("R,survived,reps,p_hat,ci_lo,ci_hi\n", 0) == 0);
  CHECK(csv.find("\n0,40,40,1,") != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("run_experiment: simulate writes an event log") {
  const auto dir = scratch("sim");
  auto c = parse_config("kind=simulate cfg=halfaxis:L=8 R=4 emit_events=true rep=2");
  c.out = dir.string();
  run_experiment(c);
  const auto events = slurp(dir / "events.csv");
  CHECK(events.rfind("seq,time,type,x1,x2\n", 0) == 0);
  // The nine seeds come first, at time zero.
  std::istringstream in(events);
  std::string line;
  std::getline(in, line);
  for (int i = 0; i < 9; ++i) {
    REQUIRE(std::getline(in, line));
    const auto first = line.find(',');
    CHECK(std::stod(line.substr(first + 1, line.find(',', first + 1) - first - 1)) == 0.0);
  }
  REQUIRE(std::getline(in, line));
  const auto first = line.find(',');
  CHECK(std::stod(line.substr(first + 1, line.find(',', first + 1) - first - 1)) > 0.0);
  fs::remove_all(dir);
}
