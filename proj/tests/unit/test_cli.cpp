#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

std::string fixture(const std::string& name) { return std::string(MDSEP_FIXTURE_DIR) + "/" + name; }

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "markov-dsep");
  std::ostringstream out, err;
  const int code = mdsep::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("mdsep_cli_" + std::to_string(::getpid()) + "_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (l == line) return true;
  return false;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

class TolEnv {
 public:
  explicit TolEnv(const char* v) { ::setenv("MARKOV_DSEP_TOL", v, 1); }
  ~TolEnv() { ::unsetenv("MARKOV_DSEP_TOL"); }
};

}  // namespace

TEST(Cli, Validate) {
  auto r = run({"validate", fixture("diamond.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "valid causal model: 4 wires, 4 boxes, 0 inputs, 4 outputs, pure bloom\n");

  r = run({"validate", fixture("bell.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "valid causal model: 5 wires, 3 boxes, 2 inputs, 4 outputs\n");

  r = run({"validate", fixture("two_outputs.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("invalid\n", 0), 0u);
  EXPECT_NE(r.out.find("output leg not injective: wire 'G' listed twice"), std::string::npos);

  r = run({"validate", fixture("discarded_tail.json")});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, BadInputsExitWithThree) {
  auto r = run({"validate", fixture("bad_reference.json")});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err, "error: /diagram/boxes/0/outputs/0: unknown wire 'C'\n");
  EXPECT_TRUE(r.out.empty());

  EXPECT_EQ(run({"validate", fixture("missing.json")}).code, 3);
  EXPECT_EQ(run({}).code, 3);
  EXPECT_EQ(run({"frobnicate"}).code, 3);
  EXPECT_EQ(run({"dsep", fixture("diamond.json"), "--x", "Q", "--y", "Y"}).code, 3);
  EXPECT_EQ(run({"dsep", fixture("latent_fork.json"), "--x", "V", "--y", "Y"}).code, 3);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, Dsep) {
  auto r = run({"dsep", fixture("diamond.json"), "--x", "X", "--y", "Y", "--z", "Z", "--classical"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "separated\nclassical: separated\n");

  r = run({"dsep", fixture("diamond.json"), "--x", "X", "--y", "Y", "--z", "W,Z", "--classical"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "connected\nclassical: connected\n");

  r = run({"dsep", fixture("collider.json"), "--x", "X", "--y", "Y"});
  EXPECT_EQ(r.code, 0);

  r = run({"dsep", fixture("latent_fork.json"), "--x", "X", "--y", "Y", "--z", "Z", "--classical"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("separated\nclassical: not applicable (", 0), 0u);
}

TEST(Cli, ListCi) {
  auto r = run({"list-ci", fixture("instrumental.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "{B} _||_ {X} | {A,Lambda}\n"
            "{Lambda} _||_ {X} | {}\n"
            "{X} _||_ {B} | {A,Lambda}\n"
            "{X} _||_ {Lambda} | {}\n"
            "4 separated triples with nonempty X and Y (256 triples enumerated)\n");

  r = run({"list-ci", fixture("diamond.json"), "--exhaustive-limit", "2", "--budget", "50", "--seed", "7"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("(50 triples enumerated)"), std::string::npos);
}

TEST(Cli, CheckFinStoch) {
  auto r = run({"check", fixture("diamond.json"), fixture("diamond.data.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(has_line(r.out, "verdict: holds"));
  EXPECT_TRUE(has_line(r.out, "checked: 69"));

  r = run({"check", fixture("diamond.json"), fixture("diamond.data.json"), "--property", "local"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has_line(r.out, "  box x: {X} _||_ {Y} | {Z}  holds"));

  r = run({"check", fixture("diamond.json"), fixture("diamond.perturbed.json"), "--property", "compat"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(has_line(r.out, "verdict: incompatible"));
  EXPECT_TRUE(has_line(r.out, "reason: local Markov property fails at box 'x'"));

  r = run({"check", fixture("diamond.json"), fixture("diamond.perturbed.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAILS"), std::string::npos);

  r = run({"check", fixture("bell.json"), fixture("bell.data.json"), "--property", "compat"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(has_line(r.out, "verdict: unknown"));
  EXPECT_TRUE(has_line(r.out, "reason: not-pure-bloom"));

  r = run({"check", fixture("bell.json"), fixture("bell.data.json"), "--property", "local"});
  EXPECT_EQ(r.code, 2);

  r = run({"check", fixture("diamond.json"), fixture("diamond.data.json"), "--backend", "gauss"});
  EXPECT_EQ(r.code, 3);
  r = run({"check", fixture("fork.json"), fixture("diamond.data.json")});
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, CompatWritesAWitness) {
  const auto witness = temp_path("witness.json");
  auto r = run({"check", fixture("diamond.json"), fixture("diamond.data.json"), "--property", "compat", "--witness",
                witness});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has_line(r.out, "verdict: compatible"));
  EXPECT_TRUE(has_line(r.out, "box order: w x y z"));

  auto e = run({"evaluate", fixture("diamond.json"), witness});
  ASSERT_EQ(e.code, 0) << e.err;
  const auto got = json::parse(e.out)["table"], want = json::parse(slurp(fixture("diamond.data.json")))["table"];
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t c = 0; c < got.size(); ++c)
    for (std::size_t i = 0; i < got[c].size(); ++i)
      EXPECT_NEAR(got[c][i].get<double>(), want[c][i].get<double>(), 1e-12);
  std::filesystem::remove(witness);
}

TEST(Cli, CheckGauss) {
  auto r = run({"check", fixture("diamond.json"), fixture("diamond.gauss.data.json"), "--property", "compat"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_TRUE(has_line(r.out, "backend: gauss"));
  EXPECT_TRUE(has_line(r.out, "verdict: compatible"));
}

TEST(Cli, ToleranceFromTheEnvironment) {
  {
    TolEnv env("0.1");
    auto r = run({"check", fixture("diamond.json"), fixture("diamond.perturbed.json")});
    EXPECT_EQ(r.code, 0);
  }
  {
    TolEnv env("not-a-number");
    auto r = run({"check", fixture("diamond.json"), fixture("diamond.data.json")});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("MARKOV_DSEP_TOL"), std::string::npos);
  }
  {
    // An explicit --tol wins.
    TolEnv env("0.1");
    auto r = run({"check", fixture("diamond.json"), fixture("diamond.perturbed.json"), "--tol", "1e-9"});
    EXPECT_EQ(r.code, 1);
  }
}

TEST(Cli, NormalizeIsIdempotent) {
  auto r = run({"normalize", fixture("discarded_tail.json")});
  ASSERT_EQ(r.code, 0);
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["diagram"]["boxes"].size(), 2u);
  EXPECT_EQ(doc["diagram"]["wires"].size(), 2u);
  const auto once = temp_path("once.json");
  std::ofstream(once) << r.out;
  auto r2 = run({"normalize", once});
  EXPECT_EQ(r2.out, r.out);
  const auto out_file = temp_path("twice.json");
  EXPECT_EQ(run({"normalize", once, "-o", out_file}).code, 0);
  EXPECT_EQ(slurp(out_file), r.out);
  EXPECT_EQ(run({"validate", once}).code, 0);
  std::filesystem::remove(once);
  std::filesystem::remove(out_file);
}

TEST(Cli, MarginalizeAndPureBloom) {
  auto r = run({"marginalize", fixture("diamond.json"), "--keep", "X,Y,Z"});
  ASSERT_EQ(r.code, 0);
  auto doc = json::parse(r.out);
  EXPECT_EQ(doc["diagram"]["boxes"].size(), 3u);
  EXPECT_EQ(doc["interface"]["outputs"], json({"X", "Y", "Z"}));
  EXPECT_EQ(run({"marginalize", fixture("latent_fork.json"), "--keep", "V"}).code, 3);

  r = run({"purebloom", fixture("latent_fork.json")});
  ASSERT_EQ(r.code, 0);
  doc = json::parse(r.out);
  EXPECT_EQ(doc["interface"]["outputs"].size(), doc["diagram"]["wires"].size());
}

TEST(Cli, ExportDot) {
  auto r = run({"export-dot", fixture("diamond.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(count(r.out, "shape=box"), 4u);
  EXPECT_EQ(count(r.out, "shape=point"), 4u);
}

TEST(Cli, Evaluate) {
  auto r = run({"evaluate", fixture("diamond.json"), fixture("diamond.interp.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = json::parse(r.out);
  EXPECT_EQ(doc["kind"], "finstoch");
  EXPECT_EQ(doc["outputs"].size(), 4u);

  r = run({"evaluate", fixture("diamond.json"), fixture("diamond.gauss.interp.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["kind"], "gauss");

  EXPECT_EQ(run({"evaluate", fixture("bell.json"), fixture("diamond.interp.json")}).code, 3);
}
