#include "newton2pep/cli.hpp"
#include "newton2pep/io.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace newton2pep;
namespace fs = std::filesystem;

namespace {

const fs::path kData = NEWTON2PEP_TEST_DATA;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("newton2pep_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string data(const char* name) { return (kData / name).string(); }

}  // namespace

TEST(ProblemFile, RoundTripIsLossless) {
  Rng rng(81);
  const MatrixPoly2 q = testutil::random_newton(3, rng);
  const std::string text = problem_to_json(q).dump();
  const MatrixPoly2 back = problem_from_json(parse_json(text, "mem"), "mem");
  EXPECT_EQ(back.nodes(), q.nodes());
  for (int k = 0; k < 6; ++k) EXPECT_EQ(back.coeffs()[k], q.coeffs()[k]);
  EXPECT_EQ(problem_to_json(back).dump(), text);
}

TEST(PencilFile, RoundTripWithProvenance) {
  Rng rng(82);
  const MatrixPoly2 qn = testutil::random_newton(2, rng);
  const auto r = construct_general_ansatz(qn, AnsatzVector::classify({1.0, 2.0, 0.5}));
  PencilFile f{r.pencil, PencilProvenance{"ansatz", Eigen::Vector3cd(1.0, 2.0, 0.5), r.m, r.hat_params}};
  const std::string text = pencil_to_json(f).dump(2);
  const PencilFile back = pencil_from_json(parse_json(text, "mem"), "mem");
  const auto& np = std::get<NewtonPencil>(back.pencil);
  EXPECT_EQ(np.a1(), r.pencil.a1());
  EXPECT_EQ(np.a3(), r.pencil.a3());
  ASSERT_TRUE(back.provenance && back.provenance->params && back.provenance->m);
  EXPECT_EQ(back.provenance->params->z1, r.hat_params.z1);
  EXPECT_EQ(*back.provenance->m, r.m);
}

TEST(ProblemFile, SyntaxErrorReportsLine) {
  try {
    parse_json("{\n  \"n\": 1,\n  \"basis\": ,\n}", "bad.json");
    FAIL();
  } catch (const FileError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.json:3:"), std::string::npos) << e.what();
  }
}

TEST(ProblemFile, FieldDiagnostics) {
  Rng rng(83);
  Json j = problem_to_json(MatrixPoly2::monomial(testutil::random_coeffs(2, rng)));
  const auto message = [](const Json& bad) {
    try {
      problem_from_json(bad, "f.json");
    } catch (const FileError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  Json short_array = j;
  short_array["coefficients"]["A11"].erase(0);
  EXPECT_NE(message(short_array).find("coefficients.A11"), std::string::npos);
  Json missing = j;
  missing["coefficients"].erase("A00");
  EXPECT_NE(message(missing).find("coefficients.A00"), std::string::npos);
  Json nodes_on_monomial = j;
  nodes_on_monomial["nodes"] = nodes_to_json({});
  EXPECT_NE(message(nodes_on_monomial).find("nodes"), std::string::npos);
  Json newton_without_nodes = j;
  newton_without_nodes["basis"] = "newton";
  EXPECT_NE(message(newton_without_nodes).find("nodes"), std::string::npos);
  Json bad_entry = j;
  bad_entry["coefficients"]["A20"][1] = Json::array({1.0});
  EXPECT_NE(message(bad_entry).find("coefficients.A20[1]"), std::string::npos);
  Json bad_n = j;
  bad_n["n"] = 0;
  EXPECT_NE(message(bad_n).find("'n'"), std::string::npos);
}

TEST(Cli, ConstructAndVerifyEveryPattern) {
  TempDir tmp;
  for (const char* v : {"1,2,3", "0,2,3", "0,0,3", "1,0,3", "1,0,0", "1,2,0", "0,2,0"}) {
    const std::string pencil = tmp.file("p.json");
    CliRun c = cli({"construct", data("newton_n2.json"), "--ansatz", v, "--out", pencil});
    ASSERT_EQ(c.code, 0) << v << c.err;
    CliRun r = cli({"verify", data("newton_n2.json"), pencil});
    EXPECT_EQ(r.code, 0) << v << r.out;
    const Json rep = Json::parse(r.out);
    EXPECT_EQ(rep["verdict"], "pass");
    EXPECT_EQ(rep["witnesses"]["status"], "pass");
  }
}

TEST(Cli, CompanionOnMonomialFile) {
  TempDir tmp;
  const std::string pencil = tmp.file("c.json");
  ASSERT_EQ(cli({"construct", data("monomial_n2.json"), "--companion", "--out", pencil}).code, 0);
  const PencilFile f = load_pencil(pencil);
  const auto& mp = std::get<MonomialPencil>(f.pencil);
  const MonomialPencil expected = companion_pencil(load_problem(data("monomial_n2.json")));
  EXPECT_EQ(mp.l1(), expected.l1());
  EXPECT_EQ(mp.l2(), expected.l2());
  EXPECT_EQ(mp.l0(), expected.l0());
  CliRun r = cli({"verify", data("monomial_n2.json"), pencil});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(Json::parse(r.out)["linearization"].contains("gamma"));
}

TEST(Cli, ZeroAnsatzWritesNothing) {
  TempDir tmp;
  const std::string pencil = tmp.file("zero.json");
  CliRun r = cli({"construct", data("newton_n2.json"), "--ansatz", "0,0,0", "--out", pencil});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(fs::exists(pencil));
}

TEST(Cli, CorruptedPencilFails) {
  TempDir tmp;
  const std::string pencil = tmp.file("p.json");
  ASSERT_EQ(cli({"construct", data("newton_n2.json"), "--ansatz", "1,0,0", "--out", pencil}).code, 0);
  Json j = Json::parse(read_text(pencil));
  j["blocks"]["A3"][3][0] = j["blocks"]["A3"][3][0].get<double>() + 0.25;
  j.erase("provenance");
  write(pencil, j.dump());
  CliRun r = cli({"verify", data("newton_n2.json"), pencil});
  EXPECT_EQ(r.code, kExitFail);
  EXPECT_EQ(Json::parse(r.out)["verdict"], "fail");
}

TEST(Cli, InconclusiveExitCode) {
  TempDir tmp;
  Json q = Json::parse(read_text(data("newton_n2.json")));
  for (auto& [name, arr] : q["coefficients"].items()) {
    // Rank-one coefficients sharing one outer product: det Q vanishes.
    arr = Json::array({{1.0, 0.0}, {2.0, 0.0}, {2.0, 0.0}, {4.0, 0.0}});
  }
  const std::string problem = tmp.file("deg.json");
  write(problem, q.dump());
  const std::string pencil = tmp.file("p.json");
  ASSERT_EQ(cli({"construct", problem, "--ansatz", "1,0,0", "--params", "seed", "--out", pencil}).code, 0);
  EXPECT_EQ(cli({"verify", problem, pencil}).code, kExitInconclusive);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"bogus"}).code, kExitUsage);
  EXPECT_EQ(cli({"verify", data("newton_n2.json"), data("newton_n2.json"), "--samples", "3"}).code,
            kExitUsage);
  EXPECT_EQ(cli({"spectrum", data("newton_n2.json"), "--slices", "0"}).code, kExitUsage);
  EXPECT_EQ(cli({"construct", data("newton_n2.json")}).code, kExitUsage);
  EXPECT_EQ(cli({"construct", data("newton_n2.json"), "--companion", "--ansatz", "1,0,0"}).code,
            kExitUsage);
  EXPECT_EQ(cli({"construct", "/nonexistent.json", "--companion"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitPass);
}

TEST(Cli, NodeMismatch) {
  TempDir tmp;
  const std::string pencil = tmp.file("c.json");
  ASSERT_EQ(cli({"construct", data("monomial_n2.json"), "--companion", "--out", pencil}).code, 0);
  CliRun r = cli({"verify", data("newton_n2.json"), pencil});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("node mismatch"), std::string::npos);
  EXPECT_EQ(cli({"delta", data("pair_p1_a.json"), data("pair_p1_other_nodes.json")}).code, kExitUsage);
}

TEST(Cli, DeltaCompanionPairIsSingular) {
  CliRun r = cli({"delta", data("pair_p1_a.json"), data("pair_p1_b.json"), "--check-singular"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json rep = Json::parse(r.out);
  EXPECT_EQ(rep["singular"], true);
  EXPECT_EQ(rep["delta_size"], 9);
  CliRun s = cli({"delta", data("pair_p1_a.json"), data("pair_p1_b.json"), "--params", "seed",
               "--check-singular"});
  EXPECT_EQ(s.code, 0);
}

TEST(Cli, SpectrumSlicesAndPair) {
  TempDir tmp;
  CliRun s = cli({"spectrum", data("newton_n2.json"), "--slices", "3"});
  ASSERT_EQ(s.code, 0) << s.err;
  const Json rep = Json::parse(s.out);
  ASSERT_EQ(rep["slices"].size(), 3u);
  for (const auto& slice : rep["slices"]) EXPECT_EQ(slice["contained"], true);

  const std::string csv = tmp.file("pair.csv");
  CliRun p = cli({"spectrum", data("pair_p1_a.json"), "--pair", data("pair_p1_b.json"), "--out", csv});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(Json::parse(p.out)["count"], 4);
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "re_lambda,im_lambda,re_mu,im_mu,residual");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);

  EXPECT_EQ(cli({"spectrum", data("pair_p1_a.json"), "--pair", data("pair_p1_a.json")}).code,
            kExitInconclusive);
}

TEST(Cli, ReportsAreByteIdentical) {
  const std::vector<std::string> args = {"construct", data("newton_n2.json"), "--ansatz",
                                         "0,0,3",     "--seed",                "5"};
  EXPECT_EQ(cli(args).out, cli(args).out);
  const std::vector<std::string> spec = {"spectrum", data("newton_n2.json"), "--seed", "9"};
  EXPECT_EQ(cli(spec).out, cli(spec).out);
}

TEST(Cli, SeedFallsBackToEnvironment) {
  const std::vector<std::string> args = {"spectrum", data("newton_n2.json"), "--slices", "2"};
  ::setenv("NEWTON2PEP_SEED", "17", 1);
  const Json env = Json::parse(cli(args).out);
  ::unsetenv("NEWTON2PEP_SEED");
  EXPECT_EQ(env["seed"], 17);
  std::vector<std::string> explicit_seed = args;
  explicit_seed.insert(explicit_seed.end(), {"--seed", "17"});
  const Json flag = Json::parse(cli(explicit_seed).out);
  EXPECT_EQ(env["slices"], flag["slices"]);
  ::setenv("NEWTON2PEP_SEED", "not-a-number", 1);
  EXPECT_EQ(cli(args).code, kExitUsage);
  ::unsetenv("NEWTON2PEP_SEED");
}

TEST(Cli, TransferKeepsAnsatz) {
  TempDir tmp;
  // Monomial companion of the Newton file's coefficients, reused over its nodes.
  Json q = Json::parse(read_text(data("newton_n2.json")));
  q.erase("nodes");
  q["basis"] = "monomial";
  const std::string mono = tmp.file("mono.json");
  write(mono, q.dump());
  const std::string pencil = tmp.file("c.json");
  ASSERT_EQ(cli({"construct", mono, "--companion", "--out", pencil}).code, 0);
  CliRun r = cli({"transfer", pencil, data("newton_n2.json"), "--out", tmp.file("t.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(cli({"verify", data("newton_n2.json"), tmp.file("t.json")}).code, 0);
}
