#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fusion/cli.hpp"
#include "fusion/io.hpp"
#include "fusion/supra_bayes.hpp"

using namespace fusion;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("fusion_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }
  static std::string slurp(const std::string& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, PoolFig4Panel) {
  const auto a = write("a.json", R"({"mean":[-2.5],"cov":[[1]]})");
  const auto b = write("b.json", R"({"mean":[2.5],"cov":[[1]]})");
  auto lin = run({"pool", "--kind", "holder", "--alpha", "1", "--weights", "0.5,0.5", "-o", path("lin.csv"), a, b});
  ASSERT_EQ(lin.code, 0) << lin.err;
  auto dl = read_grid_csv_file(path("lin.csv"));
  EXPECT_EQ(local_maxima(dl).size(), 2u);
  auto log = run({"pool", "--kind", "log-linear", "--weights", "0.5,0.5", "-o", path("log.csv"), a, b});
  ASSERT_EQ(log.code, 0) << log.err;
  EXPECT_EQ(local_maxima(read_grid_csv_file(path("log.csv"))).size(), 1u);
  auto j = json::parse(log.out);
  EXPECT_NEAR(j["moments"]["cov"][0][0].get<double>(), 1.0, 1e-6);
  auto h = run({"pool", "--kind", "holder", "--alpha", "0.5", "--weights", "0.5,0.5", "-o", path("h.csv"), a, b});
  EXPECT_EQ(h.code, 0) << h.err;
}

TEST_F(Cli, SupraExample3) {
  const auto model = path("example3.json");
  auto dump = run({"supra", "--private-shared", "4:1,4,4", "--dump-model", model});
  ASSERT_EQ(dump.code, 0) << dump.err;
  auto r = run({"supra", "--model", model, "--scalar"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_NEAR(j["scalar_weights"][0].get<double>(), -1.0 / 7.0, 1e-12);
  EXPECT_TRUE(j["oracle"].is_null());
  auto v = run({"supra", "--model", model, "--vector", "--y", "1,1,1,1,1,2,2,2,2,2,2,2,2,3,3,3,3,3,3,3,3"});
  ASSERT_EQ(v.code, 0) << v.err;
  EXPECT_NEAR(json::parse(v.out)["vector_weights"][0][0][0].get<double>(), -1.0 / 7.0, 1e-12);
}

TEST_F(Cli, DivergenceOfSelfIsZero) {
  const auto a = write("a.json", R"({"mean":[0.3],"cov":[[2]]})");
  ASSERT_EQ(run({"pool", "--kind", "linear", "-o", path("a.csv"), a}).code, 0);
  auto r = run({"divergence", "--kind", "kl", path("a.csv"), path("a.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::stod(r.out), 0.0);
}

TEST_F(Cli, DeterministicOutput) {
  const auto a = write("a.json", R"({"mean":[-1],"cov":[[1]]})");
  const auto b = write("b.json", R"({"mean":[2],"cov":[[3]]})");
  for (const char* f : {"x.csv", "y.csv"})
    ASSERT_EQ(run({"pool", "--kind", "holder", "--alpha", "2", "--weights", "0.3,0.7", "-o", path(f), a, b}).code, 0);
  EXPECT_EQ(slurp(path("x.csv")), slurp(path("y.csv")));
  auto c1 = run({"axiom-check", "--kind", "linear", "--weights", "0.4,0.6", "--axiom", "A10", "--trials", "5", "--seed", "3"});
  auto c2 = run({"axiom-check", "--kind", "linear", "--weights", "0.4,0.6", "--axiom", "A10", "--trials", "5", "--seed", "3"});
  EXPECT_EQ(c1.out, c2.out);
  EXPECT_FALSE(json::parse(c1.out)["passed"].get<bool>());
}

TEST_F(Cli, RoundTrip) {
  const auto a = write("a.json", R"({"mean":[0],"cov":[[1]]})");
  const auto b = write("b.json", R"({"mean":[1],"cov":[[0.5]]})");
  ASSERT_EQ(run({"pool", "--kind", "log-linear", "-o", path("f.csv"), a, b}).code, 0);
  auto d = read_grid_csv_file(path("f.csv"));
  EXPECT_NEAR(integrate(d), 1.0, 1e-8);
  EXPECT_EQ(run({"divergence", "--kind", "l2", path("f.csv"), a}).code, 0);
}

TEST_F(Cli, Weights) {
  const auto a = write("a.json", R"({"mean":[-1],"cov":[[1]]})");
  const auto b = write("b.json", R"({"mean":[1],"cov":[[1]]})");
  auto r = run({"weights", "--method", "min-kld", a, b});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["weights"][0].get<double>(), 0.5, 1e-3);
  const auto c = write("c.json", R"({"mean":[0],"cov":[[4]]})");
  auto ci = run({"weights", "--method", "ci", a, c});
  ASSERT_EQ(ci.code, 0) << ci.err;
  EXPECT_NEAR(json::parse(ci.out)["weights"][0].get<double>(), 1.0, 1e-6);
  EXPECT_EQ(run({"weights", "--method", "discrepancy", a, b}).code, 0);
  EXPECT_EQ(run({"weights", "--method", "reverse-kld", a, b}).code, 0);
}

TEST_F(Cli, Fig4) {
  auto r = run({"fig4", "--output-dir", path("out"), "--points", "512"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("out/fig4a.csv")));
  std::ifstream is(path("out/fig4b.csv"));
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "theta,q1,q2,alpha=-1,alpha=0+,alpha=0.5,alpha=1,alpha=2");
}

TEST_F(Cli, ExitCodes) {
  const auto a = write("a.json", R"({"mean":[0],"cov":[[1]]})");
  auto bad = run({"pool", "--kind", "median", "-o", path("x.csv"), a});
  EXPECT_EQ(bad.code, cli::kExitInput);
  auto j = json::parse(bad.err);
  EXPECT_EQ(j["category"], "input");
  EXPECT_EQ(j["error"], "ValueError");
  EXPECT_EQ(run({"pool", "--kind", "linear", a}).code, cli::kExitInput);
  EXPECT_EQ(run({"divergence", path("missing.csv"), a}).code, cli::kExitInput);
  EXPECT_EQ(run({}).code, cli::kExitInput);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);

  // Perfectly duplicated observations make the statistic covariance singular.
  const auto m = write("m.json", R"({"H_blocks":[[[1]],[[1]]],"Sigma":[[1,1],[1,1]],"prior_mean":[0],"prior_cov":[[1]]})");
  auto sing = run({"supra", "--model", m});
  EXPECT_EQ(sing.code, cli::kExitNumerical) << sing.err;
  EXPECT_EQ(json::parse(sing.err)["error"], "SingularityError");

  const auto b = write("b.json", R"({"mean":[2],"cov":[[3]]})");
  const auto c = write("c.json", R"({"mean":[-1],"cov":[[0.5]]})");
  auto nc = run({"weights", "--method", "min-kld", "--max-iter", "1", "--tol", "1e-14", a, b, c});
  EXPECT_EQ(nc.code, cli::kExitConvergence);
  EXPECT_FALSE(json::parse(nc.out)["converged"].get<bool>());
  EXPECT_EQ(run({"axiom-check", "--kind", "log-linear", "--axiom", "A2"}).code, cli::kExitInput);
}

TEST_F(Cli, CsvInputs) {
  const auto a = write("a.csv", "# 1,0,1,17\n" + std::string(17 * 2, ' '));
  std::ostringstream body;
  body << "# 1,0,1,17\n";
  for (int i = 0; i < 17; ++i) body << (i < 8 ? 1.0 : 3.0) << '\n';
  const auto p = write("p.csv", body.str());
  auto r = run({"pool", "--kind", "linear", "-o", path("o.csv"), p, p});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run({"pool", "--kind", "linear", "-o", path("o.csv"), a}).code, cli::kExitInput);
}
