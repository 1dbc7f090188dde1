#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vortlab/cli.hpp"
#include "vortlab/expr_json.hpp"
#include "vortlab/lie_algebra.hpp"
#include "vortlab/reduction.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;

  json parsed() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = vortlab::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("vortlab_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const json& j) const {
    std::ofstream(path(name)) << j.dump();
    return path(name);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

const json kSinExample = {
    {"family", "partial"},
    {"beta", 1.0},
    {"case", "eta_general"},
    {"profile", {"sin", {"var", "omega"}}},
    {"g1", {{"name", "g1"}, {"kind", "constant"}, {"value", 1.0}}},
    {"g0", {{"name", "g0"}, {"kind", "polynomial"}, {"coefficients", {0.0, 1.0}}}}};

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  const auto missing = run({"lorenz1960", "--k", "1"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("--l"), std::string::npos);
  EXPECT_EQ(run({"lorenz1960", "--k", "x", "--l", "2"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"reduce"}).code, 1);
  EXPECT_EQ(run({"verify-solution", "partial"}).code, 1);
}

TEST(Cli, Lorenz1960) {
  const auto r = run({"lorenz1960", "--k", "1", "--l", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto model = vortlab::reduced_model_from_json(r.parsed());
  EXPECT_NEAR(model.coefficient("A", "F", "G"), -1.6, 1e-15);
  EXPECT_NEAR(model.coefficient("F", "A", "G"), 0.1, 1e-15);
  EXPECT_NEAR(model.coefficient("G", "A", "F"), 0.75, 1e-15);
  EXPECT_EQ(vortlab::to_json(model), r.parsed());
  EXPECT_EQ(r.out.substr(0, 4), "{\n  ");
}

TEST(Cli, ListSubgroups) {
  const auto table = run({"list-subgroups"});
  ASSERT_EQ(table.code, 0);
  std::istringstream lines(table.out);
  std::string line;
  int rows = -1;
  bool found = false;
  while (std::getline(lines, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string word;
    std::size_t order = 0, dim = 0;
    fields >> word >> order >> dim;
    if (word == "pqe1,pqe2") {
      found = true;
      EXPECT_EQ(order, 4u);
      EXPECT_EQ(dim, 3u);
    }
  }
  EXPECT_EQ(rows, 67);
  EXPECT_TRUE(found);

  const auto j = run({"list-subgroups", "--format", "json"}).parsed();
  ASSERT_EQ(j.at("subgroups").size(), 67u);
  for (const auto& s : j.at("subgroups")) {
    if (s.at("word") == "pqe1,pqe2") {
      EXPECT_EQ(s.at("dimension"), 3);
      EXPECT_EQ(s.at("elements"), json({"1", "pqe1", "pqe2", "e1e2"}));
    }
  }

  const auto csv = run({"list-subgroups", "--format", "csv"}).out;
  EXPECT_EQ(csv.substr(0, 22), "word,order,dimension\r\n");
  EXPECT_NE(csv.find("\"pqe1,pqe2\",4,3\r\n"), std::string::npos);
  EXPECT_EQ(run({"list-subgroups", "--format", "xml"}).code, 1);
}

TEST_F(CliFiles, Reduce) {
  const auto r = run({"reduce", "--subgroup", "pqe1,pqe2", "--k", "1", "--l", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = vortlab::reduced_model_from_json(r.parsed());
  EXPECT_EQ(m.dimension(), 3u);
  EXPECT_NEAR(m.coefficient("A[0,1]", "A[1,-1]", "A[1,0]"), -1.6, 1e-15);

  const auto box = run({"reduce", "-s", "e1e2", "--truncation", "box", "--n", "2"});
  ASSERT_EQ(box.code, 0) << box.err;

  const auto bad = run({"reduce", "--subgroup", "e3"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("subgroup"), std::string::npos);

  const auto cfg = write("r.json", {{"subgroup", "pqe1,pqe2"}, {"k", 1}, {"l", 2},
                                    {"output", path("model.json")}});
  ASSERT_EQ(run({"reduce", "--config", cfg}).code, 0);
  EXPECT_EQ(slurp(path("model.json")), r.out);

  const auto unknown = write("u.json", {{"subgroup", "p"}, {"modes", 8}});
  const auto u = run({"reduce", "--config", unknown});
  EXPECT_EQ(u.code, 1);
  EXPECT_NE(u.err.find("'modes'"), std::string::npos);
  EXPECT_EQ(run({"reduce", "--config", cfg, "--subgroup", "p"}).code, 1);
}

TEST(Cli, VerifyRossbyFromFlags) {
  const auto r = run({"verify-solution", "rossby", "--A", "1", "--k", "1", "--l", "1", "--beta", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.parsed();
  EXPECT_EQ(j.at("status"), "PASS");
  EXPECT_LE(j.at("residual").at("max_abs").get<double>(), 1e-12);
  EXPECT_EQ(j.at("residual").at("n_points"), 1331);
  EXPECT_DOUBLE_EQ(j.at("parameters").at("sigma").get<double>(), -0.5);
  const auto field = vortlab::expr_from_json(j.at("field"));
  EXPECT_NEAR(field.evaluate({{"t", 0.0}, {"x", 0.5}, {"y", 0.0}}), std::sin(0.5), 1e-15);
}

TEST(Cli, VerifyKleinGordonFromFlags) {
  for (const char* f : {"0", "1", "0,1"}) {
    const auto r = run({"verify-solution", "klein-gordon", "--f-poly", f, "--beta", "1"});
    EXPECT_EQ(r.code, 0) << f << r.err;
    EXPECT_EQ(r.parsed().at("status"), "PASS");
  }
}

TEST_F(CliFiles, VerifyFromConfig) {
  ASSERT_EQ(run({"verify-solution", "--config", write("sin.json", kSinExample)}).code, 0);

  const json kg{{"family", "klein-gordon"},
                {"beta", 1.2},
                {"f", {{"name", "f"}, {"kind", "sinusoid"}, {"amplitude", 0.5}, {"frequency", 2.0}}},
                {"h", {{"name", "h"}, {"kind", "polynomial"}, {"coefficients", {0.0, 1.0}}}},
                {"solution", {{"kind", "harmonic"}, {"A", 0.7}, {"alpha", 1.3}}}};
  const auto kgr = run({"verify-solution", "--config", write("kg.json", kg)});
  ASSERT_EQ(kgr.code, 0) << kgr.err;

  const json harmonic{{"family", "partial"},
                      {"beta", 1.0},
                      {"case", "eta_constant"},
                      {"harmonic", {"-", {"*", {"var", "x"}, {"var", "x"}}, {"*", {"var", "y"}, {"var", "y"}}}},
                      {"eta", 0.5}};
  EXPECT_EQ(run({"verify-solution", "--config", write("h.json", harmonic)}).code, 0);

  const json wrong{{"family", "field"},
                   {"equation", {{"kind", "cartesian"}, {"beta", 1.0}}},
                   {"field", {"sin", {"+", {"var", "x"}, {"var", "y"}}}}};
  const auto w = run({"verify-solution", "--config", write("w.json", wrong)});
  EXPECT_EQ(w.code, 2);
  EXPECT_EQ(w.parsed().at("status"), "FAIL");

  const json sphere{{"family", "field"},
                    {"equation", {{"kind", "spherical"}, {"omega", 0.0}}},
                    {"field", {"*", 3.0, {"var", "mu"}}}};
  EXPECT_EQ(run({"verify-solution", "--config", write("s.json", sphere)}).code, 0);
}

TEST_F(CliFiles, VerifySchemaErrorsNameTheKey) {
  auto bad = kSinExample;
  bad["g1"]["slope"] = 2.0;
  auto r = run({"verify-solution", "--config", write("a.json", bad)});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("g1"), std::string::npos);
  EXPECT_NE(r.err.find("slope"), std::string::npos);

  bad = kSinExample;
  bad["colour"] = "red";
  r = run({"verify-solution", "--config", write("b.json", bad)});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("'colour'"), std::string::npos);

  bad = kSinExample;
  bad.erase("beta");
  r = run({"verify-solution", "--config", write("c.json", bad)});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("'beta'"), std::string::npos);

  bad = kSinExample;
  bad["beta"] = "one";
  r = run({"verify-solution", "--config", write("d.json", bad)});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("'beta'"), std::string::npos);

  std::ofstream(path("e.json")) << "{not json";
  EXPECT_EQ(run({"verify-solution", "--config", path("e.json")}).code, 1);
  EXPECT_EQ(run({"verify-solution", "--config", path("missing.json")}).code, 1);
}

TEST_F(CliFiles, IntegrateFromFlags) {
  const auto r = run({"integrate", "--model", "lorenz1960", "--initial", "1,1,1", "--dt", "0.001",
                      "--t-end", "100", "--stride", "1000", "--csv", path("l.csv"), "--drift",
                      path("d.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto drift = json::parse(slurp(path("d.json")));
  EXPECT_DOUBLE_EQ(drift.at("E0").get<double>(), 1.65);
  EXPECT_DOUBLE_EQ(drift.at("Z0").get<double>(), 4.0);
  EXPECT_LE(drift.at("E_drift").get<double>(), 1e-8);
  EXPECT_LE(drift.at("Z_drift").get<double>(), 1e-8);
  EXPECT_EQ(r.parsed().at("runs").at(0).at("drift"), drift);

  const auto csv = slurp(path("l.csv"));
  EXPECT_EQ(csv.substr(0, 18), "t,A,F,G\r\n0,1,1,1\r\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 102);

  EXPECT_EQ(run({"integrate", "--initial", "1,1"}).code, 1);
  EXPECT_EQ(run({"integrate", "--initial", "1,1,1", "--dt", "0"}).code, 1);
  EXPECT_EQ(run({"integrate", "--model", "reduced", "--initial", "1,1,1"}).code, 1);
  const auto red = run({"integrate", "--model", "reduced", "-s", "pqe1,pqe2", "--initial",
                        "1,1,1", "--t-end", "1"});
  EXPECT_EQ(red.code, 0) << red.err;
}

TEST_F(CliFiles, IntegrateRunsInParallelDeterministically) {
  json runs = json::array();
  for (int i = 0; i < 4; ++i) {
    runs.push_back({{"model", {{"kind", i % 2 ? "spectral" : "lorenz1960"}, {"k", 1}, {"l", 2}}},
                    {"initial", i % 2 ? json{0.1 * i, 0.2, 0.3, -0.1, 0.0, 0.05, 0.1, 0.2}
                                      : json{1.0, 0.5 * i, 1.0}},
                    {"dt", 0.01},
                    {"t_end", 5.0},
                    {"stride", 10},
                    {"csv", path("run" + std::to_string(i) + ".csv")}});
  }
  const auto cfg = write("runs.json", {{"runs", runs}});
  const auto serial = run({"integrate", "--config", cfg});
  ASSERT_EQ(serial.code, 0) << serial.err;
  std::vector<std::string> first;
  for (int i = 0; i < 4; ++i) first.push_back(slurp(path("run" + std::to_string(i) + ".csv")));
  const auto parallel = run({"integrate", "--config", cfg, "--jobs", "3"});
  ASSERT_EQ(parallel.code, 0);
  EXPECT_EQ(parallel.out, serial.out);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(slurp(path("run" + std::to_string(i) + ".csv")), first[i]);
  EXPECT_EQ(serial.parsed().at("runs").size(), 4u);
}

TEST_F(CliFiles, IntegrateConfigErrors) {
  const json base{{"model", {{"kind", "lorenz1960"}, {"k", 1}, {"l", 2}}},
                  {"initial", {{"A", 1.0}, {"G", 0.5}}},
                  {"t_end", 1.0}};
  EXPECT_EQ(run({"integrate", "--config", write("ok.json", base)}).code, 0);

  auto bad = base;
  bad["initial"]["B"] = 1.0;
  auto r = run({"integrate", "--config", write("a.json", bad)});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("initial.B"), std::string::npos);

  bad = base;
  bad["model"]["m"] = 3;
  r = run({"integrate", "--config", write("b.json", bad)});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("model.m"), std::string::npos);

  bad = base;
  bad["initial"] = {1.0, 2.0};
  r = run({"integrate", "--config", write("c.json", bad)});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("'initial'"), std::string::npos);

  bad = base;
  bad["stride"] = 0;
  r = run({"integrate", "--config", write("d.json", bad)});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("'stride'"), std::string::npos);

  // Every run is checked before any is executed.
  json runs{{"runs", {base, bad}}};
  runs["runs"][0]["csv"] = path("never.csv");
  EXPECT_EQ(run({"integrate", "--config", write("e.json", runs)}).code, 1);
  EXPECT_FALSE(fs::exists(path("never.csv")));
}

TEST(Cli, IntegrateBlowUpIsAFailure) {
  const auto r = run({"integrate", "--initial", "1e150,1e150,1e150", "--dt", "1", "--t-end", "10"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.parsed().at("runs").at(0).at("status"), "blow-up");
}

TEST_F(CliFiles, Transform) {
  const auto ok = run({"transform", "--map", "spherical-derotation", "--omega", "1", "--field",
                       R"(["*", ["var", "mu"], ["var", "mu"]])"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  const auto j = ok.parsed();
  EXPECT_EQ(j.at("status"), "PASS");
  EXPECT_EQ(j.at("rotating").at("equation").at("omega"), 1.0);
  const auto lifted = vortlab::expr_from_json(j.at("transported"));
  EXPECT_NEAR(lifted.evaluate({{"t", 0.0}, {"lambda", 0.0}, {"mu", 0.5}}), 0.75, 1e-15);

  const auto control = run({"transform", "--map", "potential-translation", "--beta", "1", "--F",
                            "1", "--field", R"(["*", ["sin", ["var", "x"]], ["var", "t"]])"});
  EXPECT_EQ(control.code, 2);
  EXPECT_EQ(control.parsed().at("status"), "FAIL");

  const json cfg{{"map", {{"kind", "potential_translation"}, {"beta", 1.0}, {"F", 1.0}}},
                 {"field", {"var", "y"}},
                 {"direction", "inverse"}};
  EXPECT_EQ(run({"transform", "--config", write("t.json", cfg)}).code, 0);

  // Forward: the input is a rotating-frame solution.
  const json fwd{{"map", {{"kind", "spherical_derotation"}, {"omega", 1.0}}},
                 {"field", {"+", {"*", {"var", "mu"}, {"var", "mu"}}, {"var", "mu"}}},
                 {"direction", "forward"}};
  const auto f = run({"transform", "--config", write("f.json", fwd)});
  ASSERT_EQ(f.code, 0) << f.err;
  const auto back = vortlab::expr_from_json(f.parsed().at("transported"));
  EXPECT_NEAR(back.evaluate({{"t", 0.0}, {"lambda", 0.0}, {"mu", 0.5}}), 0.25, 1e-15);

  auto bad = cfg;
  bad["map"]["kind"] = "shear";
  auto r = run({"transform", "--config", write("b.json", bad)});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("map.kind"), std::string::npos);
  bad = cfg;
  bad["map"]["F"] = 0.0;
  EXPECT_EQ(run({"transform", "--config", write("c.json", bad)}).code, 1);
  EXPECT_EQ(run({"transform", "--map", "spherical-derotation", "--field", "[\"var\""}).code, 1);
  EXPECT_EQ(run({"transform", "--map", "spherical-derotation", "--field", R"(["var", "x"])"}).code,
            1);
}

TEST(Cli, BracketTable) {
  const auto r = run({"bracket-table"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.parsed();
  EXPECT_EQ(j.at("generators").size(), 5u);
  ASSERT_EQ(j.at("brackets").size(), 10u);
  const auto registry = vortlab::registry_from_json(j.at("time_functions"));
  std::vector<vortlab::GeneratorField> gens;
  for (const auto& g : j.at("generators")) gens.push_back(vortlab::generator_from_json(g, registry));
  const auto samples = vortlab::generic_samples(vortlab::Frame::Cartesian, 16, 1);
  for (const auto& b : j.at("brackets")) {
    const auto parsed = vortlab::generator_from_json(b.at("bracket"), registry);
    const auto direct = vortlab::lie_bracket(gens[b.at("i").get<std::size_t>()],
                                             gens[b.at("j").get<std::size_t>()]);
    EXPECT_LE(vortlab::max_difference(parsed, direct, samples), 1e-12) << b.at("left");
    EXPECT_EQ(vortlab::to_json(parsed), b.at("bracket"));
  }
  const auto s = run({"bracket-table", "--frame", "spherical", "--omega", "1"});
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(s.parsed().at("brackets").size(), 15u);
}

TEST(Cli, OutputsAreByteIdenticalAcrossRuns) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"lorenz1960", "--k", "1.3", "--l", "0.7"},
           {"list-subgroups", "--format", "json"},
           {"bracket-table"},
           {"verify-solution", "rossby", "--k", "2", "--l", "0.5"},
           {"integrate", "--initial", "1,1,1", "--t-end", "2"}}) {
    EXPECT_EQ(run(args).out, run(args).out) << args.front();
  }
}
