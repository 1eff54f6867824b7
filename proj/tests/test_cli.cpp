#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "config.hpp"
#include "experiments.hpp"
#include "report.hpp"

using namespace genfun;
using namespace genfun::cli;
using nlohmann::json;

namespace {

json base_config() {
  return json::parse(R"({
    "experiment": "check-symplectic",
    "space": {"type": "affine", "n": 1},
    "hamiltonians": [{"type": "builtin", "name": "pendulum"}],
    "samples": 6,
    "seed": 11
  })");
}

std::string csv_of(const RunResult& r) {
  std::ostringstream out;
  write_csv(out, r.rows);
  return out.str();
}

ErrorCode config_error(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Config, ParsesDefaults) {
  const auto cfg = parse_config(base_config());
  EXPECT_EQ(cfg.experiment, Experiment::CheckSymplectic);
  EXPECT_EQ(cfg.space, SpaceKind::Affine);
  EXPECT_EQ(cfg.n, 1);
  EXPECT_EQ(cfg.samples, 6);
  EXPECT_EQ(cfg.seed, 11u);
  EXPECT_EQ(cfg.hamiltonians.size(), 1u);
  EXPECT_DOUBLE_EQ(cfg.solver.tol, 1e-12);
}

TEST(Config, RejectsInvalidInput) {
  json j = base_config();
  j["experiment"] = "teleport";
  EXPECT_EQ(config_error(j), ErrorCode::ConfigInvalid);

  j = base_config();
  j["space"]["n"] = 2;
  EXPECT_EQ(config_error(j), ErrorCode::ConfigInvalid);

  j = base_config();
  j["experiment"] = "compose";
  EXPECT_EQ(config_error(j), ErrorCode::ConfigInvalid);

  j = base_config();
  j["experiment"] = "moyal-verify";
  j["hamiltonians"].push_back(j["hamiltonians"][0]);
  EXPECT_EQ(config_error(j), ErrorCode::ConfigInvalid);

  j = base_config();
  j["solver"] = {{"tol", -1.0}};
  EXPECT_EQ(config_error(j), ErrorCode::ConfigInvalid);

  j = base_config();
  j["samples"] = 0;
  EXPECT_EQ(config_error(j), ErrorCode::ConfigInvalid);

  j = base_config();
  j["params"] = {{"hbar", 0.0}};
  EXPECT_EQ(config_error(j), ErrorCode::ConfigInvalid);

  j = base_config();
  j["experiment"] = "sphere-identify";
  EXPECT_EQ(config_error(j), ErrorCode::ConfigInvalid);
}

TEST(Config, ErrorNamesTheField) {
  json j = base_config();
  j["params"] = {{"steps", "many"}};
  try {
    parse_config(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("params.steps"), std::string::npos);
  }
}

TEST(Report, CsvFormat) {
  const std::vector<ReportRow> rows{{"orbit", 0, {2.0, 0.0}, "H", 0.1},
                                    {"orbit", 1, {0.5}, "H", ErrorCode::NoConvergence}};
  std::ostringstream out;
  write_csv(out, rows);
  EXPECT_EQ(out.str(),
            "experiment,sample,inputs,metric,value\n"
            "orbit,0,2;0,H,0.10000000000000001\n"
            "orbit,1,0.5,H,failed:NoConvergence\n");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
}

TEST(Report, SummaryAppliesBound) {
  const std::vector<ReportRow> rows{{"x", 0, {}, "m", 1e-9}, {"x", 1, {}, "m", 3e-9}, {"x", 2, {}, "other", 1.0}};
  const auto ok = summarize_metric({"m", Bound::AtMost, 1e-8, 0.0}, rows);
  EXPECT_EQ(ok["count"], 2);
  EXPECT_TRUE(ok["pass"].get<bool>());
  EXPECT_DOUBLE_EQ(ok["max"].get<double>(), 3e-9);
  EXPECT_FALSE(summarize_metric({"m", Bound::AtMost, 2e-9, 0.0}, rows)["pass"].get<bool>());
  EXPECT_TRUE(summarize_metric({"m", Bound::AtLeast, 1e-9, 0.0}, rows)["pass"].get<bool>());
}

TEST(Experiments, ThreadCountDoesNotChangeOutput) {
  json j = base_config();
  j["samples"] = 12;
  const auto cfg = parse_config(j);
  const auto one = run_experiment(cfg, 1);
  const auto four = run_experiment(cfg, 4);
  EXPECT_EQ(csv_of(one), csv_of(four));
  EXPECT_EQ(one.summary.dump(), four.summary.dump());
  EXPECT_TRUE(one.pass);
}

TEST(Experiments, SeedDeterminesSamples) {
  auto cfg = parse_config(base_config());
  const auto a = csv_of(run_experiment(cfg, 1));
  EXPECT_EQ(a, csv_of(run_experiment(cfg, 2)));
  cfg.seed = 12;
  EXPECT_NE(a, csv_of(run_experiment(cfg, 1)));
}

TEST(Experiments, FailuresBecomeTaggedRows) {
  json j = base_config();
  j["hamiltonians"][0]["scale"] = 50.0;
  j["solver"] = {{"max_iter", 3}};
  j["params"] = {{"radius", 3.0}};
  j["samples"] = 8;
  const auto r = run_experiment(parse_config(j), 2);
  bool tagged = false;
  for (const auto& row : r.rows) tagged = tagged || std::holds_alternative<ErrorCode>(row.value);
  EXPECT_TRUE(tagged);
  EXPECT_FALSE(r.pass);
}

TEST(Experiments, EachKindRuns) {
  const char* configs[] = {
      R"({"experiment":"flow","space":{"type":"affine","n":1},"hamiltonians":[{"type":"builtin","name":"pendulum"}],"samples":3})",
      R"({"experiment":"compose","space":{"type":"affine","n":2},"hamiltonians":[
          {"type":"quadratic","S":[[0.3,0,0,0],[0,0.2,0,0],[0,0,0.1,0],[0,0,0,0.4]]},
          {"type":"quadratic","S":[[0.1,0,0,0],[0,0.1,0,0],[0,0,0.2,0],[0,0,0,0.1]]}],"samples":3})",
      R"({"experiment":"moyal-verify","space":{"type":"affine","n":1},"hamiltonians":[
          {"type":"quadratic","S":[[1,0],[0,1]]},{"type":"quadratic","S":[[1,0],[0,1]]}],"samples":3})",
      R"({"experiment":"sphere-identify","space":{"type":"sphere"},"hamiltonians":[],"samples":20})",
      R"({"experiment":"check-symplectic","space":{"type":"sphere"},
          "hamiltonians":[{"type":"ambient_poly","terms":[{"exp":[0,0,1],"coef":0.3}]}],"samples":3})",
      R"({"experiment":"orbit","space":{"type":"affine","n":1},"hamiltonians":[{"type":"builtin","name":"pendulum"}],
          "params":{"steps":2000,"initial":[2,0]}})",
  };
  for (const char* text : configs) {
    const auto r = run_experiment(parse_config(json::parse(text)), 1);
    EXPECT_TRUE(r.pass) << text << "\n" << r.summary.dump(2);
    EXPECT_FALSE(r.rows.empty());
  }
}

TEST(Experiments, RunAndWriteProducesFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "genfun_cli_test";
  std::filesystem::create_directories(dir);
  auto cfg = parse_config(base_config());
  cfg.output = dir / "run.csv";
  EXPECT_EQ(run_and_write(cfg, 1), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "run.csv"));
  std::ifstream summary(summary_path(cfg.output));
  ASSERT_TRUE(summary.good());
  EXPECT_TRUE(json::parse(summary)["pass"].get<bool>());
  EXPECT_EQ(summary_path("out/a.csv"), std::filesystem::path("out/a.summary.json"));
}
