#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "geoseg/pipeline.hpp"

using namespace geoseg;
namespace fs = std::filesystem;

namespace {

struct Run {
  int exit_code = -1;
  std::string output;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const auto log = fs::temp_directory_path() / ("geoseg_cli_" + std::to_string(++counter) + ".log");
  const std::string cmd = env + " \"" + std::string(GEOSEG_CLI) + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  Run run;
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  run.output = slurp(log);
  return run;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("geoseg_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string inputs(const fs::path& city) {
  return "--students " + (city / "students.csv").string() + " --edges " + (city / "edges.csv").string() +
         " --schools " + (city / "schools.csv").string() + " --apartments " + (city / "apartments.csv").string() +
         " --center-lat 59.9343 --center-lon 30.3351";
}

const fs::path& shared_city() {
  static const fs::path dir = [] {
    const auto d = scratch("city");
    const auto run = cli("synth --n-schools 150 --homophily 4 --price-coupling 0.3 --seed 3 --out-dir " + d.string());
    EXPECT_EQ(run.exit_code, 0) << run.output;
    return d;
  }();
  return dir;
}

}  // namespace

TEST(Cli, SynthThenAnalyze) {
  const auto out = scratch("analyze");
  const auto run = cli("analyze " + inputs(shared_city()) + " --k 5 --simulations 200 --permutations 199 --out-dir " +
                       out.string());
  ASSERT_EQ(run.exit_code, 0) << run.output;
  for (const char* name : {"report.json", "filter_report.json", "network_a.csv", "network_ahat.csv",
                           "decay_curve.csv", "decay_fit.json", "segregation_profile.csv", "neighbor_scatter.csv",
                           "null_distribution.csv"}) {
    EXPECT_TRUE(fs::exists(out / name)) << name;
  }
  const auto report = nlohmann::json::parse(slurp(out / "report.json"));
  EXPECT_EQ(report.at("schema_version"), kReportSchemaVersion);
  EXPECT_EQ(report.at("network").at("schools"), 150);
  EXPECT_EQ(report.at("decay_fit").at("status"), "ok");
  bool saw_s_d = false;
  for (const auto& r : report.at("reports")) {
    if (r.at("statistic") == "S_d" && r.at("settings").at("network") == "raw-count") {
      saw_s_d = true;
      EXPECT_GT(r.at("value").get<double>(), 0.3);
      EXPECT_EQ(r.at("p_value_method"), "permutation");
    }
    if (r.at("statistic") == "S_n") {
      EXPECT_GT(r.at("value").get<double>(), 0.0);
    }
  }
  EXPECT_TRUE(saw_s_d);
  EXPECT_EQ(report.at("null_model").at("simulations"), 200);
  EXPECT_LE(report.at("null_model").at("empirical_p").get<double>(), 0.01);
}

TEST(Cli, OutputsAreReReadable) {
  const auto out = scratch("reread");
  ASSERT_EQ(cli("analyze " + inputs(shared_city()) + " --k 3 --simulations 0 --permutations 0 --out-dir " +
                out.string())
                .exit_code,
            0);
  const auto parsed = parse_inputs({(shared_city() / "students.csv").string(), (shared_city() / "edges.csv").string(),
                                    (shared_city() / "schools.csv").string(), std::nullopt});
  const auto filtered = apply_filters(parsed.raw);
  const auto a = io::read_network_csv(csv::read_file((out / "network_a.csv").string()), filtered.roster.ids(),
                                      NetworkKind::RawCount);
  EXPECT_EQ(a, build_count_network(filtered.graph, filtered.roster).network);
  const auto curve = io::read_decay_curve_csv(csv::read_file((out / "decay_curve.csv").string()));
  const auto expected = tie_probability_curve(binarize(a), school_distance_matrix(filtered.roster), 1.0);
  EXPECT_EQ(curve.pair_counts(), expected.pair_counts());
  EXPECT_EQ(curve.bin_edges().size(), expected.bin_edges().size());
  const auto profile = csv::read_file((out / "segregation_profile.csv").string());
  EXPECT_EQ(profile.rows().size(), 3u);
  const auto scatter = csv::read_file((out / "neighbor_scatter.csv").string());
  EXPECT_EQ(scatter.rows().size(), 150u);
  EXPECT_NO_THROW(nlohmann::json::parse(slurp(out / "filter_report.json")));
  EXPECT_NO_THROW(nlohmann::json::parse(slurp(out / "decay_fit.json")));
}

TEST(Cli, SameSeedIsByteIdentical) {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  const std::string args = "analyze " + inputs(shared_city()) + " --k 4 --simulations 150 --permutations 199 --seed 9";
  ASSERT_EQ(cli(args + " --out-dir " + a.string(), "GEOSEG_THREADS=1").exit_code, 0);
  ASSERT_EQ(cli(args + " --out-dir " + b.string(), "GEOSEG_THREADS=3").exit_code, 0);
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
  EXPECT_EQ(slurp(a / "null_distribution.csv"), slurp(b / "null_distribution.csv"));
}

TEST(Cli, MissingSchoolsFile) {
  const auto out = scratch("missing");
  const auto run = cli("analyze --students " + (shared_city() / "students.csv").string() + " --edges " +
                       (shared_city() / "edges.csv").string() + " --schools /nonexistent/schools_missing.csv" +
                       " --center-lat 59.9 --center-lon 30.3 --out-dir " + out.string());
  EXPECT_EQ(run.exit_code, 2);
  EXPECT_NE(run.output.find("schools_missing.csv"), std::string::npos) << run.output;
}

TEST(Cli, TooFewSchools) {
  const auto run = cli("synth --n-schools 5 --out-dir " + scratch("five").string());
  EXPECT_EQ(run.exit_code, 2);
  EXPECT_NE(run.output.find("InvalidConfig"), std::string::npos) << run.output;
}

TEST(Cli, UnknownFlagIsInputError) {
  EXPECT_EQ(cli("analyze --bogus 1").exit_code, 2);
  EXPECT_EQ(cli("").exit_code, 2);
}

TEST(Cli, GroundTruthEchoesFlags) {
  const auto out = scratch("truth");
  const auto run = cli(
      "synth --n-schools 40 --radius-km 8 --p0 0.6 --alpha -0.5 --d0 0.5 --homophily 3 --degree-boost 0.2 "
      "--gradient 0.1 --score-mean 60 --score-sd 7 --students-per-school 4 --apartments 300 --price-coupling 0.4 "
      "--price-noise 0.05 --seed 77 --out-dir " +
      out.string());
  ASSERT_EQ(run.exit_code, 0) << run.output;
  const auto truth = nlohmann::json::parse(slurp(out / "ground_truth.json"));
  const auto& c = truth.at("config");
  EXPECT_EQ(c.at("n_schools"), 40);
  EXPECT_EQ(c.at("city_radius_km"), 8.0);
  EXPECT_EQ(c.at("p0"), 0.6);
  EXPECT_EQ(c.at("alpha"), -0.5);
  EXPECT_EQ(c.at("d0_km"), 0.5);
  EXPECT_EQ(c.at("homophily"), 3.0);
  EXPECT_EQ(c.at("degree_boost"), 0.2);
  EXPECT_EQ(c.at("gradient"), 0.1);
  EXPECT_EQ(c.at("score_mean"), 60.0);
  EXPECT_EQ(c.at("score_sd"), 7.0);
  EXPECT_EQ(c.at("students_per_school"), 4);
  EXPECT_EQ(c.at("seed"), 77);
  EXPECT_EQ(truth.at("apartments").at("n_apartments"), 300);
  EXPECT_EQ(truth.at("apartments").at("price_coupling"), 0.4);
  EXPECT_EQ(truth.at("apartments").at("price_noise"), 0.05);
  EXPECT_EQ(truth.at("students"), 160);
}

TEST(Cli, SynthDefaultsPassFiltersUntouched) {
  const auto out = scratch("defaults");
  ASSERT_EQ(cli("synth --out-dir " + out.string()).exit_code, 0);
  const auto parsed = parse_inputs({(out / "students.csv").string(), (out / "edges.csv").string(),
                                    (out / "schools.csv").string(), (out / "apartments.csv").string()});
  const auto result = apply_filters(parsed.raw);
  const auto& r = result.report;
  EXPECT_EQ(r.output_students, r.input_students);
  EXPECT_EQ(r.output_schools, r.input_schools);
  EXPECT_EQ(r.output_edges, r.input_edges);
  EXPECT_EQ(r.input_schools, 600u);
  EXPECT_EQ(parsed.apartments.size(), 2000u);
}

TEST(Pipeline, InProcessMatchesCli) {
  const auto out = scratch("inproc");
  AnalyzeConfig cfg;
  cfg.inputs = {(shared_city() / "students.csv").string(), (shared_city() / "edges.csv").string(),
                (shared_city() / "schools.csv").string(), (shared_city() / "apartments.csv").string()};
  cfg.center = GeoPoint(59.9343, 30.3351);
  cfg.k = 3;
  cfg.simulations = 100;
  cfg.permutations = 0;
  cfg.out_dir = out / "lib";
  cfg.threads = 2;
  const auto outcome = run_analyze(cfg);
  ASSERT_EQ(cli("analyze " + inputs(shared_city()) + " --k 3 --simulations 100 --permutations 0 --out-dir " +
                (out / "cli").string())
                .exit_code,
            0);
  EXPECT_EQ(slurp(outcome.report_path), slurp(out / "cli" / "report.json"));
}
