// geoseg: school segregation analysis over friendship networks.
//
//   geoseg synth   --seed 7 --out-dir city/
//   geoseg analyze --students city/students.csv --edges city/edges.csv
//                  --schools city/schools.csv --apartments city/apartments.csv
//                  --center-lat 59.9343 --center-lon 30.3351 --out-dir out/

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geoseg/pipeline.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geographic and digital segregation of schools"};
  app.require_subcommand(1);

  geoseg::AnalyzeConfig analyze;
  std::string apartments;
  double center_lat = 0.0;
  double center_lon = 0.0;
  double d_min = -1.0;
  std::vector<std::string> excluded;
  std::string analyze_out;
  auto* analyze_cmd = app.add_subcommand("analyze", "Run the full pipeline on input files");
  analyze_cmd->add_option("--students", analyze.inputs.students, "student_id,school_id CSV")->required();
  analyze_cmd->add_option("--edges", analyze.inputs.edges, "student_id_a,student_id_b CSV")->required();
  analyze_cmd->add_option("--schools", analyze.inputs.schools, "school_id,latitude,longitude,score CSV")->required();
  analyze_cmd->add_option("--apartments", apartments, "latitude,longitude,price,area (or price_per_sqm) CSV");
  analyze_cmd->add_option("--center-lat", center_lat, "City center latitude")->required();
  analyze_cmd->add_option("--center-lon", center_lon, "City center longitude")->required();
  analyze_cmd->add_option("--bin-km", analyze.bin_km, "Decay-curve bin width in km")->capture_default_str();
  analyze_cmd->add_option("--k", analyze.k, "Neighbor count; the profile covers 1..k")->capture_default_str();
  analyze_cmd->add_option("--radius-km", analyze.radius_km, "Neighborhood radius for S_n")->capture_default_str();
  analyze_cmd->add_option("--simulations", analyze.simulations, "Null-model simulations (0 skips)")
      ->capture_default_str();
  analyze_cmd->add_option("--null-k", analyze.null_k, "k used by the null model")->capture_default_str();
  analyze_cmd->add_option("--permutations", analyze.permutations, "Permutations per p-value (0 skips)")
      ->capture_default_str();
  analyze_cmd->add_option("--min-pairs-per-bin", analyze.min_pairs_per_bin, "Minimum pairs for a fitted bin")
      ->capture_default_str();
  analyze_cmd->add_option("--d-min-km", d_min, "Lower distance cutoff for the power-law fit");
  analyze_cmd->add_option("--max-cohort", analyze.filter.max_cohort, "Drop schools with more students")
      ->capture_default_str();
  analyze_cmd->add_option("--exclude", excluded, "School ids to drop")->delimiter(',');
  analyze_cmd->add_option("--seed", analyze.seed, "Master seed")->capture_default_str();
  analyze_cmd->add_option("--out-dir", analyze_out, "Output directory")->required();

  geoseg::SynthCommandConfig synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic city in the ingest formats");
  auto& city = synth.city;
  synth_cmd->add_option("--n-schools", city.n_schools, "Number of schools (>= 10)")->capture_default_str();
  synth_cmd->add_option("--radius-km", city.city_radius_km, "City radius")->capture_default_str();
  synth_cmd->add_option("--p0", city.decay_prefactor, "Short-range tie probability")->capture_default_str();
  synth_cmd->add_option("--alpha", city.decay_exponent, "Decay exponent (<= 0)")->capture_default_str();
  synth_cmd->add_option("--d0", city.plateau_distance_km, "Plateau distance in km")->capture_default_str();
  synth_cmd->add_option("--homophily", city.homophily_scale, "Homophily scale in score units (0 = off)")
      ->capture_default_str();
  synth_cmd->add_option("--degree-boost", city.degree_boost, "Score-degree coupling (0 = off)")
      ->capture_default_str();
  synth_cmd->add_option("--gradient", city.spatial_score_gradient, "Score gradient per km east")
      ->capture_default_str();
  synth_cmd->add_option("--score-mean", city.score_mean, "Mean school score")->capture_default_str();
  synth_cmd->add_option("--score-sd", city.score_sd, "Score standard deviation")->capture_default_str();
  synth_cmd->add_option("--students-per-school", city.students_per_school, "Students emitted per school")
      ->capture_default_str();
  synth_cmd->add_option("--apartments", synth.n_apartments, "Number of apartments")->capture_default_str();
  synth_cmd->add_option("--price-coupling", synth.apartments.coupling, "Price response to local school score")
      ->capture_default_str();
  synth_cmd->add_option("--price-noise", synth.apartments.noise, "Relative price noise")->capture_default_str();
  synth_cmd->add_option("--seed", city.seed, "Seed")->capture_default_str();
  synth_cmd->add_option("--out-dir", synth_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*analyze_cmd) {
      if (!apartments.empty()) analyze.inputs.apartments = apartments;
      if (d_min >= 0.0) analyze.d_min_km = d_min;
      analyze.filter.excluded_ids.insert(excluded.begin(), excluded.end());
      analyze.center = geoseg::GeoPoint(center_lat, center_lon);
      analyze.out_dir = analyze_out;
      const auto outcome = geoseg::run_analyze(analyze);
      std::cout << "wrote " << outcome.report_path.string() << '\n';
    } else if (*synth_cmd) {
      synth.out_dir = synth_out;
      geoseg::run_synth(synth);
      std::cout << "wrote synthetic city to " << synth_out << '\n';
    }
  } catch (const geoseg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
