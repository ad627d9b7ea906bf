#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "geoseg/decay.hpp"
#include "geoseg/geo.hpp"
#include "geoseg/ingest.hpp"
#include "geoseg/io.hpp"
#include "geoseg/network.hpp"
#include "geoseg/nullmodel.hpp"
#include "geoseg/parallel.hpp"
#include "geoseg/random.hpp"
#include "geoseg/segregation.hpp"
#include "geoseg/synth.hpp"

namespace geoseg {

inline constexpr int kReportSchemaVersion = 1;

struct AnalyzeConfig {
  InputPaths inputs;
  GeoPoint center;
  double bin_km = 1.0;
  std::size_t k = 20;
  double radius_km = 1.0;
  std::size_t simulations = 10000;  // 0 skips the null model
  std::size_t null_k = 1;
  std::size_t permutations = 999;
  std::uint64_t seed = 0;
  std::uint64_t min_pairs_per_bin = 30;
  std::optional<double> d_min_km;
  FilterConfig filter;
  std::filesystem::path out_dir;
  std::size_t threads = default_threads();
};

struct AnalyzeOutcome {
  io::json report;
  std::filesystem::path report_path;
};

/// ingest -> networks -> decay -> segregation -> null model, writing every
/// table and report.json into cfg.out_dir.
inline AnalyzeOutcome run_analyze(const AnalyzeConfig& cfg) {
  using io::json;
  if (cfg.k < 1) throw Error(ErrorKind::KOutOfRange, "k must be at least 1");
  std::filesystem::create_directories(cfg.out_dir);
  const auto out = [&](const char* name) { return cfg.out_dir / name; };

  const auto parsed = parse_inputs(cfg.inputs);
  const auto filtered = apply_filters(parsed.raw, cfg.filter);
  const Roster& roster = filtered.roster;
  io::write_file(out("filter_report.json"), io::to_json(filtered.report).dump(2) + "\n");

  const auto count = build_count_network(filtered.graph, roster);
  const auto minsym = build_min_symmetrized_network(filtered.graph, roster);
  io::write_file(out("network_a.csv"), io::network_csv(count.network));
  io::write_file(out("network_ahat.csv"), io::network_csv(minsym.network));

  const auto dm = school_distance_matrix(roster, cfg.threads);
  const SegregationOptions seg{cfg.permutations, cfg.threads};

  // Tie existence only, so the binary projection of A.
  const auto binary = binarize(count.network);
  auto curve = tie_probability_curve(binary, dm, cfg.bin_km);
  json decay_fit;
  try {
    const auto fit = fit_power_law(curve, {cfg.d_min_km, cfg.min_pairs_per_bin});
    curve = curve.with_fit(fit.exponent, fit.prefactor);
    decay_fit = io::to_json(fit);
    decay_fit["status"] = "ok";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::TooFewBins && e.kind() != ErrorKind::DegenerateFit) throw;
    decay_fit = json{{"status", "failed"}, {"error", e.what()}};
  }
  decay_fit["bin_km"] = cfg.bin_km;
  decay_fit["network"] = to_string(binary.kind());
  decay_fit["min_pairs_per_bin"] = cfg.min_pairs_per_bin;
  io::write_file(out("decay_curve.csv"), io::decay_curve_csv(curve));
  io::write_file(out("decay_fit.json"), decay_fit.dump(2) + "\n");

  json reports = json::array();
  if (parsed.apartments.empty()) {
    reports.push_back(json{{"statistic", "S_n"}, {"status", "skipped"}, {"reason", "no apartments file"}});
  } else {
    reports.push_back(io::to_json(
        neighborhood_affluence_segregation(roster, parsed.apartments, cfg.radius_km, {cfg.permutations, cfg.seed},
                                           cfg.threads)));
  }
  reports.push_back(io::to_json(center_distance_correlation(roster, cfg.center, {cfg.permutations, cfg.seed})));

  std::vector<std::size_t> k_values(cfg.k);
  std::iota(k_values.begin(), k_values.end(), std::size_t{1});
  const auto profile = segregation_profile(roster, dm, count.network, k_values, cfg.seed, seg);
  io::write_file(out("segregation_profile.csv"), io::profile_csv(profile));
  reports.push_back(io::to_json(profile.back().geographic));
  reports.push_back(io::to_json(profile.back().digital));
  const auto sd_minsym = digital_segregation(roster, minsym.network, cfg.k, cfg.seed, seg);
  reports.push_back(io::to_json(sd_minsym));
  reports.push_back(io::to_json(degree_outcome_correlation(roster, count.network, cfg.seed, seg)));

  io::write_file(out("neighbor_scatter.csv"),
                 io::neighbor_scatter_csv(geographic_neighbor_table(roster, dm, cfg.k, cfg.seed, cfg.threads),
                                          digital_neighbor_table(roster, count.network, cfg.k, cfg.seed, cfg.threads)));

  json null_model = nullptr;
  if (cfg.simulations > 0) {
    const auto null = null_distribution_s_d(roster, dm, count.network, curve, cfg.null_k, cfg.simulations, cfg.seed,
                                            {UncoveredPolicy::Zero, 20, cfg.threads});
    io::write_file(out("null_distribution.csv"), io::null_distribution_csv(null.values));
    null_model = io::to_json(null);
  } else {
    io::write_file(out("null_distribution.csv"), io::null_distribution_csv({}));
  }

  std::uint64_t intra = 0;
  for (auto c : count.intra_school_edges) intra += c;
  json settings{{"bin_km", cfg.bin_km},
                {"k", cfg.k},
                {"radius_km", cfg.radius_km},
                {"simulations", cfg.simulations},
                {"null_k", cfg.null_k},
                {"permutations", cfg.permutations},
                {"seed", cfg.seed},
                {"min_pairs_per_bin", cfg.min_pairs_per_bin},
                {"d_min_km", cfg.d_min_km ? json(*cfg.d_min_km) : json(nullptr)},
                {"center_latitude", cfg.center.latitude},
                {"center_longitude", cfg.center.longitude},
                {"max_cohort", cfg.filter.max_cohort},
                {"excluded_ids", cfg.filter.excluded_ids}};

  json report{{"schema_version", kReportSchemaVersion},
              {"settings", settings},
              {"filter", io::to_json(filtered.report)},
              {"network",
               {{"schools", roster.size()},
                {"students", filtered.graph.student_count()},
                {"student_edges", filtered.graph.edges().size()},
                {"intra_school_edges", intra},
                {"linked_school_pairs", count.network.nonzero_pairs().size()}}},
              {"decay_fit", decay_fit},
              {"reports", reports},
              {"robustness",
               {{"k", cfg.k},
                {"s_d_raw_count", profile.back().digital.value},
                {"s_d_min_symmetrized", sd_minsym.value},
                {"same_sign", (profile.back().digital.value > 0) == (sd_minsym.value > 0)}}},
              {"null_model", null_model}};
  const auto report_path = out("report.json");
  io::write_file(report_path, report.dump(2) + "\n");
  return {std::move(report), report_path};
}

struct SynthCommandConfig {
  SynthConfig city;
  std::size_t n_apartments = 2000;
  ApartmentField apartments;
  std::filesystem::path out_dir;
};

/// Writes a synthetic city in the ingest schemas plus ground_truth.json.
inline io::json run_synth(const SynthCommandConfig& cfg) {
  using io::json;
  const auto city = generate_city(cfg.city);
  const auto apartments = generate_apartments(city, cfg.n_apartments, cfg.apartments, cfg.city.seed);
  std::mt19937_64 area_rng(derive_seed(cfg.city.seed, "areas"));
  std::uniform_real_distribution<double> area(35.0, 90.0);
  std::vector<double> areas(apartments.size());
  for (auto& a : areas) a = std::round(area(area_rng) * 10.0) / 10.0;

  const auto students = to_student_graph(city);
  std::filesystem::create_directories(cfg.out_dir);
  io::write_file(cfg.out_dir / "students.csv", io::students_csv(students));
  io::write_file(cfg.out_dir / "edges.csv", io::edges_csv(students));
  io::write_file(cfg.out_dir / "schools.csv", io::schools_csv(city.roster));
  io::write_file(cfg.out_dir / "apartments.csv", io::apartments_csv(apartments, areas));

  json truth{{"config", io::to_json(cfg.city)},
             {"apartments",
              {{"n_apartments", cfg.n_apartments},
               {"price_coupling", cfg.apartments.coupling},
               {"price_noise", cfg.apartments.noise},
               {"base_price", cfg.apartments.base_price}}},
             {"kernel", city.truth.kernel},
             {"expected_ties", city.truth.expected_ties},
             {"realized_ties", city.truth.realized_ties},
             {"students", students.student_count()},
             {"student_edges", students.edges().size()}};
  io::write_file(cfg.out_dir / "ground_truth.json", truth.dump(2) + "\n");
  return truth;
}

}  // namespace geoseg
