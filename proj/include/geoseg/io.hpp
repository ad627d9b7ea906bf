#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoseg/csv.hpp"
#include "geoseg/decay.hpp"
#include "geoseg/error.hpp"
#include "geoseg/ingest.hpp"
#include "geoseg/nullmodel.hpp"
#include "geoseg/segregation.hpp"
#include "geoseg/synth.hpp"
#include "geoseg/types.hpp"

namespace geoseg::io {

using json = nlohmann::json;

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

inline std::string num(double v) { return std::isnan(v) ? std::string{} : csv::format_number(v); }

// ---------------------------------------------------------------------------
// Networks: school_a, school_b, weight over the nonzero upper triangle.

inline std::string network_csv(const SchoolNetwork& net) {
  std::ostringstream out;
  out << "school_a,school_b,weight\n";
  for (const auto& p : net.nonzero_pairs()) {
    out << csv::escape(net.ids()[p.a]) << ',' << csv::escape(net.ids()[p.b]) << ',' << p.weight << '\n';
  }
  return out.str();
}

inline SchoolNetwork read_network_csv(const csv::Table& table, const std::vector<std::string>& ids, NetworkKind kind) {
  const auto a_col = table.column("school_a");
  const auto b_col = table.column("school_b");
  const auto w_col = table.column("weight");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
  const std::size_t n = ids.size();
  std::vector<std::uint32_t> w(n * n, 0);
  for (const auto& row : table.rows()) {
    auto a = index.find(table.text(row, a_col));
    auto b = index.find(table.text(row, b_col));
    if (a == index.end() || b == index.end()) table.fail(row, "unknown school id");
    if (a->second == b->second) table.fail(row, "self tie");
    const double weight = table.number(row, w_col);
    if (!(weight >= 0.0) || weight != std::floor(weight) || weight > 4.0e9) table.fail(row, "weight must be a count");
    w[a->second * n + b->second] = static_cast<std::uint32_t>(weight);
    w[b->second * n + a->second] = static_cast<std::uint32_t>(weight);
  }
  return SchoolNetwork(ids, std::move(w), kind);
}

// ---------------------------------------------------------------------------
// Decay curve: bin_mid_km, probability, pair_count. Empty bins leave the
// probability blank.

inline std::string decay_curve_csv(const DecayCurve& curve) {
  std::ostringstream out;
  out << "bin_mid_km,probability,pair_count\n";
  for (std::size_t m = 0; m < curve.bin_count(); ++m) {
    out << num(curve.midpoint(m)) << ',' << num(curve.probabilities()[m]) << ',' << curve.pair_counts()[m] << '\n';
  }
  return out.str();
}

/// Rebuilds a uniform-width curve from its CSV form.
inline DecayCurve read_decay_curve_csv(const csv::Table& table) {
  const auto mid_col = table.column("bin_mid_km");
  const auto p_col = table.column("probability");
  const auto n_col = table.column("pair_count");
  if (table.rows().empty()) throw Error(ErrorKind::MalformedRow, table.source() + ": no bins");
  const double width = 2.0 * table.number(table.rows().front(), mid_col);
  if (!(width > 0.0)) throw Error(ErrorKind::MalformedRow, table.source() + ": first midpoint must be positive");
  std::vector<double> edges{0.0};
  std::vector<double> probs;
  std::vector<std::uint64_t> pairs;
  for (const auto& row : table.rows()) {
    edges.push_back(static_cast<double>(edges.size()) * width);
    const double count = table.number(row, n_col);
    if (!(count >= 0.0) || count != std::floor(count)) table.fail(row, "pair_count must be a count");
    pairs.push_back(static_cast<std::uint64_t>(count));
    probs.push_back(table.optional_number(row, p_col).value_or(0.0));
  }
  return DecayCurve(std::move(edges), std::move(probs), std::move(pairs));
}

// ---------------------------------------------------------------------------
// Tables for plotting.

inline std::string profile_csv(const std::vector<ProfileRow>& rows) {
  auto p = [](const SegregationReport& r) { return r.p_value ? num(*r.p_value) : std::string{}; };
  std::ostringstream out;
  out << "k,s_g,s_d,excluded_digital,p_g,p_d\n";
  for (const auto& row : rows) {
    const auto excluded = std::get<std::uint64_t>(row.digital.settings.at("schools_excluded"));
    out << row.k << ',' << num(row.geographic.value) << ',' << num(row.digital.value) << ',' << excluded << ','
        << p(row.geographic) << ',' << p(row.digital) << '\n';
  }
  return out.str();
}

inline std::string null_distribution_csv(const std::vector<double>& values) {
  std::ostringstream out;
  out << "s_d\n";
  for (double v : values) out << num(v) << '\n';
  return out.str();
}

/// School score against geographic and digital neighbor means; schools
/// without a full digital neighbor set get a blank digital column.
inline std::string neighbor_scatter_csv(const NeighborTable& geographic, const NeighborTable& digital) {
  std::unordered_map<std::string, double> digital_mean;
  for (std::size_t i = 0; i < digital.ids.size(); ++i) digital_mean.emplace(digital.ids[i], digital.neighbor_means[i]);
  std::ostringstream out;
  out << "school_id,score,geographic_neighbor_mean,digital_neighbor_mean\n";
  for (std::size_t i = 0; i < geographic.ids.size(); ++i) {
    auto it = digital_mean.find(geographic.ids[i]);
    out << csv::escape(geographic.ids[i]) << ',' << num(geographic.scores[i]) << ','
        << num(geographic.neighbor_means[i]) << ',' << (it == digital_mean.end() ? std::string{} : num(it->second))
        << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Ingest schemas, used by the synthetic generator.

inline std::string schools_csv(const Roster& roster) {
  std::ostringstream out;
  out << "school_id,latitude,longitude,score\n";
  for (const auto& s : roster) {
    out << csv::escape(s.id) << ',' << num(s.location.latitude) << ',' << num(s.location.longitude) << ','
        << num(s.score) << '\n';
  }
  return out.str();
}

inline std::string students_csv(const StudentGraph& graph) {
  std::ostringstream out;
  out << "student_id,school_id\n";
  for (const auto& [student, school] : graph.assignment()) {
    out << csv::escape(student) << ',' << csv::escape(school) << '\n';
  }
  return out.str();
}

inline std::string edges_csv(const StudentGraph& graph) {
  std::ostringstream out;
  out << "student_id_a,student_id_b\n";
  for (const auto& [a, b] : graph.edges()) out << csv::escape(a) << ',' << csv::escape(b) << '\n';
  return out.str();
}

/// price and area columns; areas are supplied by the caller.
inline std::string apartments_csv(const std::vector<Apartment>& apartments, const std::vector<double>& areas) {
  std::ostringstream out;
  out << "latitude,longitude,price,area\n";
  for (std::size_t i = 0; i < apartments.size(); ++i) {
    const auto& a = apartments[i];
    out << num(a.location.latitude) << ',' << num(a.location.longitude) << ','
        << num(a.price_per_sqm * areas[i]) << ',' << num(areas[i]) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const SettingValue& value) {
  return std::visit([](const auto& v) { return json(v); }, value);
}

inline json to_json(const Settings& settings) {
  json out = json::object();
  for (const auto& [key, value] : settings) out[key] = to_json(value);
  return out;
}

inline json to_json(const SegregationReport& r) {
  return json{{"statistic", r.statistic_name},
              {"value", r.value},
              {"sample_size", r.sample_size},
              {"p_value", r.p_value ? json(*r.p_value) : json(nullptr)},
              {"p_value_method", r.p_value ? json(r.p_value_method) : json(nullptr)},
              {"settings", to_json(r.settings)}};
}

inline json to_json(const FilterReport& f) {
  return json{{"input_students", f.input_students},
              {"output_students", f.output_students},
              {"input_schools", f.input_schools},
              {"output_schools", f.output_schools},
              {"input_edges", f.input_edges},
              {"output_edges", f.output_edges},
              {"schools_removed_excluded_ids", f.schools_removed_excluded_ids},
              {"schools_removed_oversize", f.schools_removed_oversize},
              {"schools_removed_missing_score", f.schools_removed_missing_score},
              {"students_removed_school_unavailable", f.students_removed_school_unavailable},
              {"students_removed_multi_school", f.students_removed_multi_school},
              {"students_removed_no_same_school_friend", f.students_removed_no_same_school_friend},
              {"edges_dropped_dangling", f.edges_dropped_dangling},
              {"edges_dropped_removed_endpoint", f.edges_dropped_removed_endpoint},
              {"fixed_point_iterations", f.fixed_point_iterations}};
}

inline json to_json(const PowerLawFit& fit) {
  return json{{"exponent", fit.exponent},
              {"prefactor", fit.prefactor},
              {"d_min_km", fit.d_min_km},
              {"bins_used", fit.bins_used},
              {"zero_probability_bins_excluded", fit.zero_probability_bins_excluded}};
}

inline json to_json(const NullModelResult& r) {
  return json{{"statistic", "S_d"},
              {"k", r.k},
              {"k_extension", r.k_extension},
              {"observed", r.observed},
              {"observed_sample_size", r.observed_sample_size},
              {"simulated_mean", r.simulated_mean},
              {"simulated_sd", r.simulated_sd},
              {"simulated_max", r.simulated_max},
              {"simulations", r.simulations},
              {"discarded", r.discarded},
              {"uncovered_pairs", r.uncovered_pairs},
              {"empirical_p", r.empirical_p},
              {"p_value_method", "monte-carlo null, one-sided, (1 + #{sim >= observed}) / (n + 1)"},
              {"seed", r.seed}};
}

inline json to_json(const SynthConfig& c) {
  return json{{"n_schools", c.n_schools},
              {"city_radius_km", c.city_radius_km},
              {"p0", c.decay_prefactor},
              {"alpha", c.decay_exponent},
              {"d0_km", c.plateau_distance_km},
              {"homophily", c.homophily_scale},
              {"degree_boost", c.degree_boost},
              {"score_mean", c.score_mean},
              {"score_sd", c.score_sd},
              {"gradient", c.spatial_score_gradient},
              {"weight_extra_success", c.weight_extra_success},
              {"students_per_school", c.students_per_school},
              {"center_latitude", c.center.latitude},
              {"center_longitude", c.center.longitude},
              {"seed", c.seed}};
}

}  // namespace geoseg::io
