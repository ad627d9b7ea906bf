#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "geoseg/error.hpp"
#include "geoseg/geo.hpp"
#include "geoseg/network.hpp"
#include "geoseg/parallel.hpp"
#include "geoseg/ranking.hpp"
#include "geoseg/stats.hpp"
#include "geoseg/types.hpp"

namespace geoseg {

struct SegregationOptions {
  std::size_t permutations = 999;  // 0 disables p-values
  std::size_t threads = default_threads();
};

/// Per-school score against the mean score of its chosen neighbors. Only
/// schools with a full neighbor set appear.
struct NeighborTable {
  std::vector<std::string> ids;
  std::vector<double> scores;
  std::vector<double> neighbor_means;
  std::size_t excluded = 0;
};

namespace detail {

inline void require_same_ids(const Roster& roster, const std::vector<std::string>& ids, const char* what) {
  if (roster.size() != ids.size()) throw Error(ErrorKind::MismatchedIds, std::string("roster and ") + what);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (roster[i].id != ids[i]) throw Error(ErrorKind::MismatchedIds, std::string("roster and ") + what);
  }
}

/// Weight-descending order over schools with a positive tie; 1/A ordering
/// without the division.
inline std::vector<std::uint32_t> digital_neighbor_indices(const SchoolNetwork& net, std::size_t i, std::size_t k,
                                                           std::uint64_t seed) {
  if (k < 1) throw Error(ErrorKind::KOutOfRange, "k must be at least 1");
  const std::size_t n = net.size();
  std::vector<std::uint32_t> candidates;
  for (std::size_t j = 0; j < n; ++j) {
    if (net.weight(i, j) > 0) candidates.push_back(static_cast<std::uint32_t>(j));
  }
  if (candidates.size() < k) {
    throw Error(ErrorKind::InsufficientNeighbors, net.ids()[i] + " has " + std::to_string(candidates.size()) +
                                                      " tied schools, k=" + std::to_string(k));
  }
  return ranked_prefix(std::move(candidates), k, seed, net.ids()[i],
                       [&](std::uint32_t a, std::uint32_t b) { return net.weight(i, a) > net.weight(i, b); });
}

inline NeighborTable collect_table(const Roster& roster, const std::vector<std::vector<std::uint32_t>>& sets,
                                   const std::vector<bool>& eligible) {
  NeighborTable table;
  for (std::size_t i = 0; i < roster.size(); ++i) {
    if (!eligible[i]) {
      ++table.excluded;
      continue;
    }
    double sum = 0.0;
    for (auto j : sets[i]) sum += roster[j].score;
    table.ids.push_back(roster[i].id);
    table.scores.push_back(roster[i].score);
    table.neighbor_means.push_back(sum / static_cast<double>(sets[i].size()));
  }
  return table;
}

}  // namespace detail

/// The k schools with the largest weight to school i. Equal weights are
/// resolved by a seeded uniform draw; schools without a tie are unreachable.
inline std::vector<std::string> digital_neighbors(const SchoolNetwork& net, std::size_t i, std::size_t k,
                                                  std::uint64_t seed) {
  if (i >= net.size()) throw Error(ErrorKind::UnknownSchoolId, "school index " + std::to_string(i));
  std::vector<std::string> out;
  for (auto j : detail::digital_neighbor_indices(net, i, k, seed)) out.push_back(net.ids()[j]);
  return out;
}

inline NeighborTable geographic_neighbor_table(const Roster& roster, const DistanceMatrix& dm, std::size_t k,
                                               std::uint64_t seed, std::size_t threads = default_threads()) {
  detail::require_same_ids(roster, dm.ids(), "distance matrix");
  const std::size_t n = roster.size();
  if (k < 1 || k + 1 > n) throw Error(ErrorKind::KOutOfRange, "k=" + std::to_string(k));
  std::vector<std::vector<std::uint32_t>> sets(n);
  parallel_for(n, threads, [&](std::size_t i) { sets[i] = detail::geographic_neighbor_indices(dm, i, k, seed); });
  return detail::collect_table(roster, sets, std::vector<bool>(n, true));
}

inline NeighborTable digital_neighbor_table(const Roster& roster, const SchoolNetwork& net, std::size_t k,
                                            std::uint64_t seed, std::size_t threads = default_threads()) {
  detail::require_same_ids(roster, net.ids(), "network");
  if (k < 1) throw Error(ErrorKind::KOutOfRange, "k must be at least 1");
  const std::size_t n = roster.size();
  const auto deg = degrees(net);
  std::vector<bool> eligible(n);
  for (std::size_t i = 0; i < n; ++i) eligible[i] = deg[i] >= k;
  std::vector<std::vector<std::uint32_t>> sets(n);
  parallel_for(n, threads, [&](std::size_t i) {
    if (eligible[i]) sets[i] = detail::digital_neighbor_indices(net, i, k, seed);
  });
  return detail::collect_table(roster, sets, eligible);
}

/// Correlation between each school's score and the mean score of its k
/// nearest schools.
inline SegregationReport geographic_segregation(const Roster& roster, const DistanceMatrix& dm, std::size_t k,
                                                std::uint64_t seed, const SegregationOptions& options = {}) {
  if (roster.size() < 3) throw Error(ErrorKind::TooFewSamples, "need at least 3 schools");
  const auto table = geographic_neighbor_table(roster, dm, k, seed, options.threads);
  Settings settings{{"k", static_cast<std::uint64_t>(k)}, {"seed", seed}};
  return correlation_report("S_g", table.scores, table.neighbor_means, {options.permutations, seed},
                            std::move(settings));
}

/// Correlation between each school's score and the mean score of its k
/// strongest-tied schools, over schools with at least k ties.
inline SegregationReport digital_segregation(const Roster& roster, const SchoolNetwork& net, std::size_t k,
                                             std::uint64_t seed, const SegregationOptions& options = {}) {
  const auto table = digital_neighbor_table(roster, net, k, seed, options.threads);
  if (table.ids.size() < 3) {
    throw Error(ErrorKind::TooFewSamples,
                std::to_string(table.ids.size()) + " schools have at least " + std::to_string(k) + " ties");
  }
  Settings settings{{"k", static_cast<std::uint64_t>(k)},
                    {"seed", seed},
                    {"network", to_string(net.kind())},
                    {"schools_excluded", static_cast<std::uint64_t>(table.excluded)}};
  return correlation_report("S_d", table.scores, table.neighbor_means, {options.permutations, seed},
                            std::move(settings));
}

inline SegregationReport degree_outcome_correlation(const Roster& roster, const SchoolNetwork& net,
                                                    std::uint64_t seed = 0, const SegregationOptions& options = {}) {
  detail::require_same_ids(roster, net.ids(), "network");
  if (roster.size() < 3) throw Error(ErrorKind::TooFewSamples, "need at least 3 schools");
  const auto deg = degrees(net);
  std::vector<double> degree_values(deg.begin(), deg.end());
  Settings settings{{"network", to_string(net.kind())}};
  return correlation_report("degree_outcome", roster.scores(), degree_values, {options.permutations, seed},
                            std::move(settings));
}

struct ProfileRow {
  std::size_t k = 0;
  SegregationReport geographic;
  SegregationReport digital;
};

/// S_g(k) and S_d(k) over a list of k, each with the same seed as the
/// single-k operations.
inline std::vector<ProfileRow> segregation_profile(const Roster& roster, const DistanceMatrix& dm,
                                                   const SchoolNetwork& net, const std::vector<std::size_t>& k_values,
                                                   std::uint64_t seed, const SegregationOptions& options = {}) {
  std::vector<ProfileRow> rows;
  rows.reserve(k_values.size());
  for (auto k : k_values) {
    rows.push_back({k, geographic_segregation(roster, dm, k, seed, options),
                    digital_segregation(roster, net, k, seed, options)});
  }
  return rows;
}

}  // namespace geoseg
