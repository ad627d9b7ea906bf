#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "geoseg/error.hpp"
#include "geoseg/parallel.hpp"
#include "geoseg/ranking.hpp"
#include "geoseg/stats.hpp"
#include "geoseg/types.hpp"

namespace geoseg {

inline constexpr double kEarthRadiusKm = 6371.0;

/// Great-circle distance in km.
inline double haversine(const GeoPoint& a, const GeoPoint& b) {
  constexpr double to_rad = std::numbers::pi / 180.0;
  const double phi1 = a.latitude * to_rad;
  const double phi2 = b.latitude * to_rad;
  const double dphi = phi2 - phi1;
  const double dlambda = (b.longitude - a.longitude) * to_rad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = std::clamp(s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

/// Symmetric pairwise distances (km) with zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::vector<std::string> ids, std::vector<double> distances)
      : ids_(std::move(ids)), d_(std::move(distances)) {
    if (d_.size() != ids_.size() * ids_.size()) throw Error(ErrorKind::LengthMismatch, "distance matrix shape");
  }

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * ids_.size() + j]; }
  const std::vector<double>& data() const noexcept { return d_; }

 private:
  std::vector<std::string> ids_;
  std::vector<double> d_;
};

inline DistanceMatrix school_distance_matrix(const Roster& roster, std::size_t threads = default_threads()) {
  const std::size_t n = roster.size();
  if (n < 2) throw Error(ErrorKind::TooFewSchools, "need at least 2 schools, got " + std::to_string(n));
  std::vector<double> d(n * n, 0.0);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) d[i * n + j] = haversine(roster[i].location, roster[j].location);
    }
  });
  // Mirror the upper triangle so symmetry is exact regardless of rounding.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[j * n + i] = d[i * n + j];
  }
  return DistanceMatrix(roster.ids(), std::move(d));
}

namespace detail {

inline std::vector<std::uint32_t> geographic_neighbor_indices(const DistanceMatrix& dm, std::size_t i, std::size_t k,
                                                              std::uint64_t seed) {
  const std::size_t n = dm.size();
  if (k < 1 || k + 1 > n) {
    throw Error(ErrorKind::KOutOfRange, "k=" + std::to_string(k) + " with " + std::to_string(n) + " schools");
  }
  std::vector<std::uint32_t> candidates;
  candidates.reserve(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) candidates.push_back(static_cast<std::uint32_t>(j));
  }
  return ranked_prefix(std::move(candidates), k, seed, dm.ids()[i],
                       [&](std::uint32_t a, std::uint32_t b) { return dm(i, a) < dm(i, b); });
}

}  // namespace detail

/// The k nearest other schools; exact distance ties resolved by a seeded
/// uniform draw.
inline std::vector<std::string> geographic_neighbors(const DistanceMatrix& dm, std::size_t i, std::size_t k,
                                                     std::uint64_t seed) {
  if (i >= dm.size()) throw Error(ErrorKind::UnknownSchoolId, "school index " + std::to_string(i));
  std::vector<std::string> out;
  for (auto j : detail::geographic_neighbor_indices(dm, i, k, seed)) out.push_back(dm.ids()[j]);
  return out;
}

/// Correlation of school score with mean price per sqm of apartments strictly
/// within radius_km. Schools with no apartment in range are left out and
/// counted in settings["schools_excluded"].
inline SegregationReport neighborhood_affluence_segregation(const Roster& roster,
                                                            const std::vector<Apartment>& apartments,
                                                            double radius_km, const PermutationOptions& options = {},
                                                            std::size_t threads = default_threads()) {
  if (!(radius_km > 0.0)) throw Error(ErrorKind::InvalidValue, "radius must be positive");
  const std::size_t n = roster.size();
  std::vector<double> mean_price(n, std::nan(""));
  parallel_for(n, threads, [&](std::size_t i) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& apt : apartments) {
      if (haversine(roster[i].location, apt.location) < radius_km) {
        sum += apt.price_per_sqm;
        ++count;
      }
    }
    if (count > 0) mean_price[i] = sum / static_cast<double>(count);
  });
  std::vector<double> scores;
  std::vector<double> prices;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(mean_price[i])) continue;
    scores.push_back(roster[i].score);
    prices.push_back(mean_price[i]);
  }
  if (scores.size() < 3) {
    throw Error(ErrorKind::TooFewSamples, std::to_string(scores.size()) + " schools have apartments within " +
                                              std::to_string(radius_km) + " km");
  }
  Settings settings{{"radius_km", radius_km},
                    {"schools_excluded", static_cast<std::uint64_t>(n - scores.size())},
                    {"apartments", static_cast<std::uint64_t>(apartments.size())}};
  return correlation_report("S_n", scores, prices, options, std::move(settings));
}

inline SegregationReport center_distance_correlation(const Roster& roster, const GeoPoint& center,
                                                     const PermutationOptions& options = {}) {
  if (roster.size() < 3) throw Error(ErrorKind::TooFewSamples, "need at least 3 schools");
  std::vector<double> scores = roster.scores();
  std::vector<double> distances;
  distances.reserve(roster.size());
  for (const auto& school : roster) distances.push_back(haversine(school.location, center));
  Settings settings{{"center_latitude", center.latitude}, {"center_longitude", center.longitude}};
  return correlation_report("center_distance", scores, distances, options, std::move(settings));
}

}  // namespace geoseg
