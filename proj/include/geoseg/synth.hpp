#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "geoseg/error.hpp"
#include "geoseg/geo.hpp"
#include "geoseg/random.hpp"
#include "geoseg/types.hpp"

namespace geoseg {

struct SynthConfig {
  std::size_t n_schools = 600;
  double city_radius_km = 15.0;
  double decay_prefactor = 0.75;
  double decay_exponent = -0.62;
  double plateau_distance_km = 1.0;
  double homophily_scale = 0.0;  // score units; 0 disables
  double degree_boost = 0.0;     // 0 disables
  double score_mean = 65.0;
  double score_sd = 8.0;
  double spatial_score_gradient = 0.0;  // score units per km east; 0 disables
  double weight_extra_success = 0.6;    // geometric parameter for extra ties per linked pair
  std::size_t students_per_school = 6;
  GeoPoint center{59.9343, 30.3351};
  std::uint64_t seed = 1;

  void validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); };
    if (n_schools < 10) fail("n_schools must be at least 10");
    if (!(city_radius_km > 0.0)) fail("city radius must be positive");
    if (!(decay_prefactor > 0.0 && decay_prefactor <= 1.0)) fail("decay prefactor must be in (0, 1]");
    if (!(decay_exponent <= 0.0)) fail("decay exponent must be <= 0");
    if (!(plateau_distance_km > 0.0)) fail("plateau distance must be positive");
    if (!(homophily_scale >= 0.0)) fail("homophily scale must be >= 0");
    if (!(degree_boost >= 0.0)) fail("degree boost must be >= 0");
    if (!(score_sd > 0.0)) fail("score sd must be positive");
    if (!std::isfinite(score_mean) || !std::isfinite(spatial_score_gradient)) fail("non-finite score parameters");
    if (!(weight_extra_success > 0.0 && weight_extra_success <= 1.0)) fail("weight parameter must be in (0, 1]");
    if (students_per_school < 2) fail("need at least 2 students per school");
  }
};

struct SynthGroundTruth {
  SynthConfig config;
  std::string kernel =
      "clamp(p0*(max(d,d0)/d0)^alpha * exp(-|Ui-Uj|/h) * (1 + b*(Ui+Uj-2*mean)/sd), 0, 1)";
  double expected_ties = 0.0;
  std::size_t realized_ties = 0;
  std::vector<double> x_km;  // east offset from center
  std::vector<double> y_km;  // north offset from center
};

struct SynthCity {
  Roster roster;
  SchoolNetwork network;
  SynthGroundTruth truth;
};

namespace detail {

inline constexpr double kKmPerDegree = kEarthRadiusKm * std::numbers::pi / 180.0;

inline GeoPoint offset_point(const GeoPoint& center, double x_km, double y_km) {
  const double lat = center.latitude + y_km / kKmPerDegree;
  const double lon = center.longitude + x_km / (kKmPerDegree * std::cos(center.latitude * std::numbers::pi / 180.0));
  return GeoPoint(lat, lon);
}

template <typename Rng>
std::pair<double, double> uniform_in_disc(Rng& rng, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double theta = 2.0 * std::numbers::pi * unit(rng);
  return {r * std::cos(theta), r * std::sin(theta)};
}

inline std::string school_id(std::size_t i) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "school_%04zu", i);
  return buffer;
}

}  // namespace detail

/// Planted tie probability for a pair at distance d with scores ui, uj.
inline double planted_tie_probability(const SynthConfig& cfg, double d, double ui, double uj) {
  double p = cfg.decay_prefactor *
             std::pow(std::max(d, cfg.plateau_distance_km) / cfg.plateau_distance_km, cfg.decay_exponent);
  if (cfg.homophily_scale > 0.0) p *= std::exp(-std::abs(ui - uj) / cfg.homophily_scale);
  if (cfg.degree_boost > 0.0) p *= 1.0 + cfg.degree_boost * (ui + uj - 2.0 * cfg.score_mean) / cfg.score_sd;
  return std::clamp(p, 0.0, 1.0);
}

/// Schools uniform in a disc, scores normal plus an optional east-west
/// gradient, ties drawn independently from the planted kernel. Linked pairs
/// get weight 1 + Geometric(weight_extra_success).
inline SynthCity generate_city(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(derive_seed(cfg.seed, "schools"));
  std::normal_distribution<double> score_noise(cfg.score_mean, cfg.score_sd);

  SynthGroundTruth truth;
  truth.config = cfg;
  std::vector<School> schools;
  schools.reserve(cfg.n_schools);
  for (std::size_t i = 0; i < cfg.n_schools; ++i) {
    const auto [x, y] = detail::uniform_in_disc(rng, cfg.city_radius_km);
    const double score = std::max(0.0, score_noise(rng) + cfg.spatial_score_gradient * x);
    truth.x_km.push_back(x);
    truth.y_km.push_back(y);
    schools.emplace_back(detail::school_id(i), detail::offset_point(cfg.center, x, y), score);
  }
  Roster roster(std::move(schools));
  const auto dm = school_distance_matrix(roster, 1);

  const std::size_t n = roster.size();
  const auto max_weight = static_cast<std::uint32_t>(cfg.students_per_school * cfg.students_per_school);
  std::mt19937_64 tie_rng(derive_seed(cfg.seed, "ties"));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::geometric_distribution<std::uint32_t> extra(cfg.weight_extra_success);
  std::vector<std::uint32_t> w(n * n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      const double p = planted_tie_probability(cfg, dm(k, l), roster[k].score, roster[l].score);
      truth.expected_ties += p;
      if (unit(tie_rng) < p) {
        const auto weight = std::min(max_weight, 1u + extra(tie_rng));
        w[k * n + l] = weight;
        w[l * n + k] = weight;
        ++truth.realized_ties;
      }
    }
  }
  SchoolNetwork network(roster.ids(), std::move(w), NetworkKind::RawCount);
  return {std::move(roster), std::move(network), std::move(truth)};
}

struct ApartmentField {
  double coupling = 0.0;  // price response to the nearest school's standardized score
  double noise = 0.1;     // relative price noise sd
  double base_price = 150000.0;
};

/// Apartments uniform in the city disc. Price per sqm follows the nearest
/// school's standardized score: base * (1 + coupling * z) + noise * base * N(0,1),
/// floored at 5% of base.
inline std::vector<Apartment> generate_apartments(const SynthCity& city, std::size_t n_apartments,
                                                  const ApartmentField& field, std::uint64_t seed) {
  if (n_apartments < 1) throw Error(ErrorKind::InvalidConfig, "need at least 1 apartment");
  if (!(field.base_price > 0.0) || !(field.noise >= 0.0)) throw Error(ErrorKind::InvalidConfig, "bad price field");
  const auto& cfg = city.truth.config;
  const auto scores = city.roster.scores();
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= static_cast<double>(scores.size());
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  const double sd = std::sqrt(var / static_cast<double>(scores.size() - 1));

  std::mt19937_64 rng(derive_seed(seed, "apartments"));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Apartment> out;
  out.reserve(n_apartments);
  for (std::size_t a = 0; a < n_apartments; ++a) {
    const auto [x, y] = detail::uniform_in_disc(rng, cfg.city_radius_km);
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double dx = city.truth.x_km[i] - x;
      const double dy = city.truth.y_km[i] - y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best) {
        best = d2;
        nearest = i;
      }
    }
    const double z = sd > 0.0 ? (scores[nearest] - mean) / sd : 0.0;
    double price = field.base_price * (1.0 + field.coupling * z);
    if (field.noise > 0.0) price += field.noise * field.base_price * gauss(rng);
    price = std::max(price, 0.05 * field.base_price);
    out.emplace_back(detail::offset_point(cfg.center, x, y), price);
  }
  return out;
}

/// Expands the school network into students and friendships that aggregate
/// back to exactly the same count network. Each school's students form a
/// chain, so every student keeps a same-school friend.
inline StudentGraph to_student_graph(const SynthCity& city) {
  const std::size_t m = city.truth.config.students_per_school;
  const auto& roster = city.roster;
  auto student = [&](std::size_t school, std::size_t idx) {
    return roster[school].id + "_s" + std::to_string(idx);
  };
  std::map<std::string, std::string> assignment;
  std::vector<StudentGraph::Edge> edges;
  for (std::size_t i = 0; i < roster.size(); ++i) {
    for (std::size_t s = 0; s < m; ++s) {
      assignment.emplace(student(i, s), roster[i].id);
      if (s > 0) edges.emplace_back(student(i, s - 1), student(i, s));
    }
  }
  for (const auto& pair : city.network.nonzero_pairs()) {
    // Distinct (a, b) student pairs for t < m*m, rotated per school pair.
    const std::size_t rot_a = pair.b % m;
    const std::size_t rot_b = pair.a % m;
    for (std::size_t t = 0; t < pair.weight; ++t) {
      edges.emplace_back(student(pair.a, (t % m + rot_a) % m), student(pair.b, (t / m + rot_b) % m));
    }
  }
  return StudentGraph(std::move(assignment), std::move(edges));
}

}  // namespace geoseg
