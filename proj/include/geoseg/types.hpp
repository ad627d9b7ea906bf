#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "geoseg/error.hpp"

namespace geoseg {

struct GeoPoint {
  double latitude = 0.0;
  double longitude = 0.0;

  GeoPoint() = default;
  GeoPoint(double lat, double lon) : latitude(lat), longitude(lon) {
    if (!std::isfinite(lat) || !std::isfinite(lon) || lat < -90.0 || lat > 90.0 || lon < -180.0 ||
        lon > 180.0) {
      throw Error(ErrorKind::CoordinateOutOfRange,
                  "(" + std::to_string(lat) + ", " + std::to_string(lon) + ")");
    }
  }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct School {
  std::string id;
  GeoPoint location;
  double score = 0.0;  // mean graduate examination score

  School() = default;
  School(std::string id_, GeoPoint location_, double score_)
      : id(std::move(id_)), location(location_), score(score_) {
    if (!std::isfinite(score) || score < 0.0) {
      throw Error(ErrorKind::InvalidValue, "school " + id + " has invalid score");
    }
  }
};

/// Ordered school list with unique ids. The order fixes matrix indices for
/// every network and distance matrix built from it.
class Roster {
 public:
  Roster() = default;
  explicit Roster(std::vector<School> schools) : schools_(std::move(schools)) {
    index_.reserve(schools_.size());
    for (std::size_t i = 0; i < schools_.size(); ++i) {
      if (!index_.emplace(schools_[i].id, i).second) {
        throw Error(ErrorKind::DuplicateSchoolId, schools_[i].id);
      }
    }
  }

  std::size_t size() const noexcept { return schools_.size(); }
  bool empty() const noexcept { return schools_.empty(); }
  const School& operator[](std::size_t i) const { return schools_[i]; }
  const std::vector<School>& schools() const noexcept { return schools_; }
  auto begin() const noexcept { return schools_.begin(); }
  auto end() const noexcept { return schools_.end(); }

  std::optional<std::size_t> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(schools_.size());
    for (const auto& s : schools_) out.push_back(s.id);
    return out;
  }

  std::vector<double> scores() const {
    std::vector<double> out;
    out.reserve(schools_.size());
    for (const auto& s : schools_) out.push_back(s.score);
    return out;
  }

 private:
  std::vector<School> schools_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Undirected friendship graph over students plus the student -> school map.
class StudentGraph {
 public:
  using Edge = std::pair<std::string, std::string>;

  StudentGraph() = default;
  StudentGraph(std::map<std::string, std::string> assignment, std::vector<Edge> edges)
      : assignment_(std::move(assignment)) {
    for (auto& [a, b] : edges) {
      if (a == b) throw Error(ErrorKind::InvalidValue, "self-loop on student " + a);
      if (!assignment_.count(a) || !assignment_.count(b)) {
        throw Error(ErrorKind::InvalidValue, "edge endpoint without school: " + a + "-" + b);
      }
      if (b < a) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
  }

  std::size_t student_count() const noexcept { return assignment_.size(); }
  const std::map<std::string, std::string>& assignment() const noexcept { return assignment_; }
  /// Unordered pairs stored with first < second, sorted, unique.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::vector<std::string> students() const {
    std::vector<std::string> out;
    out.reserve(assignment_.size());
    for (const auto& [student, school] : assignment_) out.push_back(student);
    return out;
  }

  friend bool operator==(const StudentGraph&, const StudentGraph&) = default;

 private:
  std::map<std::string, std::string> assignment_;
  std::vector<Edge> edges_;
};

enum class NetworkKind { RawCount, MinSymmetrized, Binary };

inline std::string to_string(NetworkKind kind) {
  switch (kind) {
    case NetworkKind::RawCount: return "raw-count";
    case NetworkKind::MinSymmetrized: return "min-symmetrized";
    case NetworkKind::Binary: return "binary";
  }
  return "unknown";
}

struct WeightedPair {
  std::uint32_t a;
  std::uint32_t b;
  std::uint32_t weight;
};

/// Symmetric school x school weight matrix with zero diagonal. Stored dense;
/// the nonzero upper-triangle pairs are kept alongside for sparse iteration.
class SchoolNetwork {
 public:
  SchoolNetwork() = default;
  SchoolNetwork(std::vector<std::string> ids, std::vector<std::uint32_t> weights, NetworkKind kind)
      : ids_(std::move(ids)), weights_(std::move(weights)), kind_(kind) {
    const std::size_t n = ids_.size();
    if (weights_.size() != n * n) {
      throw Error(ErrorKind::LengthMismatch, "weight matrix is not " + std::to_string(n) + "x" +
                                                 std::to_string(n));
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (weights_[k * n + k] != 0) {
        throw Error(ErrorKind::InvalidValue, "nonzero diagonal at " + ids_[k]);
      }
      for (std::size_t l = k + 1; l < n; ++l) {
        const auto w = weights_[k * n + l];
        if (w != weights_[l * n + k]) {
          throw Error(ErrorKind::InvalidValue, "asymmetric weight " + ids_[k] + "/" + ids_[l]);
        }
        if (kind_ == NetworkKind::Binary && w > 1) {
          throw Error(ErrorKind::InvalidValue, "binary network with weight > 1");
        }
        if (w > 0) {
          nonzero_.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(l), w});
        }
      }
    }
  }

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  NetworkKind kind() const noexcept { return kind_; }
  std::uint32_t weight(std::size_t k, std::size_t l) const { return weights_[k * ids_.size() + l]; }
  const std::vector<std::uint32_t>& weights() const noexcept { return weights_; }
  const std::vector<WeightedPair>& nonzero_pairs() const noexcept { return nonzero_; }

  std::size_t degree(std::size_t k) const {
    const std::size_t n = ids_.size();
    return static_cast<std::size_t>(std::count_if(weights_.begin() + static_cast<std::ptrdiff_t>(k * n),
                                                  weights_.begin() + static_cast<std::ptrdiff_t>((k + 1) * n),
                                                  [](std::uint32_t w) { return w > 0; }));
  }

  friend bool operator==(const SchoolNetwork& a, const SchoolNetwork& b) {
    return a.ids_ == b.ids_ && a.weights_ == b.weights_ && a.kind_ == b.kind_;
  }

 private:
  std::vector<std::string> ids_;
  std::vector<std::uint32_t> weights_;
  NetworkKind kind_ = NetworkKind::RawCount;
  std::vector<WeightedPair> nonzero_;
};

struct Apartment {
  GeoPoint location;
  double price_per_sqm = 0.0;  // rubles per square meter

  Apartment() = default;
  Apartment(GeoPoint location_, double price) : location(location_), price_per_sqm(price) {
    if (!std::isfinite(price) || price <= 0.0) {
      throw Error(ErrorKind::InvalidValue, "apartment price per sqm must be positive");
    }
  }
};

/// Binned tie probability versus distance. Bins are [edge[m], edge[m+1]).
/// Empty bins carry NaN probability.
class DecayCurve {
 public:
  DecayCurve() = default;
  DecayCurve(std::vector<double> bin_edges, std::vector<double> probabilities,
             std::vector<std::uint64_t> pair_counts)
      : edges_(std::move(bin_edges)), probabilities_(std::move(probabilities)), pairs_(std::move(pair_counts)) {
    if (edges_.size() < 2 || edges_.front() != 0.0) {
      throw Error(ErrorKind::InvalidValue, "bin edges must start at 0 and define at least one bin");
    }
    for (std::size_t m = 1; m < edges_.size(); ++m) {
      if (!(edges_[m] > edges_[m - 1])) throw Error(ErrorKind::InvalidValue, "bin edges not increasing");
    }
    if (probabilities_.size() != bin_count() || pairs_.size() != bin_count()) {
      throw Error(ErrorKind::LengthMismatch, "curve arrays disagree with bin count");
    }
    for (std::size_t m = 0; m < bin_count(); ++m) {
      if (pairs_[m] == 0) {
        probabilities_[m] = std::numeric_limits<double>::quiet_NaN();
      } else if (!(probabilities_[m] >= 0.0 && probabilities_[m] <= 1.0)) {
        throw Error(ErrorKind::InvalidValue, "bin probability outside [0,1]");
      }
    }
  }

  std::size_t bin_count() const noexcept { return edges_.empty() ? 0 : edges_.size() - 1; }
  const std::vector<double>& bin_edges() const noexcept { return edges_; }
  const std::vector<double>& probabilities() const noexcept { return probabilities_; }
  const std::vector<std::uint64_t>& pair_counts() const noexcept { return pairs_; }
  double midpoint(std::size_t m) const { return 0.5 * (edges_[m] + edges_[m + 1]); }
  bool defined(std::size_t m) const { return pairs_[m] > 0; }

  /// Bin containing distance d, or nullopt beyond the last edge.
  std::optional<std::size_t> bin_of(double d) const {
    if (d < 0.0 || edges_.empty() || d >= edges_.back()) return std::nullopt;
    auto it = std::upper_bound(edges_.begin(), edges_.end(), d);
    return static_cast<std::size_t>(it - edges_.begin()) - 1;
  }

  std::optional<double> fitted_exponent() const noexcept { return exponent_; }
  std::optional<double> fitted_prefactor() const noexcept { return prefactor_; }

  DecayCurve with_fit(double exponent, double prefactor) const {
    if (!(prefactor > 0.0)) throw Error(ErrorKind::InvalidValue, "prefactor must be positive");
    DecayCurve out = *this;
    out.exponent_ = exponent;
    out.prefactor_ = prefactor;
    return out;
  }

 private:
  std::vector<double> edges_;
  std::vector<double> probabilities_;
  std::vector<std::uint64_t> pairs_;
  std::optional<double> exponent_;
  std::optional<double> prefactor_;
};

using SettingValue = std::variant<std::int64_t, std::uint64_t, double, std::string, bool>;
using Settings = std::map<std::string, SettingValue>;

struct SegregationReport {
  std::string statistic_name;
  double value = 0.0;
  std::size_t sample_size = 0;
  std::optional<double> p_value;
  std::string p_value_method;  // "permutation" when present
  Settings settings;

  SegregationReport() = default;
  SegregationReport(std::string name, double value_, std::size_t n, std::optional<double> p,
                    Settings settings_)
      : statistic_name(std::move(name)), value(value_), sample_size(n), p_value(p),
        p_value_method(p ? "permutation" : ""), settings(std::move(settings_)) {
    if (!(value >= -1.0 && value <= 1.0)) throw Error(ErrorKind::InvalidValue, "correlation outside [-1,1]");
    if (sample_size < 3) throw Error(ErrorKind::TooFewSamples, statistic_name);
    if (p_value && !(*p_value > 0.0 && *p_value <= 1.0)) {
      throw Error(ErrorKind::InvalidValue, "p-value outside (0,1]");
    }
  }
};

}  // namespace geoseg
