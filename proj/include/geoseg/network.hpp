#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "geoseg/error.hpp"
#include "geoseg/types.hpp"

namespace geoseg {

struct CountNetwork {
  SchoolNetwork network;
  std::vector<std::uint64_t> intra_school_edges;  // indexed by roster order
};

struct MinSymmetrizedNetwork {
  SchoolNetwork network;
  /// directed[k * n + l]: students of school k with at least one friend in l.
  std::vector<std::uint32_t> directed;
};

namespace detail {

inline std::map<std::string, std::size_t> school_index_of_students(const StudentGraph& g, const Roster& roster) {
  std::map<std::string, std::size_t> out;
  for (const auto& [student, school] : g.assignment()) {
    auto idx = roster.find(school);
    if (!idx) throw Error(ErrorKind::UnknownSchoolId, school + " (student " + student + ")");
    out.emplace(student, *idx);
  }
  return out;
}

}  // namespace detail

/// Inter-school friendship-tie counts. Intra-school edges are tallied
/// separately and kept off the diagonal.
inline CountNetwork build_count_network(const StudentGraph& g, const Roster& roster) {
  const auto school_of = detail::school_index_of_students(g, roster);
  const std::size_t n = roster.size();
  std::vector<std::uint32_t> w(n * n, 0);
  std::vector<std::uint64_t> intra(n, 0);
  for (const auto& [a, b] : g.edges()) {
    const std::size_t k = school_of.at(a);
    const std::size_t l = school_of.at(b);
    if (k == l) {
      ++intra[k];
    } else {
      ++w[k * n + l];
      ++w[l * n + k];
    }
  }
  return {SchoolNetwork(roster.ids(), std::move(w), NetworkKind::RawCount), std::move(intra)};
}

/// Counts, per ordered school pair (k, l), students of k having a friend in
/// l, then keeps the element-wise minimum of the two directions.
inline MinSymmetrizedNetwork build_min_symmetrized_network(const StudentGraph& g, const Roster& roster) {
  const auto school_of = detail::school_index_of_students(g, roster);
  const std::size_t n = roster.size();

  // (student, other school) incidences, deduplicated per student.
  std::map<std::string, std::vector<std::size_t>> reach;
  for (const auto& [a, b] : g.edges()) {
    const std::size_t k = school_of.at(a);
    const std::size_t l = school_of.at(b);
    if (k == l) continue;
    reach[a].push_back(l);
    reach[b].push_back(k);
  }
  std::vector<std::uint32_t> directed(n * n, 0);
  for (auto& [student, schools] : reach) {
    std::sort(schools.begin(), schools.end());
    schools.erase(std::unique(schools.begin(), schools.end()), schools.end());
    const std::size_t k = school_of.at(student);
    for (auto l : schools) ++directed[k * n + l];
  }
  std::vector<std::uint32_t> w(n * n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) w[k * n + l] = std::min(directed[k * n + l], directed[l * n + k]);
  }
  return {SchoolNetwork(roster.ids(), std::move(w), NetworkKind::MinSymmetrized), std::move(directed)};
}

inline SchoolNetwork binarize(const SchoolNetwork& net) {
  std::vector<std::uint32_t> w(net.weights().size());
  std::transform(net.weights().begin(), net.weights().end(), w.begin(),
                 [](std::uint32_t x) { return x > 0 ? 1u : 0u; });
  return SchoolNetwork(net.ids(), std::move(w), NetworkKind::Binary);
}

/// Number of distinct other schools with positive weight, keyed by school id.
inline std::map<std::string, std::size_t> degree_centrality(const SchoolNetwork& net) {
  std::map<std::string, std::size_t> out;
  for (std::size_t k = 0; k < net.size(); ++k) out.emplace(net.ids()[k], net.degree(k));
  return out;
}

/// Same as degree_centrality, in matrix order.
inline std::vector<std::size_t> degrees(const SchoolNetwork& net) {
  std::vector<std::size_t> out(net.size(), 0);
  for (const auto& p : net.nonzero_pairs()) {
    ++out[p.a];
    ++out[p.b];
  }
  return out;
}

}  // namespace geoseg
