// Test-only reference implementations. Deliberately naive and independent of
// the library's code paths.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "geoseg/types.hpp"

namespace oracle {

/// Textbook single-pass sums form of the Pearson coefficient.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double num = n * sxy - sx * sy;
  const long double den = std::sqrt(n * sxx - sx * sx) * std::sqrt(n * syy - sy * sy);
  return static_cast<double>(num / den);
}

/// Brute force over every ordered student pair: A, Ã and Â as nested maps
/// keyed by school index.
struct Networks {
  std::vector<std::vector<std::uint32_t>> a;
  std::vector<std::vector<std::uint32_t>> a_tilde;
  std::vector<std::vector<std::uint32_t>> a_hat;
};

inline Networks school_networks(const geoseg::StudentGraph& g, const geoseg::Roster& roster) {
  const std::size_t n = roster.size();
  const auto students = g.students();
  std::set<std::pair<std::string, std::string>> friends;
  for (const auto& [a, b] : g.edges()) {
    friends.insert({a, b});
    friends.insert({b, a});
  }
  auto school = [&](const std::string& s) { return *roster.find(g.assignment().at(s)); };
  Networks out;
  out.a.assign(n, std::vector<std::uint32_t>(n, 0));
  out.a_tilde.assign(n, std::vector<std::uint32_t>(n, 0));
  out.a_hat.assign(n, std::vector<std::uint32_t>(n, 0));
  for (const auto& i : students) {
    for (const auto& j : students) {
      if (i != j && friends.count({i, j}) && school(i) != school(j)) ++out.a[school(i)][school(j)];
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      if (k == l) continue;
      for (const auto& i : students) {
        if (school(i) != k) continue;
        bool has = false;
        for (const auto& j : students) {
          if (school(j) == l && friends.count({i, j})) has = true;
        }
        if (has) ++out.a_tilde[k][l];
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) out.a_hat[k][l] = std::min(out.a_tilde[k][l], out.a_tilde[l][k]);
  }
  return out;
}

/// Every admissible digital k-set of school i: subsets of tied schools of
/// size k such that no excluded school outweighs an included one.
inline std::vector<std::set<std::size_t>> admissible_digital_sets(const geoseg::SchoolNetwork& net, std::size_t i,
                                                                  std::size_t k) {
  std::vector<std::size_t> tied;
  for (std::size_t j = 0; j < net.size(); ++j) {
    if (net.weight(i, j) > 0) tied.push_back(j);
  }
  std::vector<std::set<std::size_t>> out;
  const std::size_t m = tied.size();
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    std::uint32_t min_in = UINT32_MAX, max_out = 0;
    std::set<std::size_t> chosen;
    for (std::size_t b = 0; b < m; ++b) {
      const auto w = net.weight(i, tied[b]);
      if (mask & (1u << b)) {
        chosen.insert(tied[b]);
        min_in = std::min(min_in, w);
      } else {
        max_out = std::max(max_out, w);
      }
    }
    if (min_in >= max_out) out.push_back(chosen);
  }
  return out;
}

}  // namespace oracle
