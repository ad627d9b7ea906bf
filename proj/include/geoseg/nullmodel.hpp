#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "geoseg/decay.hpp"
#include "geoseg/error.hpp"
#include "geoseg/geo.hpp"
#include "geoseg/parallel.hpp"
#include "geoseg/random.hpp"
#include "geoseg/segregation.hpp"
#include "geoseg/stats.hpp"
#include "geoseg/types.hpp"

namespace geoseg {

/// What to do with a pair whose distance has no defined curve probability.
enum class UncoveredPolicy { Zero, ClampToLastBin, Fail };

/// Pairs grouped by distance bin. Each sample draws every pair
/// independently with its bin probability, visiting only the successes via
/// geometric skips.
class NullGraphSampler {
 public:
  struct Group {
    std::size_t bin = 0;
    double probability = 0.0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  };

  NullGraphSampler(const DecayCurve& curve, const DistanceMatrix& dm, UncoveredPolicy policy = UncoveredPolicy::Zero)
      : ids_(dm.ids()) {
    std::optional<std::size_t> last_defined;
    for (std::size_t m = 0; m < curve.bin_count(); ++m) {
      if (curve.defined(m)) last_defined = m;
    }
    std::vector<Group> by_bin(curve.bin_count());
    for (std::size_t m = 0; m < curve.bin_count(); ++m) {
      by_bin[m].bin = m;
      by_bin[m].probability = curve.defined(m) ? curve.probabilities()[m] : 0.0;
    }
    const std::size_t n = dm.size();
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = k + 1; l < n; ++l) {
        auto m = curve.bin_of(dm(k, l));
        if (!m || !curve.defined(*m)) {
          ++uncovered_;
          if (policy == UncoveredPolicy::Fail) {
            throw Error(ErrorKind::UncoveredDistance, "distance " + std::to_string(dm(k, l)) + " km between " +
                                                          ids_[k] + " and " + ids_[l]);
          }
          if (policy == UncoveredPolicy::Zero || !last_defined) continue;
          m = *last_defined;
        }
        by_bin[*m].pairs.emplace_back(static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(l));
      }
    }
    for (auto& group : by_bin) {
      expected_edges_ += group.probability * static_cast<double>(group.pairs.size());
      if (!group.pairs.empty()) groups_.push_back(std::move(group));
    }
  }

  std::size_t school_count() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<Group>& groups() const noexcept { return groups_; }
  std::size_t uncovered_pairs() const noexcept { return uncovered_; }
  double expected_edges() const noexcept { return expected_edges_; }

  /// Calls on_edge(group_index, a, b) for every sampled tie, a < b.
  template <typename OnEdge>
  void sample(std::uint64_t seed, OnEdge&& on_edge) const {
    std::mt19937_64 rng(seed);
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      const auto& group = groups_[g];
      const auto count = static_cast<std::int64_t>(group.pairs.size());
      if (group.probability <= 0.0) continue;
      if (group.probability >= 1.0) {
        for (const auto& [a, b] : group.pairs) on_edge(g, a, b);
        continue;
      }
      std::geometric_distribution<std::int64_t> skip(group.probability);
      for (std::int64_t pos = skip(rng); pos < count; pos += 1 + skip(rng)) {
        const auto& [a, b] = group.pairs[static_cast<std::size_t>(pos)];
        on_edge(g, a, b);
      }
    }
  }

 private:
  std::vector<std::string> ids_;
  std::vector<Group> groups_;
  std::size_t uncovered_ = 0;
  double expected_edges_ = 0.0;
};

inline SchoolNetwork generate_null_graph(const NullGraphSampler& sampler, std::uint64_t seed) {
  const std::size_t n = sampler.school_count();
  std::vector<std::uint32_t> w(n * n, 0);
  sampler.sample(seed, [&](std::size_t, std::uint32_t a, std::uint32_t b) {
    w[a * n + b] = 1;
    w[b * n + a] = 1;
  });
  return SchoolNetwork(sampler.ids(), std::move(w), NetworkKind::Binary);
}

/// Binary random graph where each pair is tied with the curve probability of
/// its distance bin.
inline SchoolNetwork generate_null_graph(const DecayCurve& curve, const DistanceMatrix& dm, std::uint64_t seed,
                                         UncoveredPolicy policy = UncoveredPolicy::Zero) {
  return generate_null_graph(NullGraphSampler(curve, dm, policy), seed);
}

/// S_d(k) of one sampled null graph, or nullopt when fewer than 3 schools
/// have k ties (or the correlation is undefined). Gives exactly
/// digital_segregation(roster, generate_null_graph(sampler, seed), k, seed).
inline std::optional<double> simulate_null_s_d(const NullGraphSampler& sampler, const Roster& roster, std::size_t k,
                                               std::uint64_t seed) {
  const std::size_t n = sampler.school_count();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<std::uint32_t> deg(n, 0);
  sampler.sample(seed, [&](std::size_t, std::uint32_t a, std::uint32_t b) {
    edges.emplace_back(a, b);
    ++deg[a];
    ++deg[b];
  });
  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + deg[i];
  std::vector<std::uint32_t> adj(offset[n]);
  std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
  for (const auto& [a, b] : edges) {
    adj[fill[a]++] = b;
    adj[fill[b]++] = a;
  }

  std::vector<double> own;
  std::vector<double> means;
  for (std::size_t i = 0; i < n; ++i) {
    if (deg[i] < k) continue;
    auto first = adj.begin() + static_cast<std::ptrdiff_t>(offset[i]);
    auto last = adj.begin() + static_cast<std::ptrdiff_t>(offset[i + 1]);
    std::sort(first, last);
    SplitMix64 rng(derive_seed(seed, roster[i].id));
    std::shuffle(first, last, rng);
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) sum += roster[*(first + static_cast<std::ptrdiff_t>(j))].score;
    own.push_back(roster[i].score);
    means.push_back(sum / static_cast<double>(k));
  }
  if (own.size() < 3) return std::nullopt;
  try {
    return pearson(own, means);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ZeroVariance) return std::nullopt;
    throw;
  }
}

struct NullModelOptions {
  UncoveredPolicy uncovered = UncoveredPolicy::Zero;
  std::size_t max_attempts_per_simulation = 20;
  std::size_t threads = default_threads();
};

struct NullModelResult {
  double observed = 0.0;
  double simulated_mean = 0.0;
  double simulated_sd = 0.0;
  double simulated_max = 0.0;
  std::size_t simulations = 0;
  double empirical_p = 1.0;
  std::uint64_t seed = 0;
  std::size_t k = 1;
  std::size_t discarded = 0;
  std::size_t uncovered_pairs = 0;
  std::size_t observed_sample_size = 0;
  /// The null is defined for k = 1; other k are an extension.
  bool k_extension = false;
  std::vector<double> values;
};

/// Monte Carlo null for S_d(k): observed S_d(k) on the real network against
/// S_d(k) on geography-preserving random graphs. Simulation i draws from a
/// seed derived from (seed, i), so results do not depend on thread count.
inline NullModelResult null_distribution_s_d(const Roster& roster, const DistanceMatrix& dm,
                                             const SchoolNetwork& observed_network, const DecayCurve& curve,
                                             std::size_t k, std::size_t simulations, std::uint64_t seed,
                                             const NullModelOptions& options = {}) {
  if (simulations < 100) throw Error(ErrorKind::InvalidValue, "need at least 100 simulations");
  detail::require_same_ids(roster, dm.ids(), "distance matrix");

  NullModelResult result;
  result.seed = seed;
  result.k = k;
  result.k_extension = k != 1;
  result.simulations = simulations;
  const auto observed = digital_segregation(roster, observed_network, k, seed, {0, options.threads});
  result.observed = observed.value;
  result.observed_sample_size = observed.sample_size;

  const NullGraphSampler sampler(curve, dm, options.uncovered);
  result.uncovered_pairs = sampler.uncovered_pairs();

  std::vector<double> values(simulations, 0.0);
  std::vector<std::size_t> discards(simulations, 0);
  std::vector<char> exhausted(simulations, 0);
  parallel_for(simulations, options.threads, [&](std::size_t i) {
    const std::uint64_t sim_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    for (std::size_t attempt = 0; attempt < options.max_attempts_per_simulation; ++attempt) {
      const std::uint64_t attempt_seed = attempt == 0 ? sim_seed : derive_seed(sim_seed, attempt);
      if (auto value = simulate_null_s_d(sampler, roster, k, attempt_seed)) {
        values[i] = *value;
        return;
      }
      ++discards[i];
    }
    exhausted[i] = 1;
  });

  for (auto d : discards) result.discarded += d;
  const bool any_exhausted = std::any_of(exhausted.begin(), exhausted.end(), [](char e) { return e != 0; });
  if (any_exhausted || result.discarded * 2 > simulations) {
    throw Error(ErrorKind::DegenerateNull, std::to_string(result.discarded) + " of " + std::to_string(simulations) +
                                               " simulations discarded");
  }

  double sum = 0.0;
  for (double v : values) sum += v;
  result.simulated_mean = sum / static_cast<double>(simulations);
  double ss = 0.0;
  for (double v : values) ss += (v - result.simulated_mean) * (v - result.simulated_mean);
  result.simulated_sd = simulations > 1 ? std::sqrt(ss / static_cast<double>(simulations - 1)) : 0.0;
  result.simulated_max = *std::max_element(values.begin(), values.end());
  const auto at_least = static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [&](double v) { return v >= result.observed; }));
  result.empirical_p = static_cast<double>(1 + at_least) / static_cast<double>(simulations + 1);
  result.values = std::move(values);
  return result;
}

}  // namespace geoseg
