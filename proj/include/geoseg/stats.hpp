#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "geoseg/error.hpp"
#include "geoseg/types.hpp"

namespace geoseg {

namespace detail {

inline void check_correlation_inputs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()) + " values");
  }
  if (x.size() < 3) throw Error(ErrorKind::TooFewSamples, "need at least 3 paired values");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw Error(ErrorKind::InvalidValue, "non-finite value in correlation input");
    }
  }
}

inline std::vector<double> centered(std::span<const double> v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [mean](double value) { return value - mean; });
  return out;
}

inline double sum_of_squares(const std::vector<double>& v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

}  // namespace detail

/// Sample Pearson correlation, clamped to [-1, 1].
inline double pearson(std::span<const double> x, std::span<const double> y) {
  detail::check_correlation_inputs(x, y);
  const auto cx = detail::centered(x);
  const auto cy = detail::centered(y);
  const double sxx = detail::sum_of_squares(cx);
  const double syy = detail::sum_of_squares(cy);
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::ZeroVariance, "constant input to pearson");
  const double sxy = std::inner_product(cx.begin(), cx.end(), cy.begin(), 0.0);
  return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

/// Two-sided permutation p-value for the Pearson correlation, permuting y.
/// Returns (1 + #{|r_perm| >= |r_obs|}) / (permutations + 1).
inline double permutation_p_value(std::span<const double> x, std::span<const double> y,
                                  std::size_t permutations, std::uint64_t seed) {
  if (permutations < 100) throw Error(ErrorKind::InvalidValue, "need at least 100 permutations");
  const double observed = std::abs(pearson(x, y));

  // Centering x makes sum(cx * y) equal to the covariance numerator for any
  // ordering of y, and the y variance is permutation invariant.
  const auto cx = detail::centered(x);
  auto cy = detail::centered(y);
  const double norm = std::sqrt(detail::sum_of_squares(cx)) * std::sqrt(detail::sum_of_squares(cy));

  // Floating-point slack so exact ties (e.g. |r| = 1) still count.
  constexpr double kTieSlack = 1e-12;
  std::mt19937_64 rng(seed);
  std::size_t extreme = 0;
  for (std::size_t p = 0; p < permutations; ++p) {
    std::shuffle(cy.begin(), cy.end(), rng);
    const double r = std::inner_product(cx.begin(), cx.end(), cy.begin(), 0.0) / norm;
    if (std::abs(r) >= observed - kTieSlack) ++extreme;
  }
  return static_cast<double>(1 + extreme) / static_cast<double>(permutations + 1);
}

/// permutations == 0 skips the p-value.
struct PermutationOptions {
  std::size_t permutations = 999;
  std::uint64_t seed = 0;
};

/// Pearson report with an optional permutation p-value. The permutation
/// count and seed are recorded in the settings.
inline SegregationReport correlation_report(std::string name, std::span<const double> x,
                                            std::span<const double> y, const PermutationOptions& options,
                                            Settings settings) {
  const double r = pearson(x, y);
  std::optional<double> p;
  if (options.permutations > 0) p = permutation_p_value(x, y, options.permutations, options.seed);
  settings["permutations"] = static_cast<std::uint64_t>(options.permutations);
  settings["permutation_seed"] = options.seed;
  return SegregationReport(std::move(name), r, x.size(), p, std::move(settings));
}

}  // namespace geoseg
