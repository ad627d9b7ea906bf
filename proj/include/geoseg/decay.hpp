#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "geoseg/error.hpp"
#include "geoseg/geo.hpp"
#include "geoseg/types.hpp"

namespace geoseg {

namespace detail {

inline void require_same_ids(const SchoolNetwork& net, const DistanceMatrix& dm) {
  if (net.ids() != dm.ids()) throw Error(ErrorKind::MismatchedIds, "network and distance matrix differ in schools");
}

}  // namespace detail

/// Share of school pairs with a tie, per distance bin [m*w, (m+1)*w).
/// Trailing empty bins are trimmed.
inline DecayCurve tie_probability_curve(const SchoolNetwork& net, const DistanceMatrix& dm, double bin_width_km) {
  detail::require_same_ids(net, dm);
  if (!(bin_width_km > 0.0)) throw Error(ErrorKind::InvalidValue, "bin width must be positive");
  const std::size_t n = dm.size();
  double max_d = 0.0;
  for (double d : dm.data()) max_d = std::max(max_d, d);

  std::vector<double> edges{0.0};
  while (edges.back() <= max_d) edges.push_back(static_cast<double>(edges.size()) * bin_width_km);
  const std::size_t bins = edges.size() - 1;

  std::vector<std::uint64_t> pairs(bins, 0);
  std::vector<std::uint64_t> ties(bins, 0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      const double d = dm(k, l);
      const auto m = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), d) - edges.begin()) - 1;
      ++pairs[m];
      if (net.weight(k, l) > 0) ++ties[m];
    }
  }
  std::size_t used = bins;
  while (used > 0 && pairs[used - 1] == 0) --used;
  if (used == 0) throw Error(ErrorKind::TooFewSchools, "no school pairs");
  edges.resize(used + 1);
  pairs.resize(used);
  std::vector<double> prob(used, 0.0);
  for (std::size_t m = 0; m < used; ++m) {
    if (pairs[m] > 0) prob[m] = static_cast<double>(ties[m]) / static_cast<double>(pairs[m]);
  }
  return DecayCurve(std::move(edges), std::move(prob), std::move(pairs));
}

struct PowerLawFitOptions {
  /// Only bins with midpoint above d_min enter the fit. Defaults to the
  /// first bin's upper edge, which drops the short-range plateau.
  std::optional<double> d_min_km;
  std::uint64_t min_pairs_per_bin = 30;
};

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double d_min_km = 0.0;
  std::size_t bins_used = 0;
  std::size_t zero_probability_bins_excluded = 0;
};

/// Pair-count weighted least squares of log(probability) on log(midpoint).
inline PowerLawFit fit_power_law(const DecayCurve& curve, const PowerLawFitOptions& options = {}) {
  PowerLawFit fit;
  fit.d_min_km = options.d_min_km.value_or(curve.bin_count() > 0 ? curve.bin_edges()[1] : 0.0);

  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> ws;
  for (std::size_t m = 0; m < curve.bin_count(); ++m) {
    if (!(curve.midpoint(m) > fit.d_min_km)) continue;
    if (curve.pair_counts()[m] < options.min_pairs_per_bin) continue;
    const double p = curve.probabilities()[m];
    if (!(p > 0.0)) {
      ++fit.zero_probability_bins_excluded;
      continue;
    }
    xs.push_back(std::log(curve.midpoint(m)));
    ys.push_back(std::log(p));
    ws.push_back(static_cast<double>(curve.pair_counts()[m]));
  }
  if (xs.size() < 3) throw Error(ErrorKind::TooFewBins, std::to_string(xs.size()) + " eligible bins");

  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sw += ws[i];
    sx += ws[i] * xs[i];
    sy += ws[i] * ys[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += ws[i] * (xs[i] - mx) * (xs[i] - mx);
    sxy += ws[i] * (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::DegenerateFit, "all eligible midpoints equal");
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  fit.bins_used = xs.size();
  return fit;
}

}  // namespace geoseg
