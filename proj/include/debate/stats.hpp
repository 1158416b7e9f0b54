#pragma once

// Paired nonparametric inference: percentile bootstrap, sign-flip permutation
// test and Holm-Bonferroni step-down adjustment.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "debate/random.hpp"

namespace debate {

struct PairedSample {
  std::vector<std::pair<std::string, int>> labels;  // (event_id, seed_index)
  std::vector<double> values_a;
  std::vector<double> values_b;

  void validate() const {
    if (values_a.size() != values_b.size() || labels.size() != values_a.size())
      throw std::invalid_argument("paired sample: length mismatch");
    std::set<std::pair<std::string, int>> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size()) throw std::invalid_argument("paired sample: duplicate labels");
  }

  std::size_t size() const { return values_a.size(); }

  std::vector<double> differences() const {
    std::vector<double> d(values_a.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = values_a[i] - values_b[i];
    return d;
  }
};

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean of empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Type-7 (linear interpolation) quantile of sorted data.
inline double sorted_quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct Interval {
  double low = 0;
  double high = 0;
};

inline constexpr int kDefaultResamples = 10000;

/// Percentile bootstrap interval for the mean.
inline Interval bootstrap_ci(const std::vector<double>& values, double level, int resamples,
                             RandomStream& rng) {
  if (values.empty()) throw std::invalid_argument("bootstrap_ci: empty values");
  if (!(level > 0 && level < 1)) throw std::invalid_argument("bootstrap_ci: level must be in (0,1)");
  if (resamples < 1000) throw std::invalid_argument("bootstrap_ci: need at least 1000 resamples");
  const auto n = values.size();
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (auto& m : means) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += values[rng.below(n)];
    m = s / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double alpha = (1.0 - level) / 2.0;
  Interval ci{sorted_quantile(means, alpha), sorted_quantile(means, 1.0 - alpha)};
  // Resampled means of a constant sample can differ in the last ulp.
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  ci.low = std::clamp(ci.low, *mn, *mx);
  ci.high = std::clamp(ci.high, *mn, *mx);
  return ci;
}

inline constexpr std::size_t kExactPermutationLimit = 20;

/// Two-sided sign-flip permutation test on the mean paired difference.
/// n <= exact_limit: all 2^n flips are enumerated and p = #{|T*| >= |T|} / 2^n.
/// Otherwise `resamples` random flips with p = (#{|T*| >= |T|} + 1) / (M + 1).
inline double paired_permutation_test(const PairedSample& sample, int resamples, RandomStream& rng,
                                      std::size_t exact_limit = kExactPermutationLimit) {
  sample.validate();
  const auto d = sample.differences();
  const std::size_t n = d.size();
  if (n == 0) throw std::invalid_argument("paired_permutation_test: empty sample");
  if (n > 62 && exact_limit > 62) exact_limit = 62;

  // Compare sums (the 1/n factor is common). The tolerance absorbs summation-order error.
  const double observed = std::abs(std::accumulate(d.begin(), d.end(), 0.0));
  double scale = 0;
  for (double x : d) scale += std::abs(x);
  const double threshold = observed - 1e-9 * std::max(scale, 1e-300);

  if (n <= exact_limit) {
    const std::uint64_t total = std::uint64_t{1} << n;
    std::uint64_t hits = 0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) s += (mask >> i & 1U) ? -d[i] : d[i];
      hits += std::abs(s) >= threshold ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(total);
  }

  if (resamples < 1) throw std::invalid_argument("paired_permutation_test: resamples must be >= 1");
  std::uint64_t hits = 0;
  for (int m = 0; m < resamples; ++m) {
    double s = 0;
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 64 == 0) bits = rng.next_u64();
      s += (bits >> (i % 64) & 1U) ? -d[i] : d[i];
    }
    hits += std::abs(s) >= threshold ? 1 : 0;
  }
  return static_cast<double>(hits + 1) / static_cast<double>(resamples + 1);
}

/// Holm-Bonferroni adjusted p-values, returned in input order.
inline std::vector<double> holm_bonferroni(const std::vector<double>& p) {
  for (double x : p)
    if (!(x > 0 && x <= 1)) throw std::invalid_argument("holm_bonferroni: p-value outside (0,1]");
  const std::size_t m = p.size();
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return p[a] < p[b]; });
  std::vector<double> adj(m);
  double running = 0;
  for (std::size_t k = 0; k < m; ++k) {
    running = std::max(running, std::min(1.0, p[idx[k]] * static_cast<double>(m - k)));
    adj[idx[k]] = running;
  }
  return adj;
}

}  // namespace debate
