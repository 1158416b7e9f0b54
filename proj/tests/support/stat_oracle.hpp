#pragma once

// Direct reference implementations of the sign-flip test and Holm's procedure.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace stat_oracle {

/// Enumerates all 2^n sign patterns; compares absolute flipped means against
/// the observed absolute mean with a relative tolerance.
inline double exact_sign_flip_p(const std::vector<double>& d) {
  const std::size_t n = d.size();
  double observed = 0, scale = 0;
  for (double x : d) observed += x, scale += std::abs(x);
  observed = std::abs(observed / static_cast<double>(n));
  scale /= static_cast<double>(n);
  long hits = 0, total = 0;
  std::vector<int> sign(n, 1);
  for (;;) {
    double m = 0;
    for (std::size_t i = 0; i < n; ++i) m += sign[i] * d[i];
    m = std::abs(m / static_cast<double>(n));
    if (m >= observed - 1e-9 * std::max(scale, 1e-300)) ++hits;
    ++total;
    std::size_t k = 0;
    while (k < n && sign[k] == -1) sign[k++] = 1;
    if (k == n) break;
    sign[k] = -1;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

inline std::vector<double> holm(const std::vector<double>& p) {
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] < p[b]; });
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    double v = 0;
    for (std::size_t j = 0; j <= k; ++j) v = std::max(v, p[order[j]] * static_cast<double>(m - j));
    out[order[k]] = std::min(1.0, v);
  }
  return out;
}

}  // namespace stat_oracle
