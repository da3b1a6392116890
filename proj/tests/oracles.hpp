#pragma once

// Independent reference implementations used only by tests. Each one takes
// the slow, obvious route so it shares no code path with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <span>
#include <numbers>
#include <utility>
#include <vector>

#include "mibench/classifiers.hpp"
#include "mibench/spectral.hpp"

namespace oracle {

/// (dt / T) |sum x[n] e^{-i w_k n dt}|^2 evaluated term by term, k = 0..N/2,
/// from a table of the N roots of unity.
inline std::vector<double> direct_periodogram(const std::vector<double>& x, double fs) {
  const std::size_t n = x.size();
  const double dt = 1.0 / fs;
  const double T = static_cast<double>(n) * dt;
  std::vector<long double> c(n), s(n);
  for (std::size_t m = 0; m < n; ++m) {
    const long double ph = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(m) /
                           static_cast<long double>(n);
    c[m] = std::cos(ph);
    s[m] = std::sin(ph);
  }
  std::vector<double> out(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    long double re = 0, im = 0;
    std::size_t m = 0;  // (k * t) mod n
    for (std::size_t t = 0; t < n; ++t) {
      re += x[t] * c[m];
      im -= x[t] * s[m];
      m += k;
      if (m >= n) m -= n;
    }
    out[k] = dt / T * static_cast<double>(re * re + im * im);
  }
  return out;
}

/// |LHS - RHS| / RHS for sum_{k=0}^{N-1} S(w_k) / (N dt) = (1/T) sum x^2 dt,
/// rebuilding the two-sided spectrum from the one-sided storage.
inline double parseval_relative_error(const mibench::SpectrumEstimate& s, const std::vector<double>& x,
                                      double fs) {
  const std::size_t n = x.size();
  const double dt = 1.0 / fs;
  long double two_sided = 0;
  for (std::size_t k = 0; k < n; ++k) two_sided += s.values[k <= n / 2 ? k : n - k];
  const long double lhs = two_sided / (static_cast<double>(n) * dt);
  long double energy = 0;
  for (double v : x) energy += static_cast<long double>(v) * v;
  const long double rhs = energy * dt / (static_cast<double>(n) * dt);
  return static_cast<double>(std::abs(lhs - rhs) / rhs);
}

/// Counts k with k * bin_hz inside [lo, hi] by walking every bin.
inline std::size_t count_bins_in_band(const mibench::SpectrumEstimate& s, double lo, double hi) {
  std::size_t count = 0;
  const double eps = 1e-9 * s.bin_hz;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    const double f = static_cast<double>(k) * s.bin_hz;
    if (f >= lo - eps && f <= hi + eps) ++count;
  }
  return count;
}


/// kNN by computing every Euclidean distance (with the square root) and
/// stable-sorting the whole training set.
inline std::vector<std::size_t> knn_neighbors(const mibench::LabeledSet& d, std::span<const double> x,
                                              std::size_t k) {
  std::vector<std::size_t> idx(d.size());
  std::vector<double> dist(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    idx[i] = i;
    double s = 0;
    for (std::size_t f = 0; f < x.size(); ++f) s += (d.row(i)[f] - x[f]) * (d.row(i)[f] - x[f]);
    dist[i] = std::sqrt(s);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  idx.resize(k);
  return idx;
}

inline mibench::Label knn_predict(const mibench::LabeledSet& d, std::span<const double> x, std::size_t k) {
  std::size_t left = 0;
  for (auto i : knn_neighbors(d, x, k)) left += d.label(i) == mibench::Label::Left;
  return left * 2 > k ? mibench::Label::Left : mibench::Label::Right;
}

/// Exhaustive CART: every (feature, midpoint) pair is tried by re-counting the
/// children; weighted Gini is computed in long double.
struct CartOracleNode {
  int feature = -1;
  double threshold = 0;
  std::unique_ptr<CartOracleNode> left, right;
  mibench::Label label = mibench::Label::Right;
};

inline long double gini_of(std::size_t c0, std::size_t c1) {
  const long double n = c0 + c1;
  if (n == 0) return 0;
  const long double p0 = c0 / n, p1 = c1 / n;
  return 1 - p0 * p0 - p1 * p1;
}

inline std::unique_ptr<CartOracleNode> cart_build(const mibench::LabeledSet& d, const std::vector<std::size_t>& rows,
                                                  std::size_t min_leaf) {
  auto node = std::make_unique<CartOracleNode>();
  std::size_t c[2] = {0, 0};
  for (auto r : rows) ++c[mibench::to_int(d.label(r))];
  node->label = c[1] > c[0] ? mibench::Label::Left : mibench::Label::Right;
  const long double parent = gini_of(c[0], c[1]);
  long double best = parent;
  for (std::size_t f = 0; f < d.dim(); ++f) {
    std::vector<double> vals;
    for (auto r : rows) vals.push_back(d.row(r)[f]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
      const double thr = (vals[i] + vals[i + 1]) / 2;
      std::size_t l[2] = {0, 0}, r[2] = {0, 0};
      for (auto row : rows) ++(d.row(row)[f] >= thr ? r : l)[mibench::to_int(d.label(row))];
      const std::size_t nl = l[0] + l[1], nr = r[0] + r[1];
      if (nl < min_leaf || nr < min_leaf) continue;
      const long double w = (nl * gini_of(l[0], l[1]) + nr * gini_of(r[0], r[1])) / rows.size();
      if (w < best - 1e-15L) {
        best = w;
        node->feature = static_cast<int>(f);
        node->threshold = thr;
      }
    }
  }
  if (node->feature < 0) return node;
  std::vector<std::size_t> lr, rr;
  for (auto row : rows) (d.row(row)[node->feature] >= node->threshold ? rr : lr).push_back(row);
  node->left = cart_build(d, lr, min_leaf);
  node->right = cart_build(d, rr, min_leaf);
  return node;
}

inline mibench::Label cart_predict(const CartOracleNode& n, std::span<const double> x) {
  if (n.feature < 0) return n.label;
  return x[n.feature] >= n.threshold ? cart_predict(*n.right, x) : cart_predict(*n.left, x);
}

inline std::size_t cart_leaves(const CartOracleNode& n) {
  return n.feature < 0 ? 1 : cart_leaves(*n.left) + cart_leaves(*n.right);
}

}  // namespace oracle
