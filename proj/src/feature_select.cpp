#include "mibench/feature_select.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mibench {

namespace {

struct Moments {
  double mean;
  double var;  // unbiased
};

Moments moments(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, ss / (n - 1.0)};
}

}  // namespace

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw SelectionError("t-test needs at least 2 points in each sample");
  const auto ma = moments(a);
  const auto mb = moments(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = ma.var / na;
  const double vb = mb.var / nb;
  const double se2 = va + vb;

  TTestResult r;
  if (se2 == 0.0) {
    r.t = ma.mean == mb.mean ? 0.0 : std::copysign(INFINITY, ma.mean - mb.mean);
    r.p = ma.mean == mb.mean ? 1.0 : 0.0;
    r.df = na + nb - 2.0;
    return r;
  }
  r.t = (ma.mean - mb.mean) / std::sqrt(se2);
  r.df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  if (r.t == 0.0) {
    r.p = 1.0;
    return r;
  }
  const boost::math::students_t dist(r.df);
  r.p = std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))), 0.0, 1.0);
  return r;
}

FeatureMask FeatureMask::all(std::size_t dim) {
  FeatureMask m;
  m.source_dim = dim;
  m.selected.resize(dim);
  std::iota(m.selected.begin(), m.selected.end(), std::size_t{0});
  m.p_values.assign(dim, 0.0);
  return m;
}

FeatureMask select_features(std::span<const FeatureVector> train, double p_threshold) {
  if (train.empty()) throw SelectionError("feature selection on an empty training set");
  const std::size_t dim = train.front().size();
  std::size_t n1 = 0;
  for (const auto& v : train) {
    if (v.size() != dim) throw SelectionError("feature vectors differ in dimensionality");
    n1 += v.label == Label::Left ? 1 : 0;
  }
  if (n1 == 0 || n1 == train.size())
    throw SelectionError("feature selection needs both classes in the training set");

  FeatureMask m;
  m.source_dim = dim;
  m.p_values.resize(dim);
  std::vector<double> left, right;
  left.reserve(n1);
  right.reserve(train.size() - n1);
  for (std::size_t i = 0; i < dim; ++i) {
    left.clear();
    right.clear();
    for (const auto& v : train) (v.label == Label::Left ? left : right).push_back(v.values[i]);
    m.p_values[i] = welch_t_test(left, right).p;
    if (m.p_values[i] < p_threshold) m.selected.push_back(i);
  }
  return m;
}

FeatureVector apply_mask(const FeatureVector& v, const FeatureMask& m) {
  if (v.size() != m.source_dim)
    throw SelectionError("mask expects " + std::to_string(m.source_dim) + " features, vector has " +
                         std::to_string(v.size()));
  FeatureVector out;
  out.label = v.label;
  out.values.reserve(m.selected.size());
  for (auto i : m.selected) {
    out.values.push_back(v.values[i]);
    if (!v.feature_names.empty()) out.feature_names.push_back(v.feature_names[i]);
  }
  return out;
}

}  // namespace mibench
