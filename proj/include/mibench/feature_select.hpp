#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "mibench/spectral.hpp"

namespace mibench {

class SelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
};

/// Two-sided Welch t-test (unequal variances, Welch-Satterthwaite df).
/// When both samples have zero variance: p = 1 for equal means, p = 0 otherwise.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct FeatureMask {
  std::vector<std::size_t> selected;  // strictly increasing
  std::size_t source_dim = 0;
  std::vector<double> p_values;

  static FeatureMask all(std::size_t dim);
};

/// Keeps feature i iff p_i < p_threshold.
FeatureMask select_features(std::span<const FeatureVector> train, double p_threshold);

FeatureVector apply_mask(const FeatureVector& v, const FeatureMask& m);

}  // namespace mibench
