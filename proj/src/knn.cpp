#include <algorithm>
#include <numeric>

#include "mibench/classifiers.hpp"

namespace mibench {

using TE = TrainingError;

std::vector<std::size_t> KnnModel::neighbors(std::span<const double> x) const {
  std::vector<std::pair<double, std::size_t>> dist(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto r = data.row(i);
    double s = 0.0;
    for (std::size_t f = 0; f < r.size(); ++f) {
      const double d = r[f] - x[f];
      s += d * d;
    }
    dist[i] = {s, i};
  }
  // Lexicographic (distance, index): equal distances keep the lower index.
  const auto kth = dist.begin() + static_cast<std::ptrdiff_t>(k);
  std::partial_sort(dist.begin(), kth, dist.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

Label KnnModel::predict(std::span<const double> x) const {
  std::size_t votes = 0;
  for (auto i : neighbors(x)) votes += data.label(i) == Label::Left ? 1 : 0;
  return 2 * votes > k ? Label::Left : Label::Right;
}

KnnModel train_knn(const LabeledSet& train, std::size_t k) {
  if (train.dim() == 0) throw TE(TE::Kind::ZeroDimension, "kNN: zero-dimensional features");
  if (k == 0 || k % 2 == 0) throw TE(TE::Kind::BadParameter, "kNN: k must be odd and positive");
  if (k > train.size())
    throw TE(TE::Kind::BadParameter, "kNN: k = " + std::to_string(k) + " exceeds training size " +
                                         std::to_string(train.size()));
  return KnnModel{train, k};
}

}  // namespace mibench
