#include <algorithm>
#include <cmath>
#include <numeric>

#include "mibench/classifiers.hpp"

namespace mibench {

using TE = TrainingError;

namespace {

// Weighted child Gini is 1 - score/n with score = sum_children sum_c n_c^2 / n_child.
// Scores are compared as exact fractions so ties resolve the same on every platform.
struct Score {
  __int128 num = 0;
  __int128 den = 1;

  static Score of(std::int64_t l0, std::int64_t l1, std::int64_t r0, std::int64_t r1) {
    const __int128 nl = l0 + l1;
    const __int128 nr = r0 + r1;
    return {(static_cast<__int128>(l0) * l0 + static_cast<__int128>(l1) * l1) * nr +
                (static_cast<__int128>(r0) * r0 + static_cast<__int128>(r1) * r1) * nl,
            nl * nr};
  }
  static Score parent(std::int64_t c0, std::int64_t c1) {
    return {static_cast<__int128>(c0) * c0 + static_cast<__int128>(c1) * c1, c0 + c1};
  }
  bool operator>(const Score& o) const { return num * o.den > o.num * den; }
};

class TreeBuilder {
 public:
  TreeBuilder(const LabeledSet& data, std::size_t min_leaf) : data_(data), min_leaf_(min_leaf) {}

  int build(std::vector<std::size_t>& rows) {
    std::int64_t c[2] = {0, 0};
    for (auto r : rows) ++c[to_int(data_.label(r))];
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[id].count = rows.size();
    nodes_[id].label = c[1] > c[0] ? Label::Left : Label::Right;
    if (c[0] == 0 || c[1] == 0 || rows.size() < 2 * min_leaf_) return id;

    Score best = Score::parent(c[0], c[1]);
    int best_feature = -1;
    double best_threshold = 0.0;

    std::vector<std::size_t> order(rows);
    for (std::size_t f = 0; f < data_.dim(); ++f) {
      auto value = [&](std::size_t r) { return data_.row(r)[f]; };
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
      std::int64_t left[2] = {0, 0};
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        ++left[to_int(data_.label(order[k]))];
        const double lo = value(order[k]);
        const double hi = value(order[k + 1]);
        if (!(lo < hi)) continue;
        const std::size_t n_left = k + 1;
        if (n_left < min_leaf_ || order.size() - n_left < min_leaf_) continue;
        const Score s = Score::of(left[0], left[1], c[0] - left[0], c[1] - left[1]);
        if (s > best) {
          best = s;
          best_feature = static_cast<int>(f);
          double mid = lo + (hi - lo) / 2.0;
          if (!(mid > lo)) mid = hi;
          best_threshold = mid;
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<std::size_t> lrows, rrows;
    for (auto r : rows)
      (data_.row(r)[static_cast<std::size_t>(best_feature)] >= best_threshold ? rrows : lrows).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(lrows);
    const int r = build(rrows);
    nodes_[id].feature = best_feature;
    nodes_[id].threshold = best_threshold;
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  std::vector<CartNode> take() { return std::move(nodes_); }

 private:
  const LabeledSet& data_;
  std::size_t min_leaf_;
  std::vector<CartNode> nodes_;
};

}  // namespace

Label CartModel::predict(std::span<const double> x) const {
  int id = 0;
  while (!nodes[id].is_leaf()) {
    const auto& n = nodes[id];
    id = x[static_cast<std::size_t>(n.feature)] >= n.threshold ? n.right : n.left;
  }
  return nodes[id].label;
}

std::size_t CartModel::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const CartNode& n) { return n.is_leaf(); }));
}

CartModel train_cart(const LabeledSet& train, std::size_t min_leaf) {
  if (train.dim() == 0) throw TE(TE::Kind::ZeroDimension, "CART: zero-dimensional features");
  if (train.empty()) throw TE(TE::Kind::ClassAbsent, "CART: empty training set");
  if (min_leaf == 0) throw TE(TE::Kind::BadParameter, "CART: min_leaf must be positive");
  for (std::size_t i = 0; i < train.size(); ++i)
    for (double v : train.row(i))
      if (!std::isfinite(v)) throw TE(TE::Kind::NonFinite, "CART: non-finite feature value");

  std::vector<std::size_t> rows(train.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  TreeBuilder builder(train, min_leaf);
  builder.build(rows);
  CartModel m;
  m.nodes = builder.take();
  m.dim = train.dim();
  return m;
}

}  // namespace mibench
