#include "mibench/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

namespace mibench {

LabeledSet LabeledSet::from_features(std::span<const FeatureVector> vectors) {
  LabeledSet s(vectors.empty() ? 0 : vectors.front().size());
  for (std::size_t i = 0; i < vectors.size(); ++i)
    s.add(vectors[i].values, vectors[i].label, static_cast<std::uint32_t>(i));
  return s;
}

void LabeledSet::add(std::span<const double> x, Label y, std::uint32_t id) {
  if (labels_.empty() && data_.empty() && dim_ == 0) dim_ = x.size();
  if (x.size() != dim_)
    throw TrainingError(TrainingError::Kind::BadParameter,
                        "row has " + std::to_string(x.size()) + " features, set has " +
                            std::to_string(dim_));
  data_.insert(data_.end(), x.begin(), x.end());
  labels_.push_back(y);
  ids_.push_back(id);
}

std::size_t LabeledSet::count(Label y) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), y));
}

LabeledSet LabeledSet::subset(std::span<const std::size_t> rows) const {
  LabeledSet out(dim_);
  out.data_.reserve(rows.size() * dim_);
  for (auto r : rows) out.add(row(r), labels_[r], ids_[r]);
  return out;
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Lda: return "LDA";
    case Algorithm::Svm: return "SVM";
    case Algorithm::Cart: return "CART";
    case Algorithm::Knn: return "KNN";
  }
  return "?";
}

Algorithm algorithm_from_string(std::string_view s) {
  std::string u(s);
  std::transform(u.begin(), u.end(), u.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (u == "LDA") return Algorithm::Lda;
  if (u == "SVM") return Algorithm::Svm;
  if (u == "CART") return Algorithm::Cart;
  if (u == "KNN") return Algorithm::Knn;
  throw std::invalid_argument("unknown algorithm '" + std::string(s) + "'");
}

std::size_t model_dim(const TrainedModel& model) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LdaModel>) return m.w.size();
        else if constexpr (std::is_same_v<T, KnnModel>) return m.data.dim();
        else return m.dim;
      },
      model);
}

Label predict(const TrainedModel& model, std::span<const double> x) {
  if (x.size() != model_dim(model))
    throw std::invalid_argument("query has " + std::to_string(x.size()) +
                                " features, model expects " + std::to_string(model_dim(model)));
  return std::visit(
      [&](const auto& m) -> Label {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LdaModel> || std::is_same_v<T, SvmModel>)
          return m.decision(x) > 0.0 ? Label::Left : Label::Right;
        else
          return m.predict(x);
      },
      model);
}

TrainedModel train(Algorithm algorithm, const LabeledSet& data, const ClassifierConfig& config) {
  switch (algorithm) {
    case Algorithm::Lda: return train_lda(data, config.lda_shrinkage);
    case Algorithm::Svm: {
      SvmParams p;
      p.kernel.type = config.svm_kernel;
      if (config.svm_kernel == KernelType::Rbf)
        p.kernel.sigma = config.svm_sigma ? *config.svm_sigma : median_pairwise_distance(data);
      p.c = config.svm_c;
      p.tol = config.svm_tol;
      return train_svm(data, p);
    }
    case Algorithm::Cart: return train_cart(data, config.cart_min_leaf);
    case Algorithm::Knn: return train_knn(data, config.knn_k);
  }
  throw std::logic_error("unreachable");
}

}  // namespace mibench
