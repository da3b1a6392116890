#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mibench/data_model.hpp"
#include "mibench/spectral.hpp"

namespace mibench {

/// Raised by every trainer. `kind` lets the evaluation loop count a failed
/// repetition instead of aborting the sweep.
class TrainingError : public std::runtime_error {
 public:
  enum class Kind { ClassAbsent, ZeroDimension, NonFinite, Degenerate, NoConvergence, BadParameter };
  TrainingError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Dense row-major training data with labels in {0, 1}.
class LabeledSet {
 public:
  LabeledSet() = default;
  explicit LabeledSet(std::size_t dim) : dim_(dim) {}

  static LabeledSet from_features(std::span<const FeatureVector> vectors);

  void add(std::span<const double> x, Label y, std::uint32_t id = 0);

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return labels_.empty(); }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  Label label(std::size_t i) const { return labels_[i]; }
  std::uint32_t id(std::size_t i) const { return ids_[i]; }
  const std::vector<Label>& labels() const { return labels_; }
  std::size_t count(Label y) const;

  LabeledSet subset(std::span<const std::size_t> rows) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
  std::vector<Label> labels_;
  std::vector<std::uint32_t> ids_;  // caller-assigned identity, for tracking
};

enum class Algorithm { Lda, Svm, Cart, Knn };
std::string_view to_string(Algorithm a);  // "LDA", "SVM", "CART", "KNN"
Algorithm algorithm_from_string(std::string_view s);

// ---- LDA -------------------------------------------------------------------

struct LdaModel {
  std::vector<double> w;
  double b = 0.0;
  std::vector<double> mean0, mean1;
  std::vector<double> covariance;  // regularized pooled, d x d row-major

  double decision(std::span<const double> x) const;
};

/// Plug-in LDA on the pooled covariance, shrunk towards (trace/d) I by gamma.
LdaModel train_lda(const LabeledSet& train, double shrinkage);

// ---- SVM -------------------------------------------------------------------

enum class KernelType { Linear, Rbf };

struct Kernel {
  KernelType type = KernelType::Rbf;
  double sigma = 1.0;  // RBF bandwidth: exp(-|x - x'|^2 / (2 sigma^2))

  double operator()(std::span<const double> a, std::span<const double> b) const;
};

/// Median of pairwise Euclidean distances between training points.
double median_pairwise_distance(const LabeledSet& train);

struct SvmParams {
  Kernel kernel;
  double c = 1.0;
  double tol = 1e-3;
  std::size_t max_passes = 10000;  // iteration budget = max_passes * n
};

struct SvmModel {
  Kernel kernel;
  double c = 1.0;
  std::vector<double> support_vectors;  // row-major, dim columns
  std::size_t dim = 0;
  std::vector<double> coef;             // lambda_j * y_j, y in {-1, +1}
  std::vector<double> lambda;
  std::vector<int> sv_labels;           // -1 / +1
  std::vector<std::size_t> sv_index;    // row in the training set
  double b = 0.0;
  std::size_t iterations = 0;

  double decision(std::span<const double> x) const;
  /// Primal weights; only meaningful for the linear kernel.
  std::vector<double> linear_weights() const;
};

/// Diagnostics hook: called after every pair update with the dual objective.
using SvmObserver = std::function<void(std::size_t iteration, double dual_objective)>;

/// Soft-margin dual solved by pairwise (SMO) updates with second-order working
/// set selection, until the maximal KKT violation drops below tol.
SvmModel train_svm(const LabeledSet& train, const SvmParams& params,
                   const SvmObserver& observer = {});

// ---- CART ------------------------------------------------------------------

struct CartNode {
  // Internal node when feature >= 0; x[feature] >= threshold goes right.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  Label label = Label::Right;
  std::size_t count = 0;

  bool is_leaf() const { return feature < 0; }
};

struct CartModel {
  std::vector<CartNode> nodes;  // nodes[0] is the root
  std::size_t dim = 0;

  Label predict(std::span<const double> x) const;
  std::size_t leaf_count() const;
};

/// Greedy Gini CART. Ties: lowest feature index, then lowest threshold; leaf
/// vote ties go to class 0.
CartModel train_cart(const LabeledSet& train, std::size_t min_leaf);

// ---- kNN -------------------------------------------------------------------

struct KnnModel {
  LabeledSet data;
  std::size_t k = 3;

  Label predict(std::span<const double> x) const;
  /// Indices of the k nearest training rows, nearest first; equal distances
  /// are ordered by lower training index.
  std::vector<std::size_t> neighbors(std::span<const double> x) const;
};

KnnModel train_knn(const LabeledSet& train, std::size_t k);

// ---- uniform contract --------------------------------------------------------

using TrainedModel = std::variant<LdaModel, SvmModel, CartModel, KnnModel>;

std::size_t model_dim(const TrainedModel& model);

/// Decision value exactly 0 maps to class 0 for LDA and SVM.
Label predict(const TrainedModel& model, std::span<const double> x);

struct ClassifierConfig {
  double lda_shrinkage = 0.1;
  KernelType svm_kernel = KernelType::Rbf;
  std::optional<double> svm_sigma;  // empty: median heuristic
  double svm_c = 1.0;
  double svm_tol = 1e-3;
  std::size_t cart_min_leaf = 3;
  std::size_t knn_k = 3;
};

TrainedModel train(Algorithm algorithm, const LabeledSet& train, const ClassifierConfig& config);

}  // namespace mibench
