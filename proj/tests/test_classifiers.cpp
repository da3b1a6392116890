#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mibench/classifiers.hpp"
#include "mibench/random.hpp"
#include "oracles.hpp"

using namespace mibench;

namespace {

constexpr Label R = Label::Right;  // class 0
constexpr Label L = Label::Left;   // class 1

LabeledSet make(std::initializer_list<std::pair<std::vector<double>, Label>> rows) {
  LabeledSet s(rows.begin()->first.size());
  std::uint32_t id = 0;
  for (const auto& [x, y] : rows) s.add(x, y, id++);
  return s;
}

// Two Gaussian blobs in d dimensions, means separated by `sep` along every axis.
LabeledSet blobs(std::size_t per_class, std::size_t d, double sep, std::uint64_t seed) {
  Rng rng(seed);
  LabeledSet s(d);
  std::vector<double> x(d);
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const Label y = i % 2 ? L : R;
    for (auto& v : x) v = rng.normal() + (y == L ? sep : 0.0);
    s.add(x, y, static_cast<std::uint32_t>(i));
  }
  return s;
}

// Small-integer grid data, so that ties between split scores and distances are common.
LabeledSet grid(std::size_t n, std::size_t d, int range, std::uint64_t seed) {
  Rng rng(seed);
  LabeledSet s(d);
  std::vector<double> x(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : x) v = static_cast<double>(rng.below(static_cast<std::uint64_t>(range)));
    s.add(x, rng.below(2) ? L : R, static_cast<std::uint32_t>(i));
  }
  return s;
}

std::vector<double> point(double a, double b) { return {a, b}; }

}  // namespace

// ---- LDA ---------------------------------------------------------------------

TEST_CASE("LDA: toy example with shrinkage 0.1 puts the boundary at x1 = 1") {
  const auto train = make({{{0, 0}, R}, {{0, 1}, R}, {{2, 0}, L}, {{2, 1}, L}});
  const auto m = train_lda(train, 0.1);
  CHECK(predict(TrainedModel{m}, point(0.5, 0.7)) == R);
  CHECK(predict(TrainedModel{m}, point(1.5, 0.2)) == L);
  CHECK(std::abs(m.w[1]) < 1e-12 * std::abs(m.w[0]));
  for (double y : {-3.0, 0.0, 0.4, 7.0}) CHECK(std::abs(m.decision(point(1.0, y))) < 1e-9 * std::abs(m.w[0]));
  CHECK(m.mean0 == std::vector<double>{0, 0.5});
  CHECK(m.mean1 == std::vector<double>{2, 0.5});
}

TEST_CASE("LDA: equal class means both lie on the boundary") {
  const auto train = make({{{1, 0}, R}, {{-1, 0}, R}, {{0, 2}, L}, {{0, -2}, L}, {{0.5, 0.5}, L}, {{-0.5, -0.5}, L}});
  const auto m = train_lda(train, 0.1);
  CHECK(std::abs(m.decision(m.mean0)) < 1e-12);
  CHECK(std::abs(m.decision(m.mean1)) < 1e-12);
}

TEST_CASE("LDA: 1-D Gaussians approach the Bayes rule") {
  Rng rng(2024);
  LabeledSet train(1);
  for (int i = 0; i < 10000; ++i) {
    const double z[1] = {rng.normal() - 1.0};
    train.add(z, R);
    const double o[1] = {rng.normal() + 1.0};
    train.add(o, L);
  }
  const auto m = train_lda(train, 0.01);
  const double threshold = -m.b / m.w[0];
  CHECK(std::abs(threshold) < 0.05);

  std::size_t correct = 0;
  const std::size_t n_test = 100000;
  for (std::size_t i = 0; i < n_test; ++i) {
    const double z[1] = {rng.normal() - 1.0};
    correct += predict(TrainedModel{m}, z) == R;
    const double o[1] = {rng.normal() + 1.0};
    correct += predict(TrainedModel{m}, o) == L;
  }
  const double bayes = 0.5 * std::erfc(-1.0 / std::sqrt(2.0));  // Phi(1)
  CHECK(std::abs(double(correct) / double(2 * n_test) - bayes) < 0.01);
}

TEST_CASE("LDA: labels are invariant under a common invertible affine map") {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 1 + rng.below(5);
    const auto train = blobs(25, d, 1.0, 1000 + trial);
    // A = I + 0.5 * G keeps conditioning reasonable.
    std::vector<double> A(d * d), c(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) A[i * d + j] = (i == j) + 0.5 * rng.normal();
      c[i] = 5 * rng.normal();
    }
    auto map = [&](std::span<const double> x) {
      std::vector<double> y(c);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) y[i] += A[i * d + j] * x[j];
      return y;
    };
    LabeledSet mapped(d);
    for (std::size_t i = 0; i < train.size(); ++i) mapped.add(map(train.row(i)), train.label(i));

    const auto m0 = train_lda(train, 0.0);
    const auto m1 = train_lda(mapped, 0.0);
    for (int q = 0; q < 50; ++q) {
      std::vector<double> x(d);
      for (auto& v : x) v = 2 * rng.normal() + 0.5;
      const double dv = m0.decision(x);
      if (std::abs(dv) < 1e-6) continue;
      CHECK(predict(TrainedModel{m0}, x) == predict(TrainedModel{m1}, map(x)));
    }
  }
}

TEST_CASE("LDA errors") {
  const auto one_class = make({{{0, 0}, R}, {{1, 1}, R}});
  CHECK_THROWS_AS(train_lda(one_class, 0.1), TrainingError);
  CHECK_THROWS_AS(train_lda(LabeledSet(0), 0.1), TrainingError);
  const auto bad = make({{{0, NAN}, R}, {{1, 1}, L}});
  CHECK_THROWS_AS(train_lda(bad, 0.1), TrainingError);
  try {
    train_lda(one_class, 0.1);
  } catch (const TrainingError& e) {
    CHECK(e.kind() == TrainingError::Kind::ClassAbsent);
  }
}

// ---- SVM ---------------------------------------------------------------------

TEST_CASE("SVM: hand-solved hard-margin pair") {
  const auto train = make({{{0, 0}, R}, {{2, 2}, L}});
  SvmParams p;
  p.kernel.type = KernelType::Linear;
  p.c = 1e6;
  const auto m = train_svm(train, p);
  const auto w = m.linear_weights();
  CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(w[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(m.b == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(1.0 / std::hypot(w[0], w[1]) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  // (1, 1) sits on the boundary.
  CHECK(m.decision(point(1, 1)) == 0.0);
  CHECK(predict(TrainedModel{m}, point(1, 1)) == R);
  CHECK(predict(TrainedModel{m}, point(0, 0)) == R);
  CHECK(predict(TrainedModel{m}, point(2, 2)) == L);
}

TEST_CASE("SVM: separable data is fit exactly with large C") {
  const auto train = blobs(30, 3, 8.0, 5);
  SvmParams p;
  p.kernel.type = KernelType::Linear;
  p.c = 1e4;
  const auto m = train_svm(train, p);
  for (std::size_t i = 0; i < train.size(); ++i) CHECK(predict(TrainedModel{m}, train.row(i)) == train.label(i));
}

TEST_CASE("SVM: XOR needs the RBF kernel") {
  const auto train = make({{{0, 0}, R}, {{1, 1}, R}, {{0, 1}, L}, {{1, 0}, L}});
  SvmParams p;
  p.kernel = {KernelType::Rbf, 0.5};
  p.c = 10;
  const auto m = train_svm(train, p);
  for (std::size_t i = 0; i < train.size(); ++i) CHECK(predict(TrainedModel{m}, train.row(i)) == train.label(i));

  p.kernel.type = KernelType::Linear;
  const auto lin = train_svm(train, p);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < train.size(); ++i) correct += predict(TrainedModel{lin}, train.row(i)) == train.label(i);
  CHECK(correct < 4);
}

TEST_CASE("SVM: KKT certificate and non-decreasing dual objective") {
  for (auto type : {KernelType::Linear, KernelType::Rbf}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto train = blobs(30, 4, 1.0, seed);
      SvmParams p;
      p.kernel.type = type;
      p.kernel.sigma = median_pairwise_distance(train);
      p.c = 1.0;
      p.tol = 1e-3;
      std::vector<double> dual;
      const auto m = train_svm(train, p, [&](std::size_t, double w) { dual.push_back(w); });

      REQUIRE_FALSE(dual.empty());
      for (std::size_t i = 1; i < dual.size(); ++i) CHECK(dual[i] >= dual[i - 1] - 1e-12 * std::abs(dual[i - 1]));

      std::vector<double> lambda(train.size(), 0.0);
      double balance = 0;
      for (std::size_t j = 0; j < m.sv_index.size(); ++j) {
        lambda[m.sv_index[j]] = m.lambda[j];
        CHECK(m.lambda[j] > 0);
        CHECK(m.lambda[j] <= p.c);
        balance += m.lambda[j] * m.sv_labels[j];
      }
      CHECK(std::abs(balance) <= p.tol);
      const double slack = p.tol + 1e-9;
      for (std::size_t i = 0; i < train.size(); ++i) {
        const double y = train.label(i) == L ? 1.0 : -1.0;
        const double yf = y * m.decision(train.row(i));
        if (lambda[i] == 0)
          CHECK(yf >= 1 - slack);
        else if (lambda[i] < p.c)
          CHECK(std::abs(yf - 1) <= slack);
        else
          CHECK(yf <= 1 + slack);
      }
    }
  }
}

TEST_CASE("SVM: iteration budget exhaustion reports the count") {
  const auto train = blobs(20, 2, 0.5, 9);
  SvmParams p;
  p.tol = 1e-12;
  p.max_passes = 0;
  p.kernel.sigma = 1.0;
  try {
    train_svm(train, p);
    FAIL("expected NoConvergence");
  } catch (const TrainingError& e) {
    CHECK(e.kind() == TrainingError::Kind::NoConvergence);
    CHECK(std::string(e.what()).find("iterations") != std::string::npos);
  }
}

TEST_CASE("SVM errors and median heuristic") {
  SvmParams p;
  CHECK_THROWS_AS(train_svm(make({{{0, 0}, R}, {{1, 1}, R}}), p), TrainingError);
  p.c = 0;
  CHECK_THROWS_AS(train_svm(make({{{0, 0}, R}, {{1, 1}, L}}), p), TrainingError);

  // Distances: 3, 4, 5 -> median 4.
  const auto tri = make({{{0, 0}, R}, {{3, 0}, L}, {{0, 4}, L}});
  CHECK(median_pairwise_distance(tri) == doctest::Approx(4.0));
}

// ---- CART --------------------------------------------------------------------

TEST_CASE("CART: single split at 4.5 and routing at the threshold") {
  LabeledSet train(1);
  for (double v : {1.0, 2.0, 3.0}) train.add(std::vector<double>{v}, R);
  for (double v : {6.0, 7.0, 8.0}) train.add(std::vector<double>{v}, L);
  const auto m = train_cart(train, 3);
  REQUIRE(m.nodes.size() == 3);
  CHECK(m.nodes[0].feature == 0);
  CHECK(m.nodes[0].threshold == 4.5);
  CHECK(m.predict(std::vector<double>{0.0}) == R);
  CHECK(m.predict(std::vector<double>{10.0}) == L);
  CHECK(m.predict(std::vector<double>{4.5}) == L);
  CHECK(m.nodes[m.nodes[0].left].count == 3);
  CHECK(m.nodes[m.nodes[0].right].count == 3);
}

TEST_CASE("CART: pure node is a single leaf") {
  const auto train = make({{{0, 0}, L}, {{1, 5}, L}, {{2, 3}, L}});
  const auto m = train_cart(train, 1);
  CHECK(m.nodes.size() == 1);
  CHECK(m.predict(point(9, 9)) == L);
}

TEST_CASE("CART: no admissible split leaves the majority at the root") {
  LabeledSet train(1);
  const std::pair<double, Label> pts[] = {{1, R}, {2, L}, {3, R}, {4, L}, {5, L}};
  for (auto [v, y] : pts) train.add(std::vector<double>{v}, y);
  const auto m = train_cart(train, 3);  // any split leaves < 3 on one side
  CHECK(m.nodes.size() == 1);
  CHECK(m.predict(std::vector<double>{0.0}) == L);

  // Vote tie at a leaf goes to class 0.
  LabeledSet tie(1);
  tie.add(std::vector<double>{1}, L);
  tie.add(std::vector<double>{2}, R);
  CHECK(train_cart(tie, 2).predict(std::vector<double>{1.0}) == R);
}

TEST_CASE("CART: tie between features resolves to the lowest index") {
  // Both features separate the classes perfectly at 1.5.
  const auto train = make({{{1, 1}, R}, {{1, 1}, R}, {{2, 2}, L}, {{2, 2}, L}});
  const auto m = train_cart(train, 1);
  CHECK(m.nodes[0].feature == 0);
}

TEST_CASE("CART agrees with exhaustive enumeration") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 8 + rng.below(50);
    const std::size_t d = 1 + rng.below(4);
    const std::size_t min_leaf = 1 + rng.below(4);
    const auto train = trial % 2 ? grid(n, d, 6, 500 + trial) : blobs(n / 2 + 1, d, 0.7, 500 + trial);
    const auto m = train_cart(train, min_leaf);
    std::vector<std::size_t> rows(train.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    const auto ref = oracle::cart_build(train, rows, min_leaf);
    CHECK(m.leaf_count() == oracle::cart_leaves(*ref));
    CHECK(m.nodes[0].feature == ref->feature);
    for (std::size_t i = 0; i < train.size(); ++i) CHECK(m.predict(train.row(i)) == oracle::cart_predict(*ref, train.row(i)));
    for (int q = 0; q < 30; ++q) {
      std::vector<double> x(d);
      for (auto& v : x) v = trial % 2 ? double(rng.below(7)) - 0.5 : 2 * rng.normal();
      CHECK(m.predict(x) == oracle::cart_predict(*ref, x));
    }
    for (const auto& node : m.nodes) {
      if (node.is_leaf()) CHECK(node.count >= min_leaf);
      else CHECK(std::isfinite(node.threshold));
    }
  }
}

TEST_CASE("CART: min_leaf 1 on distinct points fits the training set") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const auto train = blobs(40, 3, 0.3, seed);
    const auto m = train_cart(train, 1);
    for (std::size_t i = 0; i < train.size(); ++i) CHECK(m.predict(train.row(i)) == train.label(i));
  }
}

// ---- kNN ---------------------------------------------------------------------

TEST_CASE("kNN examples") {
  const auto train = make({{{0, 0}, R}, {{1, 0}, R}, {{0, 1}, L}, {{5, 5}, L}, {{6, 5}, R}});
  CHECK(train_knn(train, 1).predict(point(5, 5)) == L);
  // Nearest three to the origin: labels {0, 0, 1}.
  CHECK(train_knn(train, 3).predict(point(0.1, 0.1)) == R);

  // Points 1 and 2 are both at distance 1 from the origin: the lower index wins rank 2.
  const auto tie = make({{{0, 0}, L}, {{1, 0}, R}, {{0, 1}, L}, {{0, -1}, L}});
  const auto m = train_knn(tie, 1);
  const auto nn = KnnModel{tie, 3}.neighbors(point(0, 0));
  CHECK(nn == std::vector<std::size_t>{0, 1, 2});
  CHECK(m.predict(point(0, 0)) == L);
}

TEST_CASE("kNN errors") {
  const auto train = make({{{0, 0}, R}, {{1, 0}, L}});
  CHECK_THROWS_AS(train_knn(train, 2), TrainingError);
  CHECK_THROWS_AS(train_knn(train, 3), TrainingError);
  CHECK_THROWS_AS(train_knn(train, 0), TrainingError);
}

TEST_CASE("kNN agrees with a full sort, including distance ties") {
  Rng rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 1 + rng.below(4);
    const auto train = trial % 2 ? grid(30, d, 4, trial) : blobs(15, d, 1.0, trial);
    for (std::size_t k : {1u, 3u, 5u}) {
      const auto m = train_knn(train, k);
      for (int q = 0; q < 20; ++q) {
        std::vector<double> x(d);
        for (auto& v : x) v = trial % 2 ? double(rng.below(4)) : rng.normal();
        CHECK(m.neighbors(x) == oracle::knn_neighbors(train, x, k));
        CHECK(m.predict(x) == oracle::knn_predict(train, x, k));
      }
    }
  }
}

TEST_CASE("kNN is invariant to training order when distances are distinct") {
  const auto train = blobs(25, 3, 1.0, 4);
  Rng rng(5);
  std::vector<std::size_t> perm(train.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  rng.shuffle(std::span<std::size_t>(perm));
  const auto shuffled = train.subset(perm);
  const auto a = train_knn(train, 3), b = train_knn(shuffled, 3);
  for (int q = 0; q < 200; ++q) {
    std::vector<double> x{rng.normal(), rng.normal(), rng.normal()};
    CHECK(a.predict(x) == b.predict(x));
  }
}

// ---- uniform contract ----------------------------------------------------------

TEST_CASE("predict: LDA boundary rule with hand-set weights") {
  LdaModel m;
  m.w = {1, 0};
  m.b = -1;
  CHECK(predict(TrainedModel{m}, point(2, 5)) == L);
  CHECK(predict(TrainedModel{m}, point(0, 5)) == R);
  CHECK(predict(TrainedModel{m}, point(1, 5)) == R);
  CHECK_THROWS_AS(predict(TrainedModel{m}, std::vector<double>{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("all trainers are deterministic") {
  const auto data = blobs(30, 5, 0.8, 12);
  ClassifierConfig cfg;
  for (auto a : {Algorithm::Lda, Algorithm::Svm, Algorithm::Cart, Algorithm::Knn}) {
    const auto m1 = mibench::train(a, data, cfg);
    const auto m2 = mibench::train(a, data, cfg);
    CHECK(model_dim(m1) == 5);
    Rng rng(3);
    for (int q = 0; q < 100; ++q) {
      std::vector<double> x(5);
      for (auto& v : x) v = rng.normal();
      CHECK(predict(m1, x) == predict(m2, x));
    }
    if (a == Algorithm::Lda) {
      CHECK(std::get<LdaModel>(m1).w == std::get<LdaModel>(m2).w);
      CHECK(std::get<LdaModel>(m1).b == std::get<LdaModel>(m2).b);
    }
    if (a == Algorithm::Svm) {
      CHECK(std::get<SvmModel>(m1).lambda == std::get<SvmModel>(m2).lambda);
      CHECK(std::get<SvmModel>(m1).b == std::get<SvmModel>(m2).b);
    }
  }
}

TEST_CASE("algorithm names") {
  CHECK(to_string(Algorithm::Cart) == "CART");
  CHECK(algorithm_from_string("svm") == Algorithm::Svm);
  CHECK(algorithm_from_string("KNN") == Algorithm::Knn);
}
