#include <algorithm>
#include <cmath>
#include <limits>

#include "mibench/classifiers.hpp"

namespace mibench {

using TE = TrainingError;

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

constexpr double kTau = 1e-12;

}  // namespace

double Kernel::operator()(std::span<const double> a, std::span<const double> b) const {
  if (type == KernelType::Linear) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }
  return std::exp(-squared_distance(a, b) / (2.0 * sigma * sigma));
}

double median_pairwise_distance(const LabeledSet& train) {
  std::vector<double> d;
  d.reserve(train.size() * (train.size() - 1) / 2);
  for (std::size_t i = 0; i < train.size(); ++i)
    for (std::size_t j = i + 1; j < train.size(); ++j)
      d.push_back(std::sqrt(squared_distance(train.row(i), train.row(j))));
  if (d.empty()) return 1.0;
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  double med = *mid;
  if (d.size() % 2 == 0) med = 0.5 * (med + *std::max_element(d.begin(), mid));
  // All-identical inputs have no scale; fall back to unit bandwidth.
  return med > 0.0 ? med : 1.0;
}

double SvmModel::decision(std::span<const double> x) const {
  double s = b;
  for (std::size_t j = 0; j < coef.size(); ++j)
    s += coef[j] * kernel(std::span<const double>(support_vectors.data() + j * dim, dim), x);
  return s;
}

std::vector<double> SvmModel::linear_weights() const {
  std::vector<double> w(dim, 0.0);
  for (std::size_t j = 0; j < coef.size(); ++j)
    for (std::size_t i = 0; i < dim; ++i) w[i] += coef[j] * support_vectors[j * dim + i];
  return w;
}

SvmModel train_svm(const LabeledSet& train, const SvmParams& params, const SvmObserver& observer) {
  const std::size_t n = train.size();
  const std::size_t d = train.dim();
  if (d == 0) throw TE(TE::Kind::ZeroDimension, "SVM: zero-dimensional features");
  if (train.count(Label::Left) == 0 || train.count(Label::Right) == 0)
    throw TE(TE::Kind::ClassAbsent, "SVM: a class is absent");
  if (!(params.c > 0) || !(params.tol > 0))
    throw TE(TE::Kind::BadParameter, "SVM: C and tol must be positive");
  if (params.kernel.type == KernelType::Rbf && !(params.kernel.sigma > 0))
    throw TE(TE::Kind::BadParameter, "SVM: RBF sigma must be positive");
  for (std::size_t i = 0; i < n; ++i)
    for (double v : train.row(i))
      if (!std::isfinite(v)) throw TE(TE::Kind::NonFinite, "SVM: non-finite feature value");

  const double C = params.c;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = train.label(i) == Label::Left ? 1.0 : -1.0;

  // Q_ij = y_i y_j K_ij, kept in full.
  std::vector<double> Q(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double q = y[i] * y[j] * params.kernel(train.row(i), train.row(j));
      Q[i * n + j] = q;
      Q[j * n + i] = q;
    }

  // Minimize f(a) = 1/2 a'Qa - e'a subject to y'a = 0, 0 <= a <= C.
  std::vector<double> alpha(n, 0.0);
  std::vector<double> G(n, -1.0);
  auto is_up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0); };
  auto is_low = [&](std::size_t t) { return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < C); };

  const std::size_t budget = std::max<std::size_t>(params.max_passes * n, 1);
  std::size_t iter = 0;
  for (;; ++iter) {
    // i: maximal violator in I_up.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t)
      if (is_up(t) && -y[t] * G[t] > gmax) {
        gmax = -y[t] * G[t];
        i = t;
      }
    // j: second-order choice in I_low, tracking the minimum for the stopping gap.
    double gmin = std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!is_low(t)) continue;
      const double v = -y[t] * G[t];
      gmin = std::min(gmin, v);
      if (i == n || v >= gmax) continue;
      const double bgap = gmax - v;
      double a = Q[i * n + i] + Q[t * n + t] - 2.0 * y[i] * y[t] * Q[i * n + t];
      if (a <= 0) a = kTau;
      const double score = -(bgap * bgap) / a;
      if (score < best) {
        best = score;
        j = t;
      }
    }
    if (i == n || j == n || gmax - gmin < params.tol) break;
    if (iter >= budget)
      throw TE(TE::Kind::NoConvergence,
               "SVM: no convergence after " + std::to_string(iter) + " iterations (KKT gap " +
                   std::to_string(gmax - gmin) + ")");

    const double old_i = alpha[i];
    const double old_j = alpha[j];
    const double Qij = Q[i * n + j];
    if (y[i] != y[j]) {
      double quad = Q[i * n + i] + Q[j * n + j] + 2.0 * Qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = Q[i * n + i] + Q[j * n + j] - 2.0 * Qij;
      if (quad <= 0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }

    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) G[t] += Q[i * n + t] * di + Q[j * n + t] * dj;

    if (observer) {
      double f = 0.0;
      for (std::size_t t = 0; t < n; ++t) f += alpha[t] * (G[t] - 1.0);
      observer(iter + 1, -0.5 * f);
    }
  }

  // Bias: average over free vectors, else midpoint of the feasible interval.
  double sum_free = 0.0;
  std::size_t n_free = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double v = -y[t] * G[t];  // y_t - sum_k a_k y_k K(x_k, x_t)
    if (alpha[t] > 0 && alpha[t] < C) {
      sum_free += v;
      ++n_free;
    } else if ((alpha[t] == 0) == (y[t] > 0)) {
      lower = std::max(lower, v);
    } else {
      upper = std::min(upper, v);
    }
  }
  double b;
  if (n_free > 0) b = sum_free / static_cast<double>(n_free);
  else if (std::isfinite(lower) && std::isfinite(upper)) b = 0.5 * (lower + upper);
  else b = std::isfinite(lower) ? lower : upper;

  SvmModel m;
  m.kernel = params.kernel;
  m.c = C;
  m.dim = d;
  m.b = b;
  m.iterations = iter;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] <= 0) continue;
    const auto r = train.row(t);
    m.support_vectors.insert(m.support_vectors.end(), r.begin(), r.end());
    m.lambda.push_back(alpha[t]);
    m.coef.push_back(alpha[t] * y[t]);
    m.sv_labels.push_back(y[t] > 0 ? 1 : -1);
    m.sv_index.push_back(t);
  }
  return m;
}

}  // namespace mibench
